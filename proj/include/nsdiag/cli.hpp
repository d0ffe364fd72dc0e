#pragma once

#include <iosfwd>
#include <string>

#include "nsdiag/derivatives.hpp"

namespace nsdiag {

// Exit codes describe whether the run happened, not what it found.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // corpus mismatch, suite disagreement, internal error
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;

/// Corpus name or function-file path; ConfigError when neither.
ProperFunction resolve_function(const std::string& name_or_path, std::string* source_text = nullptr);

/// fibonacci:N | axes | explicit:<file with one comma-separated vector per line>.
DirectionSet parse_directions(const std::string& spec, int dim, std::uint64_t seed);

/// Subcommands analyze, corpus and vecopt. argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nsdiag
