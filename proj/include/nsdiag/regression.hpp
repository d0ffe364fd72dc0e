#pragma once

#include <string>
#include <vector>

#include "nsdiag/classify.hpp"
#include "nsdiag/corpus.hpp"
#include "nsdiag/oracle.hpp"

namespace nsdiag {

/// Condition tags understood by run_check, in report order.
const std::vector<std::string>& check_tags();

/// Comma list of tags; "all" expands to every tag and "Thm2" to Thm2-b,Thm2-c.
/// Unknown tags are a ConfigError. Duplicates are dropped, order kept.
std::vector<std::string> expand_checks(const std::string& csv);

struct CheckSettings {
  ClassifyOptions classify;
  int invex_grid = 41;  // points per axis over the domain box
  bool thm5_oracle = true;
};

/// Runs one classifier and returns its verdict, tagged with `tag`.
Verdict run_check(const std::string& tag, const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                  const SampleSchedule& s, const CheckSettings& settings = {});

/// local_min or isolated_order2 around x.
OracleReport run_oracle(const std::string& kind, const ProperFunction& f, const Vector& x, const GridSpec& grid);

struct ExpectationResult {
  Expectation expected;
  bool ok = false;
  std::string observed;  // value / trend / outcome actually produced
};

struct EntryResult {
  std::string name;
  std::vector<ExpectationResult> results;
  bool ok() const;
  int failures() const;
};

/// Re-derives every expectation of the entry.
EntryResult run_entry(const CorpusEntry& entry, const SampleSchedule& s, const CheckSettings& settings = {});

}  // namespace nsdiag
