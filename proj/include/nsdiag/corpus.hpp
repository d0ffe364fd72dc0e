#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsdiag/function.hpp"

namespace nsdiag {

/// What an expected value refers to.
enum class ExpectKind {
  dini1,
  dini2,
  hadamard1,
  hadamard2,       // x1star = 0
  ginchev2,        // third member of the Ginchev chain
  growth2,         // limit of [f(x + t v) - f(x)] / t^2 along a fixed ray
  verdict,         // classifier outcome for `check`
  oracle,          // oracle outcome for `check` (local_min, isolated_order2)
};

struct Expectation {
  ExpectKind kind = ExpectKind::hadamard1;
  Vector direction;               // derivative kinds only
  std::optional<double> value;    // expected limit
  double tolerance = 1e-6;        // absolute
  std::optional<Trend> trend;     // expected trend label (divergent cases)
  std::string check;              // condition tag or oracle kind
  std::string outcome;            // PASS / FAIL / YES / NO / PRECONDITION_NOT_MET
  std::string basis;              // where the value comes from

  std::string label() const;
};

struct CorpusEntry {
  ProperFunction function;
  Vector candidate;
  std::vector<Expectation> expected;
};

/// The reference entries, in a fixed order.
std::vector<CorpusEntry> corpus();

/// Entry by name; ConfigError when unknown.
CorpusEntry corpus_entry(const std::string& name);

std::vector<std::string> corpus_names();

// Individual functions.
ProperFunction make_neg_quad();
ProperFunction make_ex1();
ProperFunction make_parabola_trap();
ProperFunction make_sqnorm(int dim = 2);
ProperFunction make_quartic(int dim = 2);
ProperFunction make_cube1d();
ProperFunction make_abs1d();
ProperFunction make_half1d();

/// f(x) = <a, x>.
ProperFunction make_linear(const Vector& a);
/// f(x) = 1/2 x^T Q x with gradient Q x (Q symmetrized).
ProperFunction make_quadratic(const Eigen::MatrixXd& Q);
/// g(x) = f(x - shift).
ProperFunction make_shifted(const ProperFunction& f, const Vector& shift);

}  // namespace nsdiag
