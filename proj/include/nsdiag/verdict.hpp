#pragma once

#include <string>
#include <vector>

#include "nsdiag/core.hpp"

namespace nsdiag {

enum class Outcome { pass, fail, inconclusive, precondition_not_met };

std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

/// One estimate backing a verdict.
struct EstimateWitness {
  Vector direction;
  std::string kind;  // dini1, hadamard2, alpha, ...
  LiminfEstimate estimate;
};

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  std::string condition_id;
  std::vector<EstimateWitness> witnesses;
  double zero_band = 1e-6;
  std::string note;
};

/// Three-valued truth of a numeric condition on an estimate.
enum class Truth { yes, no, unknown };

// Conditions read the estimate as the interval [lower(), upper()] when the
// trend is converged, as +inf / -inf when it diverges, and as unknown
// otherwise.

/// est >= offset - band
Truth holds_ge(const LiminfEstimate& est, double band, double offset = 0.0);
/// est > offset + band
Truth holds_gt(const LiminfEstimate& est, double band, double offset = 0.0);
/// |est - offset| <= band
Truth holds_zero(const LiminfEstimate& est, double band, double offset = 0.0);

/// Accumulates per-direction condition results into a verdict.
class VerdictBuilder {
 public:
  VerdictBuilder(std::string condition_id, double zero_band) {
    v_.condition_id = std::move(condition_id);
    v_.zero_band = zero_band;
  }
  /// Records a condition result; violations and unknowns keep their estimate.
  void record(Truth t, const Vector& u, const std::string& kind, const LiminfEstimate& est);
  bool failed() const { return failures_ > 0; }
  Verdict finish(std::string note = {});

 private:
  Verdict v_;
  std::vector<EstimateWitness> unknown_;
  int failures_ = 0;
};

}  // namespace nsdiag
