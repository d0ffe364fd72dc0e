#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsdiag/derivatives.hpp"
#include "nsdiag/oracle.hpp"
#include "nsdiag/verdict.hpp"

namespace nsdiag {

struct ClassifyOptions {
  double zero_band = 1e-6;
  bool use_witnesses = true;
  /// Stop sweeping directions at the first violation.
  bool stop_at_first = false;

  EstimatorOptions estimator() const { return {zero_band, use_witnesses}; }
};

/// hadamard1 >= 0 and hadamard2(x1* = 0) >= 0 on every direction.
Verdict check_necessary_local_min(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                  const SampleSchedule& s, const ClassifyOptions& opt = {});

/// dini1 >= 0 everywhere and dini2 >= 0 where dini1 = 0.
Verdict check_necessary_local_min_dini(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                       const SampleSchedule& s, const ClassifyOptions& opt = {});

enum class Thm2Variant { b, c };

/// b: hadamard1 >= 0 and hadamard2 > 0 everywhere.
/// c: hadamard1 >= 0 everywhere and hadamard2 > 0 where hadamard1 = 0.
Verdict check_isolated_order2(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                              const SampleSchedule& s, Thm2Variant variant, const ClassifyOptions& opt = {});

/// hadamard1 >= 0 and hadamard2(x1* = 0) >= 0 on every direction.
Verdict is_2stationary(const ProperFunction& f, const Vector& x, const DirectionSet& dirs, const SampleSchedule& s,
                       const ClassifyOptions& opt = {});

struct InvexReport {
  Verdict verdict;
  std::vector<Vector> stationary_points;
  double grid_min = 0.0;
  Vector grid_argmin;
  long long grid_points = 0;
};

/// Every 2-stationary grid point must attain the grid minimum.
InvexReport check_2invex_on_box(const ProperFunction& f, const Box& box, int grid_n, const DirectionSet& dirs,
                                const SampleSchedule& s, const ClassifyOptions& opt = {});

enum class SpcMode { dini, hadamard };

struct SpcDirection {
  Vector direction;
  LiminfEstimate first_order;  // dini1 or hadamard1
  LiminfEstimate growth;       // [f(x + t d') - f(x)] / t^2
  double alpha = 0.0;          // min over the final stage
  double delta = 0.0;          // upper end of the final stage's t range
};

struct StrongPseudoconvexityReport {
  SpcMode mode = SpcMode::dini;
  std::vector<SpcDirection> zero_dirs;
  Verdict verdict;
};

StrongPseudoconvexityReport check_strong_pseudoconvex(const ProperFunction& f, const Vector& x,
                                                      const DirectionSet& dirs, const SampleSchedule& s, SpcMode mode,
                                                      const ClassifyOptions& opt = {});

struct LStabilitySample {
  double radius = 0.0;
  Vector y;
  Vector u;
  double ratio = 0.0;
};

struct LStabilityReport {
  double K_hat = 0.0;
  std::vector<LStabilitySample> per_radius;  // worst sample at each probe radius
  std::vector<LStabilitySample> violation_witness;
  Verdict verdict;
};

/// Probes y = x + r d for d in dirs at each radius; the Dini slopes at y use a
/// schedule with t0 <= r/10. FAIL when the worst ratio grows by a factor of at
/// least 2 per decade over the last three radii.
LStabilityReport check_lstability(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                  const SampleSchedule& s, const std::vector<double>& probe_radii = {1e-1, 1e-2, 1e-3, 1e-4},
                                  const ClassifyOptions& opt = {});

struct Thm5Report {
  StrongPseudoconvexityReport spc;
  bool precondition_met = false;
  Verdict subdiff;              // 0 in the lower Hadamard subdifferential
  std::optional<OracleReport> oracle;
  bool oracle_agrees = false;
  Verdict verdict;              // PRECONDITION_NOT_MET or the subdiff outcome
};

/// Full evidence for the strong-pseudoconvexity sufficiency test.
Thm5Report thm5_report(const ProperFunction& f, const Vector& x, const DirectionSet& dirs, const SampleSchedule& s,
                       const ClassifyOptions& opt = {}, bool run_oracle = true);

/// Subdifferential test under a Hadamard-mode strong pseudoconvexity
/// precondition; PreconditionError when the precondition verdict is not PASS.
Verdict check_spc_first_order_sufficiency(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                          const SampleSchedule& s, const ClassifyOptions& opt = {});

}  // namespace nsdiag
