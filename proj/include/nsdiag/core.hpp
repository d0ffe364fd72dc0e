#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nsdiag/errors.hpp"
#include "nsdiag/ext_real.hpp"

namespace nsdiag {

using Vector = Eigen::VectorXd;

/// x* acting by inner product.
struct LinearFunctional {
  Vector coeffs;
  double operator()(const Vector& u) const { return coeffs.dot(u); }
};

/// Geometric discretization of a joint lower limit t -> 0+, u' -> u.
///
/// Stage j covers steps t in (t0 * t_ratio^(j+1), t0 * t_ratio^j] and
/// directions in the closed ball of radius eps0 * eps_ratio^j around u.
struct SampleSchedule {
  double t0 = 0.1;
  double t_ratio = 0.5;
  double eps0 = 0.1;
  double eps_ratio = 0.5;
  int stages = 12;
  int samples_per_stage = 64;
  std::uint64_t seed = 1;
  /// Relative tolerance used by trend labelling.
  double trend_tol = 1e-3;
  /// Absolute magnitude beyond which a monotone stage sequence counts as divergent.
  double divergence_threshold = 1e3;

  double step(int stage) const;    // tau_j
  double radius(int stage) const;  // eps_j
  void validate() const;
};

/// Parses "t0=..,tratio=..,eps0=..,epsratio=..,stages=..,samples=..,seed=.."
/// on top of `base`. Unknown keys raise ConfigError.
SampleSchedule parse_schedule(const std::string& spec, SampleSchedule base = {});

enum class Trend { converged, diverging_plus_inf, diverging_minus_inf, oscillating, inconclusive };

std::string to_string(Trend t);
Trend trend_from_string(const std::string& s);

/// One evaluation site of a difference quotient.
struct Sample {
  double t = 0.0;
  Vector direction;
};

/// Quotient sampler (t, u') -> extended real.
using Quotient = std::function<ExtReal(double, const Vector&)>;

/// Lazy witness sequence: returns pairs with 0 < t <= t_max, t decreasing.
using HintSource = std::function<std::vector<Sample>(double t_max)>;

struct LiminfEstimate {
  /// Minimum sampled quotient per stage.
  std::vector<ExtReal> stage_infima;
  /// Quotient at (tau_j, u) for every stage; a deterministic column used by
  /// plain-limit extrapolation.
  std::vector<ExtReal> stage_anchors;
  /// Minimum over every sample of the final stage.
  ExtReal value;
  /// Geometric-tail extrapolation of stage_infima; equals value when the
  /// stage sequence shows no geometric contraction.
  ExtReal limit;
  bool extrapolated = false;
  Trend trend = Trend::inconclusive;
  Sample witness;

  /// limit for converged estimates, value otherwise.
  ExtReal best() const { return trend == Trend::converged ? limit : value; }
  /// Smallest and largest of value and limit (the evidence interval).
  double lower() const;
  double upper() const;
};

struct LiminfOptions {
  /// Keep u' == u (lower Dini style, t-only sampling).
  bool pin_direction = false;
  /// Normalize sampled directions to unit length.
  bool unit_directions = false;
};

/// Samples the stage regions of `schedule` and labels the stage sequence.
///
/// Every stage reuses the same quasi-random pattern rescaled to its region, so
/// power-law quotients produce exactly geometric stage infima. Hints with
/// t <= tau_j are merged into stage j.
LiminfEstimate estimate_liminf(const Quotient& q, const Vector& u, const SampleSchedule& schedule,
                               const HintSource& hints = {}, LiminfOptions options = {});

struct TrendResult {
  Trend trend = Trend::inconclusive;
  ExtReal limit;
  bool extrapolated = false;
};

/// Labels the tail of a stage sequence; see estimate_liminf.
TrendResult classify_trend(const std::vector<ExtReal>& stage_values, const SampleSchedule& schedule);

/// Richardson table on a column sampled at t_j = t0 * ratio^j, returning the
/// entry with the smallest error estimate. Requires at least two finite entries.
std::optional<double> richardson_limit(const std::vector<ExtReal>& column, double ratio);

/// Deterministic 64-bit generator (splitmix64); identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform point in the unit ball of R^dim.
Vector sample_unit_ball(Rng& rng, int dim);

}  // namespace nsdiag
