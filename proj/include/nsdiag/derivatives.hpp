#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsdiag/function.hpp"
#include "nsdiag/verdict.hpp"

namespace nsdiag {

/// Finite set of unit directions standing in for "every direction".
struct DirectionSet {
  std::vector<Vector> directions;
  std::string generator;

  /// dim 1: {+1, -1}; dim 2: n equally spaced angles from 0; dim 3: Fibonacci
  /// sphere; higher: seeded normalized Gaussians.
  static DirectionSet fibonacci(int dim, int n, std::uint64_t seed = 1);
  /// +-e_i and the normalized +-e_i +- e_j.
  static DirectionSet axis_and_diagonals(int dim);
  /// Normalizes every entry; zero vectors are rejected.
  static DirectionSet explicit_set(const std::vector<Vector>& dirs);
  /// fibonacci(64) for dim >= 2, {+1, -1} for dim 1.
  static DirectionSet defaults(int dim);

  std::size_t size() const { return directions.size(); }
};

/// Common estimator settings.
struct EstimatorOptions {
  double zero_band = 1e-6;
  bool use_witnesses = true;
};

/// liminf_{t->0+} [f(x+tu) - f(x)] / t.
LiminfEstimate dini1(const ProperFunction& f, const Vector& x, const Vector& u, const SampleSchedule& s);

/// liminf_{t->0+} 2 t^-2 [f(x+tu) - f(x) - t d], d the dini1 value (snapped to 0
/// inside the zero band). Inconclusive when dini1 has no finite converged value.
LiminfEstimate dini2(const ProperFunction& f, const Vector& x, const Vector& u, const SampleSchedule& s,
                     const EstimatorOptions& opt = {});

/// Joint liminf over t -> 0+, u' -> u of [f(x+tu') - f(x)] / t.
LiminfEstimate hadamard1(const ProperFunction& f, const Vector& x, const Vector& u, const SampleSchedule& s,
                         const EstimatorOptions& opt = {});

/// Joint liminf of 2 t^-2 [f(x+tu') - f(x) - t x1*(u')].
LiminfEstimate hadamard2(const ProperFunction& f, const Vector& x, const LinearFunctional& x1star, const Vector& u,
                         const SampleSchedule& s, const EstimatorOptions& opt = {});

/// Orders 0, 1 and 2 of the Ginchev chain; each order subtracts the best
/// values of the lower orders.
std::array<LiminfEstimate, 3> ginchev(const ProperFunction& f, const Vector& x, const Vector& u,
                                      const SampleSchedule& s, const EstimatorOptions& opt = {});

/// t^-2 [f(x + tu + t^2 z) - f(x) - t f'(x;u)] as t -> 0+. f'(x;u) must have a
/// converged dini1 estimate (PreconditionError otherwise).
LiminfEstimate bz2(const ProperFunction& f, const Vector& x, const Vector& u, const Vector& z,
                   const SampleSchedule& s);

/// t^-1 [<grad f(x+tu), v> - <grad f(x), v>] as t -> 0+. Needs the analytic gradient.
LiminfEstimate bp2(const ProperFunction& f, const Vector& x, const Vector& u, const Vector& v,
                   const SampleSchedule& s);

/// [f(x+tv) - f(x)] / t^2 as t -> 0+ along the fixed ray.
LiminfEstimate growth2(const ProperFunction& f, const Vector& x, const Vector& v, const SampleSchedule& s);

/// PASS iff x*(u) <= hadamard1(u) + zero_band on every direction.
Verdict subdiff_contains(const ProperFunction& f, const Vector& x, const LinearFunctional& xstar,
                         const DirectionSet& dirs, const SampleSchedule& s, const EstimatorOptions& opt = {});

}  // namespace nsdiag
