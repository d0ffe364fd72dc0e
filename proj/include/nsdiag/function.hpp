#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsdiag/core.hpp"

namespace nsdiag {

/// Axis-aligned box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vector& x) const;
};

Box symmetric_box(int dim, double half_width);

/// Where a witness sequence may be merged.
enum WitnessUse : unsigned {
  use_hadamard = 1u,  // joint (t, u') estimators
  use_oracle = 2u,    // brute-force grids
};

/// Explicit (t, u') sequence at a base point along a direction, steering
/// estimators to structure that random sampling misses.
struct WitnessEntry {
  Vector point;
  Vector direction;  // stored with unit length
  unsigned uses = use_hadamard | use_oracle;
  HintSource generator;
};

/// f: R^dim -> R u {+inf}. +inf encodes leaving the effective domain.
struct ProperFunction {
  std::string name;
  int dim = 1;
  std::function<ExtReal(const Vector&)> eval;
  std::function<Vector(const Vector&)> gradient;  // optional
  Box domain_box;
  std::vector<WitnessEntry> witnesses;

  /// Evaluates and enforces properness (never -inf).
  ExtReal operator()(const Vector& x) const;
  bool has_gradient() const { return static_cast<bool>(gradient); }
};

/// Hints for (x, u) rescaled from any witness stored for (x, u/|u|).
/// Returns an empty source when none applies.
HintSource witness_hints(const ProperFunction& f, const Vector& x, const Vector& u, WitnessUse use);

/// Witness points x + t u' within distance `radius` of x (excluding x itself).
std::vector<Vector> witness_points(const ProperFunction& f, const Vector& x, double radius);

/// (t, u') -> [f(x + t u') - f(x)] / t.
Quotient eval_quotient1(const ProperFunction& f, const Vector& x);

/// (t, u') -> 2 t^-2 [f(x + t u') - f(x) - t <x1star, u'>].
Quotient eval_quotient2(const ProperFunction& f, const Vector& x, const Vector& x1star);

struct GradientCheck {
  bool ok = true;
  int points_checked = 0;
  double worst_relative_error = 0.0;
  Vector worst_point;
};

/// Central differences against the analytic gradient at `n` seeded points of
/// the domain box whose neighbourhood is finite and which pass `accept`.
GradientCheck check_gradient(const ProperFunction& f, int n = 20, std::uint64_t seed = 7, double rel_tol = 1e-4,
                             const std::function<bool(const Vector&)>& accept = {});

/// Vector parsed from "a,b,c".
Vector parse_point(const std::string& csv);
std::string format_vector(const Vector& v);

}  // namespace nsdiag
