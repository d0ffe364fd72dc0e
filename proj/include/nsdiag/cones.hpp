#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nsdiag/core.hpp"

namespace nsdiag {

/// Budget of the exact machinery.
inline constexpr int kMaxConeDim = 4;
inline constexpr int kMaxConeGenerators = 16;

/// Closed convex cone with vertex at the origin.
///   generators: cone = { sum c_i g_i : c_i >= 0 }   (empty list: the zero cone)
///   halfspaces: cone = { x : <a_i, x> >= 0 }        (empty list: all of R^dim)
/// At least one representation is present; `complete` fills in the other.
struct PolyhedralCone {
  int dim = 0;
  std::optional<std::vector<Vector>> generators;
  std::optional<std::vector<Vector>> halfspaces;

  static PolyhedralCone from_generators(std::vector<Vector> gens, int dim = -1);
  static PolyhedralCone from_halfspaces(std::vector<Vector> normals, int dim = -1);
  static PolyhedralCone orthant(int dim);
  static PolyhedralCone zero(int dim);
  static PolyhedralCone whole(int dim);
};

/// Generators of { x : <a, x> >= 0 for a in normals } by double description:
/// extreme rays of the pointed part plus a basis of the lineality space.
struct DualDescription {
  std::vector<Vector> rays;       // unit length, pairwise distinct
  std::vector<Vector> lineality;  // orthonormal
  /// rays followed by +-l for every lineality vector.
  std::vector<Vector> generators() const;
  bool pointed() const { return lineality.empty(); }
};
DualDescription dual_description(int dim, const std::vector<Vector>& normals);

/// Both representations; halfspaces are the canonical irredundant set.
PolyhedralCone complete(const PolyhedralCone& C);

/// Positive polar C* = { l : <l, x> >= 0 for x in C } (the dual cone).
PolyhedralCone polar(const PolyhedralCone& C);

/// polar(polar(C)) == C by mutual generator-in-halfspace containment at 1e-9.
bool double_polar_check(const PolyhedralCone& C);

/// C subset of D, testing generators of C against the halfspaces of D.
bool cone_subset(const PolyhedralCone& C, const PolyhedralCone& D, double tol = 1e-9);

bool contains(const PolyhedralCone& C, const Vector& x, double tol = 1e-12);

/// Interior point test: C* must be pointed (C full-dimensional) and every
/// canonical halfspace strictly positive at x.
bool interior_contains(const PolyhedralCone& C, const Vector& x);

/// The most violated unit canonical halfspace normal l (so l in C*, <l, x> < 0);
/// none when x in C.
std::optional<LinearFunctional> separate(const PolyhedralCone& C, const Vector& x);

/// Euclidean projection onto C by enumerating generator subsets.
Vector project(const PolyhedralCone& C, const Vector& a);

/// max <a, y> over y in C with |y| = 1. DomainError for the zero cone.
std::pair<double, Vector> sphere_max(const PolyhedralCone& C, const Vector& a);

/// C x D in R^(dimC + dimD), from the generators of both.
PolyhedralCone product(const PolyhedralCone& C, const PolyhedralCone& D);

/// Generators and halfspaces agree: every generator satisfies every halfspace
/// and `samples` halfspace-feasible points are generator combinations.
bool representations_agree(const PolyhedralCone& C, int samples = 100, std::uint64_t seed = 3, double tol = 1e-9);

/// Seeded random cone with `n_generators` generators in R^dim.
PolyhedralCone random_cone(Rng& rng, int dim, int n_generators);

}  // namespace nsdiag
