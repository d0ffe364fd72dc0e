#include "nsdiag/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "nsdiag/errors.hpp"

namespace nsdiag {

namespace {

constexpr double kTol = 1e-10;
constexpr std::size_t kMaxInternalNormals = 64;
constexpr long long kSubsetBudget = 2000000;

Vector unit(const Vector& v) { return v / v.norm(); }

int rank_of(const std::vector<Vector>& rows, int dim) {
  if (rows.empty()) return 0;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

// Gram-Schmidt; drops vectors already in the span.
std::vector<Vector> orthonormalize(const std::vector<Vector>& vs) {
  std::vector<Vector> out;
  for (Vector v : vs) {
    for (const auto& q : out) v -= q.dot(v) * q;
    if (v.norm() > 1e-9) out.push_back(unit(v));
  }
  return out;
}

Vector project_out(Vector v, const std::vector<Vector>& basis) {
  for (const auto& q : basis) v -= q.dot(v) * q;
  return v;
}

void push_unique(std::vector<Vector>& rays, const Vector& r) {
  for (const auto& q : rays)
    if ((q - r).norm() < 1e-9) return;
  rays.push_back(r);
}

std::vector<Vector> nonzero_units(const std::vector<Vector>& vs) {
  std::vector<Vector> out;
  for (const auto& v : vs)
    if (v.norm() > 1e-14) out.push_back(unit(v));
  return out;
}

void check_dim(const std::vector<Vector>& vs, int dim, const char* what) {
  for (const auto& v : vs)
    if (v.size() != dim) throw ConfigError(std::string("cone: ") + what + " of wrong dimension");
}

void check_budget(const PolyhedralCone& C) {
  if (C.dim < 1) throw ConfigError("cone: dimension must be positive");
  if (C.dim > kMaxConeDim)
    throw ConfigError("cone: dimension " + std::to_string(C.dim) + " exceeds the limit of " +
                      std::to_string(kMaxConeDim));
  auto count = [&](const std::optional<std::vector<Vector>>& vs) {
    if (vs && vs->size() > static_cast<std::size_t>(kMaxConeGenerators))
      throw ConfigError("cone: more than " + std::to_string(kMaxConeGenerators) + " generators or halfspaces");
  };
  count(C.generators);
  count(C.halfspaces);
}

}  // namespace

PolyhedralCone PolyhedralCone::from_generators(std::vector<Vector> gens, int dim) {
  if (dim < 0) {
    if (gens.empty()) throw ConfigError("cone: dimension needed for an empty generator list");
    dim = static_cast<int>(gens.front().size());
  }
  check_dim(gens, dim, "generator");
  PolyhedralCone C;
  C.dim = dim;
  C.generators = std::move(gens);
  return C;
}

PolyhedralCone PolyhedralCone::from_halfspaces(std::vector<Vector> normals, int dim) {
  if (dim < 0) {
    if (normals.empty()) throw ConfigError("cone: dimension needed for an empty halfspace list");
    dim = static_cast<int>(normals.front().size());
  }
  check_dim(normals, dim, "halfspace normal");
  PolyhedralCone C;
  C.dim = dim;
  C.halfspaces = std::move(normals);
  return C;
}

PolyhedralCone PolyhedralCone::orthant(int dim) {
  std::vector<Vector> e;
  for (int i = 0; i < dim; ++i) e.push_back(Vector::Unit(dim, i));
  PolyhedralCone C;
  C.dim = dim;
  C.generators = e;
  C.halfspaces = e;
  return C;
}

PolyhedralCone PolyhedralCone::zero(int dim) { return from_generators({}, dim); }

PolyhedralCone PolyhedralCone::whole(int dim) { return from_halfspaces({}, dim); }

std::vector<Vector> DualDescription::generators() const {
  std::vector<Vector> out = rays;
  for (const auto& l : lineality) {
    out.push_back(l);
    out.push_back(-l);
  }
  return out;
}

DualDescription dual_description(int dim, const std::vector<Vector>& normals_in) {
  if (normals_in.size() > kMaxInternalNormals) throw ConfigError("cone: double description input too large");
  check_dim(normals_in, dim, "normal");
  std::vector<Vector> lin;
  for (int i = 0; i < dim; ++i) lin.push_back(Vector::Unit(dim, i));
  std::vector<Vector> rays;
  std::vector<Vector> done;

  for (const Vector& a : nonzero_units(normals_in)) {
    // Prefer eliminating a lineality direction: the cut turns it into a ray.
    std::size_t pick = lin.size();
    double best = kTol;
    for (std::size_t i = 0; i < lin.size(); ++i) {
      const double v = std::abs(a.dot(lin[i]));
      if (v > best) {
        best = v;
        pick = i;
      }
    }
    done.push_back(a);
    if (pick < lin.size()) {
      Vector l0 = lin[pick];
      if (a.dot(l0) < 0) l0 = -l0;
      const double al0 = a.dot(l0);
      std::vector<Vector> rest;
      for (std::size_t i = 0; i < lin.size(); ++i)
        if (i != pick) rest.push_back(lin[i] - (a.dot(lin[i]) / al0) * l0);
      for (auto& r : rays) r -= (a.dot(r) / al0) * l0;
      rays.push_back(l0);
      lin = orthonormalize(rest);
    } else {
      std::vector<Vector> pos, neg, next;
      for (const auto& r : rays) {
        const double v = a.dot(r);
        if (v > kTol)
          pos.push_back(r);
        else if (v < -kTol)
          neg.push_back(r);
        else
          next.push_back(r);
      }
      for (const auto& p : pos) next.push_back(p);
      for (const auto& p : pos)
        for (const auto& n : neg) next.push_back(a.dot(p) * n - a.dot(n) * p);
      rays = std::move(next);
    }

    // Normalize modulo the lineality space, dedupe, keep extreme rays only.
    const int need = dim - static_cast<int>(lin.size()) - 1;
    std::vector<Vector> kept;
    for (const auto& r0 : rays) {
      Vector r = project_out(r0, lin);
      if (r.norm() < 1e-12) continue;
      r = unit(r);
      std::vector<Vector> tight;
      for (const auto& c : done)
        if (std::abs(c.dot(r)) <= 1e-9) tight.push_back(c);
      if (rank_of(tight, dim) == need) push_unique(kept, r);
    }
    rays = std::move(kept);
  }
  return DualDescription{rays, lin};
}

namespace {

std::vector<Vector> generators_of(const PolyhedralCone& C) {
  if (C.generators) return *C.generators;
  if (!C.halfspaces) throw ConfigError("cone: no representation");
  check_budget(C);
  return dual_description(C.dim, *C.halfspaces).generators();
}

// Generators of C*, i.e. the irredundant halfspace normals of C.
DualDescription canonical(const PolyhedralCone& C) {
  check_budget(C);
  return dual_description(C.dim, generators_of(C));
}

bool satisfies(const std::vector<Vector>& normals, const Vector& x, double tol) {
  for (const auto& a : nonzero_units(normals))
    if (a.dot(x) < -tol) return false;
  return true;
}

}  // namespace

PolyhedralCone complete(const PolyhedralCone& C) {
  check_budget(C);
  PolyhedralCone out = C;
  if (!out.generators) out.generators = generators_of(C);
  if (!out.halfspaces) out.halfspaces = dual_description(C.dim, *out.generators).generators();
  return out;
}

PolyhedralCone polar(const PolyhedralCone& C) {
  check_budget(C);
  PolyhedralCone P;
  P.dim = C.dim;
  P.halfspaces = generators_of(C);
  P.generators = dual_description(C.dim, *P.halfspaces).generators();
  return P;
}

bool cone_subset(const PolyhedralCone& C, const PolyhedralCone& D, double tol) {
  if (C.dim != D.dim) throw ConfigError("cone: dimension mismatch");
  const std::vector<Vector> normals = D.halfspaces ? *D.halfspaces : canonical(D).generators();
  for (const auto& g : nonzero_units(generators_of(C)))
    if (!satisfies(normals, g, tol)) return false;
  return true;
}

bool double_polar_check(const PolyhedralCone& C) {
  const PolyhedralCone CC = polar(polar(C));
  return cone_subset(C, CC, 1e-9) && cone_subset(CC, C, 1e-9);
}

bool contains(const PolyhedralCone& C, const Vector& x, double tol) {
  if (x.size() != C.dim) throw ConfigError("cone: point of wrong dimension");
  if (C.halfspaces) return satisfies(*C.halfspaces, x, tol);
  return satisfies(canonical(C).generators(), x, tol);
}

bool interior_contains(const PolyhedralCone& C, const Vector& x) {
  if (x.size() != C.dim) throw ConfigError("cone: point of wrong dimension");
  const DualDescription dd = canonical(C);
  if (!dd.pointed()) return false;  // C lies in a proper subspace
  for (const auto& a : dd.rays)
    if (!(a.dot(x) > 1e-12)) return false;
  return true;
}

std::optional<LinearFunctional> separate(const PolyhedralCone& C, const Vector& x) {
  if (x.size() != C.dim) throw ConfigError("cone: point of wrong dimension");
  const std::vector<Vector> normals = canonical(C).generators();
  std::optional<Vector> worst;
  double low = -1e-12;
  for (const auto& a : normals) {
    const double v = a.dot(x);
    if (v < low) {
      low = v;
      worst = a;
    }
  }
  if (!worst) return std::nullopt;
  return LinearFunctional{*worst};
}

namespace {

// Calls body(S) on every linearly independent subset of `gens` with at most
// `dim` elements.
template <class Body>
void for_each_face(const std::vector<Vector>& gens, int dim, Body body) {
  const int m = static_cast<int>(gens.size());
  const int kmax = std::min(dim, m);
  long long total = 0;
  for (int k = 1; k <= kmax; ++k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (m - i) / (i + 1);
    total += static_cast<long long>(c);
  }
  if (total > kSubsetBudget) throw ConfigError("cone: face enumeration exceeds the subset budget");
  std::vector<int> idx;
  auto rec = [&](auto&& self, int start) -> void {
    if (!idx.empty()) {
      Eigen::MatrixXd G(dim, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) G.col(static_cast<Eigen::Index>(j)) = gens[idx[j]];
      Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
      lu.setThreshold(1e-10);
      if (lu.rank() < static_cast<Eigen::Index>(idx.size())) return;  // supersets are dependent too
      body(G);
    }
    if (static_cast<int>(idx.size()) == kmax) return;
    for (int i = start; i < m; ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
}

// Least-squares combination of the columns of G closest to a; empty when a
// coefficient is negative.
std::optional<Vector> face_projection(const Eigen::MatrixXd& G, const Vector& a) {
  Vector c = G.colPivHouseholderQr().solve(a);
  if ((c.array() < -1e-12).any()) return std::nullopt;
  return G * c.cwiseMax(0.0);
}

}  // namespace

Vector project(const PolyhedralCone& C, const Vector& a) {
  if (a.size() != C.dim) throw ConfigError("cone: point of wrong dimension");
  const std::vector<Vector> gens = nonzero_units(generators_of(C));
  // |p - a|^2 - |a|^2, which keeps its resolution when |a| dwarfs |p|.
  Vector best = Vector::Zero(C.dim);
  double score = 0.0;
  for_each_face(gens, C.dim, [&](const Eigen::MatrixXd& G) {
    if (auto p = face_projection(G, a)) {
      const double sc = p->squaredNorm() - 2.0 * p->dot(a);
      if (sc < score) {
        score = sc;
        best = *p;
      }
    }
  });
  return best;
}

std::pair<double, Vector> sphere_max(const PolyhedralCone& C, const Vector& a) {
  if (a.size() != C.dim) throw ConfigError("cone: point of wrong dimension");
  const std::vector<Vector> gens = nonzero_units(generators_of(C));
  if (gens.empty()) throw DomainError("sphere_max: the zero cone has no unit vectors");
  const Vector p = project(C, a);
  if (p.norm() > 1e-12) return {p.norm(), unit(p)};
  // a is in the negative polar; <a, y> <= 0 on C, and the maximum over the
  // cross-section is attained at a generator. Face candidates kept for rigor.
  double best = -std::numeric_limits<double>::infinity();
  Vector arg;
  for (const auto& g : gens)
    if (a.dot(g) > best) {
      best = a.dot(g);
      arg = g;
    }
  for_each_face(gens, C.dim, [&](const Eigen::MatrixXd& G) {
    if (G.cols() < 2) return;
    if (auto q = face_projection(G, a); q && q->norm() > 1e-12) {
      const Vector y = unit(*q);
      if (a.dot(y) > best + 1e-15) {
        best = a.dot(y);
        arg = y;
      }
    }
  });
  return {best, arg};
}

PolyhedralCone product(const PolyhedralCone& C, const PolyhedralCone& D) {
  const int n = C.dim, m = D.dim;
  std::vector<Vector> gens;
  for (const auto& g : generators_of(C)) {
    Vector v = Vector::Zero(n + m);
    v.head(n) = g;
    gens.push_back(v);
  }
  for (const auto& g : generators_of(D)) {
    Vector v = Vector::Zero(n + m);
    v.tail(m) = g;
    gens.push_back(v);
  }
  return PolyhedralCone::from_generators(std::move(gens), n + m);
}

bool representations_agree(const PolyhedralCone& C0, int samples, std::uint64_t seed, double tol) {
  const PolyhedralCone C = complete(C0);
  for (const auto& g : nonzero_units(*C.generators))
    if (!satisfies(*C.halfspaces, g, tol)) return false;
  // Points built from the halfspace side only, tested against cone(generators).
  const std::vector<Vector> hgens = dual_description(C.dim, *C.halfspaces).generators();
  if (hgens.empty()) return true;
  PolyhedralCone G = PolyhedralCone::from_generators(*C.generators, C.dim);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vector x = Vector::Zero(C.dim);
    for (const auto& h : hgens) x += rng.uniform() * h;
    if ((project(G, x) - x).norm() > tol * std::max(1.0, x.norm())) return false;
  }
  return true;
}

PolyhedralCone random_cone(Rng& rng, int dim, int n_generators) {
  std::vector<Vector> gens;
  for (int i = 0; i < n_generators; ++i) {
    Vector g(dim);
    for (int j = 0; j < dim; ++j) g[j] = rng.normal();
    gens.push_back(g);
  }
  return PolyhedralCone::from_generators(std::move(gens), dim);
}

}  // namespace nsdiag
