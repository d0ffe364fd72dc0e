#include "nsdiag/oracle.hpp"

#include <cmath>
#include <limits>

#include "nsdiag/parallel.hpp"

namespace nsdiag {

namespace {

constexpr double kPositive = 1e-6;

double finite_value(const ProperFunction& f, const Vector& x) {
  ExtReal fx = f(x);
  if (!fx.is_finite()) throw PreconditionError(f.name + ": f(x) must be finite");
  return fx.value();
}

// Lexicographic grid of n points per axis on [lo, hi].
std::vector<Vector> lattice(const Vector& lo, const Vector& hi, int n) {
  const int dim = static_cast<int>(lo.size());
  long long total = 1;
  for (int i = 0; i < dim; ++i) total *= n;
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(dim, 0);
  for (long long k = 0; k < total; ++k) {
    Vector p(dim);
    for (int i = 0; i < dim; ++i)
      p[i] = n == 1 ? 0.5 * (lo[i] + hi[i]) : lo[i] + (hi[i] - lo[i]) * idx[i] / (n - 1);
    out.push_back(std::move(p));
    for (int i = dim - 1; i >= 0; --i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
  }
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (center.size() < 1) throw ConfigError("grid: center must be set");
  if (radii.empty()) throw ConfigError("grid: at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ConfigError("grid: radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw ConfigError("grid: radii must be strictly decreasing");
  }
  if (points_per_axis < 3 || points_per_axis % 2 == 0)
    throw ConfigError("grid: points_per_axis must be odd and at least 3");
  if (std::pow(static_cast<double>(points_per_axis), static_cast<double>(center.size())) > 1e6)
    throw ConfigError("grid: more than 1e6 points per radius");
}

std::vector<Vector> GridSpec::points(std::size_t k) const {
  Vector r = Vector::Constant(center.size(), radii.at(k));
  return lattice(center - r, center + r, points_per_axis);
}

std::string to_string(OracleKind k) {
  switch (k) {
    case OracleKind::local_min: return "local_min";
    case OracleKind::isolated_order2: return "isolated_order2";
    case OracleKind::global_min_box: return "global_min_box";
    case OracleKind::strict_min: return "strict_min";
  }
  return "local_min";
}

std::string to_string(OracleOutcome o) {
  switch (o) {
    case OracleOutcome::yes: return "YES";
    case OracleOutcome::no: return "NO";
    case OracleOutcome::undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

OracleKind oracle_kind_from_string(const std::string& s) {
  for (auto k : {OracleKind::local_min, OracleKind::isolated_order2, OracleKind::global_min_box, OracleKind::strict_min})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown oracle kind '" + s + "'");
}

OracleOutcome oracle_outcome_from_string(const std::string& s) {
  for (auto o : {OracleOutcome::yes, OracleOutcome::no, OracleOutcome::undecided})
    if (to_string(o) == s) return o;
  throw ConfigError("unknown oracle outcome '" + s + "'");
}

std::vector<Vector> box_grid(const Box& box, int points_per_axis, long long budget) {
  if (points_per_axis < 1) throw ConfigError("grid: points_per_axis must be positive");
  double total = std::pow(static_cast<double>(points_per_axis), static_cast<double>(box.dim()));
  if (total > static_cast<double>(budget))
    throw ConfigError("grid of " + std::to_string(static_cast<long long>(total)) + " points exceeds the budget of " +
                      std::to_string(budget));
  return lattice(box.lo, box.hi, points_per_axis);
}

OracleReport local_min(const ProperFunction& f, const Vector& x, const GridSpec& grid, bool use_witnesses) {
  grid.validate();
  const double fx = finite_value(f, x);
  OracleReport rep;
  rep.kind = OracleKind::local_min;
  rep.radii = grid.radii;

  // Lowest point of each cube. A deficit beyond 1e-12 in the smallest cube is
  // conclusive; so is strict descent in every cube, which catches deficits
  // that shrink below the absolute tolerance (x^3 at 0).
  bool descent_everywhere = true;
  Vector arg;
  double low = fx;
  for (std::size_t k = 0; k < grid.radii.size(); ++k) {
    std::vector<Vector> pts = grid.points(k);
    if (use_witnesses)
      for (auto& w : witness_points(f, x, grid.radii[k])) pts.push_back(std::move(w));
    std::vector<double> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { vals[i] = f(pts[i]).value(); });
    std::size_t worst = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (vals[i] < vals[worst]) worst = i;
    if (!(vals[worst] < fx)) descent_everywhere = false;
    arg = pts[worst];
    low = vals[worst];
  }
  if (low < fx - 1e-12 || descent_everywhere) {
    rep.outcome = OracleOutcome::no;
    rep.counterexample = arg;
    rep.counterexample_value = low;
  } else {
    rep.outcome = OracleOutcome::yes;
  }
  return rep;
}

OracleOutcome classify_growth_constants(const std::vector<double>& C) {
  if (C.empty()) return OracleOutcome::undecided;
  if (C.back() <= kPositive) return OracleOutcome::no;
  if (C.size() < 3) return OracleOutcome::undecided;
  const double a = C[C.size() - 3], b = C[C.size() - 2], c = C.back();
  if (a > kPositive && b > kPositive) {
    const double hi = std::max({a, b, c}), lo = std::min({a, b, c});
    if (hi <= 1.2 * lo) return OracleOutcome::yes;
    if (a <= b && b <= c) return OracleOutcome::yes;
  }
  if (b < a && c < b && b <= 0.5 * a && c <= 0.5 * b) return OracleOutcome::no;
  return OracleOutcome::undecided;
}

OracleReport isolated_order2(const ProperFunction& f, const Vector& x, const GridSpec& grid, bool use_witnesses) {
  grid.validate();
  const double fx = finite_value(f, x);
  OracleReport rep;
  rep.kind = OracleKind::isolated_order2;
  rep.radii = grid.radii;
  Vector last_arg;
  double last_val = 0.0;
  for (std::size_t k = 0; k < grid.radii.size(); ++k) {
    std::vector<Vector> pts = grid.points(k);
    if (use_witnesses)
      for (auto& w : witness_points(f, x, grid.radii[k])) pts.push_back(std::move(w));
    std::vector<double> q(pts.size(), std::numeric_limits<double>::infinity());
    parallel_for(pts.size(), [&](std::size_t i) {
      double d2 = (pts[i] - x).squaredNorm();
      if (d2 == 0.0) return;
      ExtReal v = f(pts[i]);
      if (v.is_finite()) q[i] = (v.value() - fx) / d2;
    });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
      if (q[i] < q[arg]) arg = i;
    rep.C_estimates.push_back(q[arg]);
    last_arg = pts[arg];
    last_val = f(pts[arg]).value();
  }
  rep.outcome = classify_growth_constants(rep.C_estimates);
  if (rep.outcome == OracleOutcome::no) {
    rep.counterexample = last_arg;
    rep.counterexample_value = last_val;
  }
  return rep;
}

OracleReport global_min_box(const ProperFunction& f, const Box& box, int points_per_axis, const Vector& query) {
  std::vector<Vector> pts = box_grid(box, points_per_axis);
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { vals[i] = f(pts[i]).value(); });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (vals[i] < vals[arg]) arg = i;
  OracleReport rep;
  rep.kind = OracleKind::global_min_box;
  const double fq = f(query).value();
  if (fq <= vals[arg] + 1e-12) {
    rep.outcome = OracleOutcome::yes;
  } else {
    rep.outcome = OracleOutcome::no;
    rep.counterexample = pts[arg];
    rep.counterexample_value = vals[arg];
  }
  rep.note = "grid minimum " + ExtReal(vals[arg]).to_string() + " at (" + format_vector(pts[arg]) + ")";
  return rep;
}

}  // namespace nsdiag
