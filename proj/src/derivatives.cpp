#include "nsdiag/derivatives.hpp"

#include <cmath>
#include <numbers>

#include "nsdiag/parallel.hpp"

namespace nsdiag {

namespace {

double snap(double v, double band, double target = 0.0) { return std::abs(v - target) <= band ? target : v; }

// Placeholder for an order whose inputs are not finite.
LiminfEstimate unknown_estimate() {
  LiminfEstimate e;
  e.value = ExtReal::pos_inf();
  e.limit = ExtReal::pos_inf();
  e.trend = Trend::inconclusive;
  return e;
}

bool finite_converged(const LiminfEstimate& e) { return e.trend == Trend::converged && e.best().is_finite(); }

double finite_base(const ProperFunction& f, const Vector& x) {
  ExtReal fx = f(x);
  if (!fx.is_finite()) throw PreconditionError(f.name + ": f(x) must be finite");
  return fx.value();
}

LiminfOptions pinned() {
  LiminfOptions o;
  o.pin_direction = true;
  return o;
}

// Plain limit from the anchor column when the sampled trend settled.
void use_column_limit(LiminfEstimate& e, double ratio) {
  if (e.trend != Trend::converged) return;
  if (auto r = richardson_limit(e.stage_anchors, ratio)) {
    e.limit = ExtReal(*r);
    e.extrapolated = true;
  }
}

}  // namespace

DirectionSet DirectionSet::fibonacci(int dim, int n, std::uint64_t seed) {
  if (dim < 1 || n < 1) throw ConfigError("direction set needs dim >= 1 and n >= 1");
  DirectionSet s;
  s.generator = "fibonacci:" + std::to_string(n);
  if (dim == 1) {
    s.directions = {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
    return s;
  }
  if (dim == 2) {
    for (int k = 0; k < n; ++k) {
      double a = 2 * std::numbers::pi * k / n;
      Vector v(2);
      v << std::cos(a), std::sin(a);
      s.directions.push_back(v);
    }
    return s;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
      double z = 1.0 - 2.0 * (k + 0.5) / n;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vector v(3);
      v << r * std::cos(golden * k), r * std::sin(golden * k), z;
      s.directions.push_back(v.normalized());
    }
    return s;
  }
  Rng rng(seed);
  while (static_cast<int>(s.directions.size()) < n) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.normal();
    if (v.norm() > 1e-12) s.directions.push_back(v.normalized());
  }
  return s;
}

DirectionSet DirectionSet::axis_and_diagonals(int dim) {
  if (dim < 1) throw ConfigError("direction set needs dim >= 1");
  DirectionSet s;
  s.generator = "axes";
  for (int i = 0; i < dim; ++i)
    for (double sg : {1.0, -1.0}) {
      Vector v = Vector::Zero(dim);
      v[i] = sg;
      s.directions.push_back(v);
    }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (double a : {1.0, -1.0})
        for (double b : {1.0, -1.0}) {
          Vector v = Vector::Zero(dim);
          v[i] = a;
          v[j] = b;
          s.directions.push_back(v.normalized());
        }
  return s;
}

DirectionSet DirectionSet::explicit_set(const std::vector<Vector>& dirs) {
  if (dirs.empty()) throw ConfigError("direction set must be nonempty");
  DirectionSet s;
  s.generator = "explicit";
  for (const auto& d : dirs) {
    double n = d.norm();
    if (!(n > 0.0)) throw ConfigError("direction set entries must be nonzero");
    if (d.size() != dirs.front().size()) throw ConfigError("direction set entries must share a dimension");
    s.directions.push_back(d / n);
  }
  return s;
}

DirectionSet DirectionSet::defaults(int dim) { return fibonacci(dim, 64); }

LiminfEstimate dini1(const ProperFunction& f, const Vector& x, const Vector& u, const SampleSchedule& s) {
  return estimate_liminf(eval_quotient1(f, x), u, s, {}, pinned());
}

LiminfEstimate dini2(const ProperFunction& f, const Vector& x, const Vector& u, const SampleSchedule& s,
                     const EstimatorOptions& opt) {
  LiminfEstimate d1 = dini1(f, x, u, s);
  if (!finite_converged(d1)) return unknown_estimate();
  const double slope = snap(d1.best().value(), opt.zero_band);
  const double base = finite_base(f, x);
  Quotient q = [f, x, base, slope](double t, const Vector& v) -> ExtReal {
    ExtReal y = f(x + t * v);
    if (y.is_pos_inf()) return y;
    return ExtReal(2.0 * (y.value() - base - t * slope) / (t * t));
  };
  return estimate_liminf(q, u, s, {}, pinned());
}

LiminfEstimate hadamard1(const ProperFunction& f, const Vector& x, const Vector& u, const SampleSchedule& s,
                         const EstimatorOptions& opt) {
  HintSource hints = opt.use_witnesses ? witness_hints(f, x, u, use_hadamard) : HintSource{};
  return estimate_liminf(eval_quotient1(f, x), u, s, hints);
}

LiminfEstimate hadamard2(const ProperFunction& f, const Vector& x, const LinearFunctional& x1star, const Vector& u,
                         const SampleSchedule& s, const EstimatorOptions& opt) {
  HintSource hints = opt.use_witnesses ? witness_hints(f, x, u, use_hadamard) : HintSource{};
  return estimate_liminf(eval_quotient2(f, x, x1star.coeffs), u, s, hints);
}

std::array<LiminfEstimate, 3> ginchev(const ProperFunction& f, const Vector& x, const Vector& u,
                                      const SampleSchedule& s, const EstimatorOptions& opt) {
  HintSource hints = opt.use_witnesses ? witness_hints(f, x, u, use_hadamard) : HintSource{};
  std::array<LiminfEstimate, 3> out;

  Quotient q0 = [f, x](double t, const Vector& v) { return f(x + t * v); };
  out[0] = estimate_liminf(q0, u, s, hints);
  if (!finite_converged(out[0])) {
    out[1] = out[2] = unknown_estimate();
    return out;
  }
  double g0 = out[0].best().value();
  if (ExtReal fx = f(x); fx.is_finite()) g0 = snap(g0, opt.zero_band, fx.value());

  Quotient q1 = [f, x, g0](double t, const Vector& v) -> ExtReal {
    ExtReal y = f(x + t * v);
    if (y.is_pos_inf()) return y;
    return ExtReal((y.value() - g0) / t);
  };
  out[1] = estimate_liminf(q1, u, s, hints);
  if (!finite_converged(out[1])) {
    out[2] = unknown_estimate();
    return out;
  }
  const double g1 = snap(out[1].best().value(), opt.zero_band);

  Quotient q2 = [f, x, g0, g1](double t, const Vector& v) -> ExtReal {
    ExtReal y = f(x + t * v);
    if (y.is_pos_inf()) return y;
    return ExtReal(2.0 * (y.value() - g0 - t * g1) / (t * t));
  };
  out[2] = estimate_liminf(q2, u, s, hints);
  return out;
}

LiminfEstimate bz2(const ProperFunction& f, const Vector& x, const Vector& u, const Vector& z,
                   const SampleSchedule& s) {
  LiminfEstimate d1 = dini1(f, x, u, s);
  if (!finite_converged(d1))
    throw PreconditionError(f.name + ": first-order directional derivative did not converge");
  const double slope = richardson_limit(d1.stage_anchors, s.t_ratio).value_or(d1.best().value());
  const double base = finite_base(f, x);
  Quotient q = [f, x, z, base, slope](double t, const Vector& v) -> ExtReal {
    ExtReal y = f(x + t * v + (t * t) * z);
    if (y.is_pos_inf()) return y;
    return ExtReal((y.value() - base - t * slope) / (t * t));
  };
  LiminfEstimate e = estimate_liminf(q, u, s, {}, pinned());
  use_column_limit(e, s.t_ratio);
  return e;
}

LiminfEstimate bp2(const ProperFunction& f, const Vector& x, const Vector& u, const Vector& v,
                   const SampleSchedule& s) {
  if (!f.has_gradient()) throw CapabilityError(f.name + ": bp2 needs an analytic gradient");
  finite_base(f, x);
  const double g0 = f.gradient(x).dot(v);
  Quotient q = [f, x, v, g0](double t, const Vector& w) -> ExtReal {
    return ExtReal((f.gradient(x + t * w).dot(v) - g0) / t);
  };
  LiminfEstimate e = estimate_liminf(q, u, s, {}, pinned());
  use_column_limit(e, s.t_ratio);
  return e;
}

LiminfEstimate growth2(const ProperFunction& f, const Vector& x, const Vector& v, const SampleSchedule& s) {
  const double base = finite_base(f, x);
  Quotient q = [f, x, base](double t, const Vector& w) -> ExtReal {
    ExtReal y = f(x + t * w);
    if (y.is_pos_inf()) return y;
    return ExtReal((y.value() - base) / (t * t));
  };
  return estimate_liminf(q, v, s, {}, pinned());
}

Verdict subdiff_contains(const ProperFunction& f, const Vector& x, const LinearFunctional& xstar,
                         const DirectionSet& dirs, const SampleSchedule& s, const EstimatorOptions& opt) {
  finite_base(f, x);
  std::vector<LiminfEstimate> est(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) { est[i] = hadamard1(f, x, dirs.directions[i], s, opt); });
  VerdictBuilder b("Subdiff0", opt.zero_band);
  for (std::size_t i = 0; i < dirs.size(); ++i)
    b.record(holds_ge(est[i], opt.zero_band, xstar(dirs.directions[i])), dirs.directions[i], "hadamard1", est[i]);
  return b.finish();
}

}  // namespace nsdiag
