#include "nsdiag/classify.hpp"

#include <cmath>
#include <limits>

#include "nsdiag/parallel.hpp"

namespace nsdiag {

namespace {

struct Row {
  Truth truth;
  std::string kind;
  LiminfEstimate estimate;
};

using Rows = std::vector<Row>;

// Runs probe(u) over every direction and folds the rows into a verdict. With
// stop_at_first the sweep is sequential and ends at the first violation.
template <class Probe>
Verdict sweep(const std::string& tag, const DirectionSet& dirs, const ClassifyOptions& opt, Probe probe,
              std::string note = {}) {
  VerdictBuilder b(tag, opt.zero_band);
  if (opt.stop_at_first) {
    for (const auto& u : dirs.directions) {
      for (const auto& r : probe(u)) b.record(r.truth, u, r.kind, r.estimate);
      if (b.failed()) break;
    }
  } else {
    std::vector<Rows> rows(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t i) { rows[i] = probe(dirs.directions[i]); });
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (const auto& r : rows[i]) b.record(r.truth, dirs.directions[i], r.kind, r.estimate);
  }
  return b.finish(std::move(note));
}

void require_finite(const ProperFunction& f, const Vector& x) {
  if (!f(x).is_finite()) throw PreconditionError(f.name + ": f(x) must be finite");
}

LinearFunctional zero_functional(const Vector& x) { return {Vector::Zero(x.size())}; }

// hadamard1 >= 0 and hadamard2(0) >= 0; shared by the necessary condition and 2-stationarity.
Verdict first_and_second_nonnegative(const std::string& tag, const ProperFunction& f, const Vector& x,
                                     const DirectionSet& dirs, const SampleSchedule& s, const ClassifyOptions& opt) {
  require_finite(f, x);
  const auto eo = opt.estimator();
  return sweep(tag, dirs, opt, [&](const Vector& u) {
    Rows rows;
    LiminfEstimate h1 = hadamard1(f, x, u, s, eo);
    Truth t1 = holds_ge(h1, opt.zero_band);
    rows.push_back({t1, "hadamard1", std::move(h1)});
    if (opt.stop_at_first && t1 == Truth::no) return rows;
    LiminfEstimate h2 = hadamard2(f, x, zero_functional(x), u, s, eo);
    rows.push_back({holds_ge(h2, opt.zero_band), "hadamard2", std::move(h2)});
    return rows;
  });
}

}  // namespace

Verdict check_necessary_local_min(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                  const SampleSchedule& s, const ClassifyOptions& opt) {
  return first_and_second_nonnegative("Thm1", f, x, dirs, s, opt);
}

Verdict is_2stationary(const ProperFunction& f, const Vector& x, const DirectionSet& dirs, const SampleSchedule& s,
                       const ClassifyOptions& opt) {
  return first_and_second_nonnegative("2Stat", f, x, dirs, s, opt);
}

Verdict check_necessary_local_min_dini(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                       const SampleSchedule& s, const ClassifyOptions& opt) {
  require_finite(f, x);
  const auto eo = opt.estimator();
  return sweep("Thm1-Dini", dirs, opt, [&](const Vector& u) {
    Rows rows;
    LiminfEstimate d1 = dini1(f, x, u, s);
    Truth zero = holds_zero(d1, opt.zero_band);
    rows.push_back({holds_ge(d1, opt.zero_band), "dini1", d1});
    if (zero == Truth::yes) {
      LiminfEstimate d2 = dini2(f, x, u, s, eo);
      rows.push_back({holds_ge(d2, opt.zero_band), "dini2", std::move(d2)});
    } else if (zero == Truth::unknown) {
      rows.push_back({Truth::unknown, "dini1=0", std::move(d1)});
    }
    return rows;
  });
}

Verdict check_isolated_order2(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                              const SampleSchedule& s, Thm2Variant variant, const ClassifyOptions& opt) {
  require_finite(f, x);
  const auto eo = opt.estimator();
  const std::string tag = variant == Thm2Variant::b ? "Thm2-b" : "Thm2-c";
  return sweep(tag, dirs, opt, [&](const Vector& u) {
    Rows rows;
    LiminfEstimate h1 = hadamard1(f, x, u, s, eo);
    Truth t1 = holds_ge(h1, opt.zero_band);
    Truth zero = holds_zero(h1, opt.zero_band);
    rows.push_back({t1, "hadamard1", h1});
    if (opt.stop_at_first && t1 == Truth::no) return rows;
    if (variant == Thm2Variant::c && zero == Truth::no) return rows;
    if (variant == Thm2Variant::c && zero == Truth::unknown) {
      rows.push_back({Truth::unknown, "hadamard1=0", std::move(h1)});
      return rows;
    }
    LiminfEstimate h2 = hadamard2(f, x, zero_functional(x), u, s, eo);
    rows.push_back({holds_gt(h2, opt.zero_band), "hadamard2", std::move(h2)});
    return rows;
  });
}

InvexReport check_2invex_on_box(const ProperFunction& f, const Box& box, int grid_n, const DirectionSet& dirs,
                                const SampleSchedule& s, const ClassifyOptions& opt) {
  std::vector<Vector> pts = box_grid(box, grid_n);
  InvexReport rep;
  rep.grid_points = static_cast<long long>(pts.size());

  std::vector<double> vals(pts.size());
  std::vector<char> stationary(pts.size(), 0);
  ClassifyOptions inner = opt;
  inner.stop_at_first = true;
  parallel_for(pts.size(), [&](std::size_t i) {
    ExtReal v = f(pts[i]);
    vals[i] = v.value();
    if (!v.is_finite()) return;
    stationary[i] = is_2stationary(f, pts[i], dirs, s, inner).outcome == Outcome::pass;
  });

  std::size_t arg = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (vals[i] < vals[arg]) arg = i;
  rep.grid_min = vals[arg];
  rep.grid_argmin = pts[arg];

  VerdictBuilder b("2Invex", opt.zero_band);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!stationary[i]) continue;
    rep.stationary_points.push_back(pts[i]);
    if (vals[i] > rep.grid_min + opt.zero_band) {
      LiminfEstimate gap;
      gap.value = gap.limit = ExtReal(vals[i] - rep.grid_min);
      gap.trend = Trend::converged;
      b.record(Truth::no, pts[i], "stationary_excess", gap);
    }
  }
  std::string note = std::to_string(rep.stationary_points.size()) + " 2-stationary of " +
                     std::to_string(rep.grid_points) + " grid points";
  rep.verdict = b.finish(note);
  return rep;
}

StrongPseudoconvexityReport check_strong_pseudoconvex(const ProperFunction& f, const Vector& x,
                                                      const DirectionSet& dirs, const SampleSchedule& s, SpcMode mode,
                                                      const ClassifyOptions& opt) {
  require_finite(f, x);
  const auto eo = opt.estimator();
  const double fx = f(x).value();
  StrongPseudoconvexityReport rep;
  rep.mode = mode;

  struct Probe {
    LiminfEstimate first;
    Truth zero = Truth::no;
    std::optional<LiminfEstimate> growth;
  };
  std::vector<Probe> probes(dirs.size());
  Quotient growth_q = [f, x, fx](double t, const Vector& d) -> ExtReal {
    ExtReal y = f(x + t * d);
    if (y.is_pos_inf()) return y;
    return ExtReal((y.value() - fx) / (t * t));
  };
  parallel_for(dirs.size(), [&](std::size_t i) {
    const Vector& u = dirs.directions[i];
    Probe& p = probes[i];
    p.first = mode == SpcMode::dini ? dini1(f, x, u, s) : hadamard1(f, x, u, s, eo);
    p.zero = holds_zero(p.first, opt.zero_band);
    if (p.zero != Truth::yes) return;
    if (mode == SpcMode::dini) {
      p.growth = growth2(f, x, u, s);
    } else {
      LiminfOptions lo;
      lo.unit_directions = true;
      HintSource hints = opt.use_witnesses ? witness_hints(f, x, u, use_hadamard) : HintSource{};
      p.growth = estimate_liminf(growth_q, u, s, hints, lo);
    }
  });

  VerdictBuilder b(mode == SpcMode::dini ? "SPC-Dini" : "SPC-Had", opt.zero_band);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vector& u = dirs.directions[i];
    Probe& p = probes[i];
    if (p.zero == Truth::unknown) {
      b.record(Truth::unknown, u, mode == SpcMode::dini ? "dini1" : "hadamard1", p.first);
      continue;
    }
    if (p.zero == Truth::no) continue;
    SpcDirection d;
    d.direction = u;
    d.first_order = p.first;
    d.growth = *p.growth;
    d.alpha = p.growth->value.value();
    d.delta = s.step(s.stages - 1);
    b.record(d.alpha > opt.zero_band ? Truth::yes : Truth::no, u, "alpha", d.growth);
    rep.zero_dirs.push_back(std::move(d));
  }
  rep.verdict = b.finish(std::to_string(rep.zero_dirs.size()) + " zero directions");
  return rep;
}

LStabilityReport check_lstability(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                  const SampleSchedule& s, const std::vector<double>& probe_radii,
                                  const ClassifyOptions& opt) {
  require_finite(f, x);
  if (probe_radii.empty()) throw ConfigError("lstability: at least one probe radius");
  for (std::size_t i = 1; i < probe_radii.size(); ++i)
    if (!(probe_radii[i] < probe_radii[i - 1])) throw ConfigError("lstability: probe radii must decrease");

  const double inf = std::numeric_limits<double>::infinity();
  auto slope_gap = [inf](const LiminfEstimate& a, const LiminfEstimate& b) {
    ExtReal x = a.best(), y = b.best();
    if (x.is_finite() && y.is_finite()) return std::abs(x.value() - y.value());
    return x == y ? 0.0 : inf;
  };

  LStabilityReport rep;
  const std::size_t n = dirs.size();
  for (double r : probe_radii) {
    SampleSchedule sr = s;
    sr.t0 = std::min(s.t0, 0.1 * r);
    std::vector<LiminfEstimate> base(n);
    parallel_for(n, [&](std::size_t j) { base[j] = dini1(f, x, dirs.directions[j], sr); });
    std::vector<LStabilitySample> worst(n);
    parallel_for(n, [&](std::size_t i) {
      Vector y = x + r * dirs.directions[i];
      worst[i] = {r, y, dirs.directions[0], -1.0};
      if (!f(y).is_finite()) return;
      for (std::size_t j = 0; j < n; ++j) {
        const Vector& u = dirs.directions[j];
        double ratio = slope_gap(dini1(f, y, u, sr), base[j]) / (r * u.norm());
        if (ratio > worst[i].ratio) worst[i] = {r, y, u, ratio};
      }
    });
    LStabilitySample best = worst[0];
    for (const auto& w : worst)
      if (w.ratio > best.ratio) best = w;
    rep.per_radius.push_back(best);
    rep.K_hat = std::max(rep.K_hat, best.ratio);
  }

  // Unbounded growth: the last three radii each raise the ratio by >= 2 per decade.
  bool unbounded = false;
  const auto& pr = rep.per_radius;
  if (!pr.empty() && std::isinf(pr.back().ratio)) unbounded = true;
  if (pr.size() >= 3) {
    bool grows = true;
    for (std::size_t k = pr.size() - 2; k < pr.size(); ++k) {
      double decades = std::log10(pr[k - 1].radius / pr[k].radius);
      double a = pr[k - 1].ratio, b = pr[k].ratio;
      if (!(a > 0.0) || !(b > a) || std::pow(b / a, 1.0 / decades) < 2.0) grows = false;
    }
    unbounded = unbounded || grows;
  }

  VerdictBuilder b("LStab", opt.zero_band);
  std::string note;
  if (unbounded) {
    rep.violation_witness = rep.per_radius;
    for (const auto& w : rep.per_radius) {
      LiminfEstimate e;
      e.value = e.limit = ExtReal(w.ratio);
      e.trend = Trend::diverging_plus_inf;
      b.record(Truth::no, w.u, "ratio at y=(" + format_vector(w.y) + ")", e);
    }
    note = "Dini slope ratio grows without bound, last K(r) = " + ExtReal(pr.back().ratio).to_string();
  } else {
    note = "no violation found, K_hat = " + ExtReal(rep.K_hat).to_string();
  }
  rep.verdict = b.finish(note);
  return rep;
}

Thm5Report thm5_report(const ProperFunction& f, const Vector& x, const DirectionSet& dirs, const SampleSchedule& s,
                       const ClassifyOptions& opt, bool run_oracle) {
  Thm5Report rep;
  rep.spc = check_strong_pseudoconvex(f, x, dirs, s, SpcMode::hadamard, opt);
  rep.precondition_met = rep.spc.verdict.outcome == Outcome::pass;
  rep.subdiff = subdiff_contains(f, x, zero_functional(x), dirs, s, opt.estimator());
  if (run_oracle) {
    rep.oracle = isolated_order2(f, x, GridSpec::around(x), opt.use_witnesses);
    bool claims_isolated = rep.subdiff.outcome == Outcome::pass;
    rep.oracle_agrees = rep.precondition_met &&
                        ((claims_isolated && rep.oracle->outcome == OracleOutcome::yes) ||
                         (!claims_isolated && rep.oracle->outcome == OracleOutcome::no));
  }
  if (rep.precondition_met) {
    rep.verdict = rep.subdiff;
    rep.verdict.condition_id = "Thm5";
  } else {
    rep.verdict.outcome = Outcome::precondition_not_met;
    rep.verdict.condition_id = "Thm5";
    rep.verdict.zero_band = opt.zero_band;
    rep.verdict.witnesses = rep.spc.verdict.witnesses;
    rep.verdict.note = "Hadamard strong pseudoconvexity " + to_string(rep.spc.verdict.outcome) +
                       "; 0 in subdifferential: " + to_string(rep.subdiff.outcome);
  }
  return rep;
}

Verdict check_spc_first_order_sufficiency(const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                                          const SampleSchedule& s, const ClassifyOptions& opt) {
  StrongPseudoconvexityReport spc = check_strong_pseudoconvex(f, x, dirs, s, SpcMode::hadamard, opt);
  if (spc.verdict.outcome != Outcome::pass)
    throw PreconditionError(f.name + ": Hadamard strong pseudoconvexity is " + to_string(spc.verdict.outcome));
  Verdict v = subdiff_contains(f, x, zero_functional(x), dirs, s, opt.estimator());
  v.condition_id = "Thm5";
  return v;
}

}  // namespace nsdiag
