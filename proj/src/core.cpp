#include "nsdiag/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace nsdiag {

std::string ExtReal::to_string() const {
  if (is_pos_inf()) return "+inf";
  if (is_neg_inf()) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v_;
  return os.str();
}

double SampleSchedule::step(int stage) const { return t0 * std::pow(t_ratio, stage); }
double SampleSchedule::radius(int stage) const { return eps0 * std::pow(eps_ratio, stage); }

void SampleSchedule::validate() const {
  if (!(t0 > 0.0) || !(eps0 > 0.0)) throw ConfigError("schedule: t0 and eps0 must be positive");
  if (!(t_ratio > 0.0 && t_ratio < 1.0) || !(eps_ratio > 0.0 && eps_ratio < 1.0))
    throw ConfigError("schedule: ratios must lie strictly inside (0,1)");
  if (stages < 3) throw ConfigError("schedule: at least 3 stages are needed to label a trend");
  if (samples_per_stage < 1) throw ConfigError("schedule: samples_per_stage must be positive");
  if (!(trend_tol > 0.0) || !(divergence_threshold > 0.0))
    throw ConfigError("schedule: trend tolerances must be positive");
}

SampleSchedule parse_schedule(const std::string& spec, SampleSchedule base) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("schedule: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    std::string val = item.substr(eq + 1);
    try {
      if (key == "t0") base.t0 = std::stod(val);
      else if (key == "tratio") base.t_ratio = std::stod(val);
      else if (key == "eps0") base.eps0 = std::stod(val);
      else if (key == "epsratio") base.eps_ratio = std::stod(val);
      else if (key == "stages") base.stages = std::stoi(val);
      else if (key == "samples") base.samples_per_stage = std::stoi(val);
      else if (key == "seed") base.seed = std::stoull(val);
      else throw ConfigError("schedule: unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("schedule: bad value for '" + key + "'");
    }
  }
  base.validate();
  return base;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::converged: return "converged";
    case Trend::diverging_plus_inf: return "diverging_plus_inf";
    case Trend::diverging_minus_inf: return "diverging_minus_inf";
    case Trend::oscillating: return "oscillating";
    case Trend::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Trend trend_from_string(const std::string& s) {
  static const std::map<std::string, Trend> table = {
      {"converged", Trend::converged},
      {"diverging_plus_inf", Trend::diverging_plus_inf},
      {"diverging_minus_inf", Trend::diverging_minus_inf},
      {"oscillating", Trend::oscillating},
      {"inconclusive", Trend::inconclusive}};
  auto it = table.find(s);
  if (it == table.end()) throw ConfigError("unknown trend '" + s + "'");
  return it->second;
}

double LiminfEstimate::lower() const { return std::min(value.value(), limit.value()); }
double LiminfEstimate::upper() const { return std::max(value.value(), limit.value()); }

// ---------------------------------------------------------------------------
// Random numbers

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    double s = *spare_;
    spare_.reset();
    return s;
  }
  double u1 = uniform();
  double u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  return r * std::cos(th);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (stream * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL));
  return r.next();
}

Vector sample_unit_ball(Rng& rng, int dim) {
  Vector g(dim);
  for (int i = 0; i < dim; ++i) g[i] = rng.normal();
  double n = g.norm();
  if (n == 0.0) return Vector::Zero(dim);
  double radius = std::pow(rng.uniform(), 1.0 / dim);
  return g * (radius / n);
}

// ---------------------------------------------------------------------------
// Trend labelling

namespace {

struct RatioMatch {
  bool found = false;
  double ratio = 0.0;
};

// Matches an observed contraction ratio against the power-law rates the
// geometric schedule can produce.
RatioMatch match_ratio(double observed, const SampleSchedule& s, double log_tol) {
  static constexpr std::array<double, 6> powers = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
  RatioMatch best;
  if (!(observed > 0.0 && observed < 1.0)) return best;
  double best_gap = log_tol;
  for (double base : {s.t_ratio, s.eps_ratio}) {
    for (double p : powers) {
      double c = std::pow(base, p);
      double gap = std::abs(std::log(observed) - std::log(c));
      if (gap < best_gap) {
        best_gap = gap;
        best = {true, c};
      }
    }
  }
  return best;
}

}  // namespace

TrendResult classify_trend(const std::vector<ExtReal>& v, const SampleSchedule& s) {
  TrendResult out;
  if (v.size() < 3) throw ConfigError("trend labelling needs at least 3 stage values");
  const std::size_t n = v.size();
  ExtReal a = v[n - 3], b = v[n - 2], c = v[n - 1];
  out.limit = c;

  if (b.is_pos_inf() && c.is_pos_inf()) {
    out.trend = Trend::diverging_plus_inf;
    return out;
  }
  if (b.is_neg_inf() && c.is_neg_inf()) {
    out.trend = Trend::diverging_minus_inf;
    return out;
  }
  if (!a.is_finite() || !b.is_finite() || !c.is_finite()) {
    out.trend = Trend::inconclusive;
    return out;
  }

  const double d1 = b.value() - a.value();
  const double d2 = c.value() - b.value();
  const double scale = std::max(1.0, std::abs(c.value()));
  const double tol = s.trend_tol * scale;

  RatioMatch geo;
  if (d1 != 0.0 && d2 != 0.0 && (d1 > 0) == (d2 > 0)) {
    geo = match_ratio(d2 / d1, s, 0.1);
    // With a longer history the preceding ratio must tell the same story.
    if (geo.found && n >= 4 && v[n - 4].is_finite()) {
      double d0 = a.value() - v[n - 4].value();
      double prev = d0 != 0.0 ? d1 / d0 : 0.0;
      if (!(prev > 0.0) || std::abs(std::log(prev) - std::log(geo.ratio)) > 0.25) geo.found = false;
    }
  }
  if (geo.found) {
    out.trend = Trend::converged;
    out.limit = ExtReal(c.value() + d2 * geo.ratio / (1.0 - geo.ratio));
    out.extrapolated = true;
    return out;
  }

  if (std::abs(d1) < tol && std::abs(d2) < tol) {
    out.trend = Trend::converged;
    return out;
  }

  const bool monotone = d1 != 0.0 && d2 != 0.0 && (d1 > 0) == (d2 > 0);
  if (monotone) {
    const bool beyond = std::abs(c.value()) > s.divergence_threshold;
    const bool non_contracting = std::abs(d2) >= std::abs(d1);
    if (beyond || non_contracting) {
      out.trend = d2 > 0 ? Trend::diverging_plus_inf : Trend::diverging_minus_inf;
      return out;
    }
  }
  if (d1 * d2 < 0.0 && std::abs(d1) >= tol && std::abs(d2) >= tol) {
    out.trend = Trend::oscillating;
    return out;
  }
  out.trend = Trend::inconclusive;
  return out;
}

std::optional<double> richardson_limit(const std::vector<ExtReal>& column, double ratio) {
  // Longest finite tail.
  std::vector<double> col;
  for (auto it = column.rbegin(); it != column.rend() && it->is_finite(); ++it) col.push_back(it->value());
  std::reverse(col.begin(), col.end());
  if (col.size() < 2) return std::nullopt;

  constexpr int max_order = 4;
  const std::size_t m = col.size();
  std::vector<std::vector<double>> table(max_order + 1, std::vector<double>(m, 0.0));
  table[0] = col;
  double best = col.back();
  double best_err = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_order; ++k) {
    const double rk = std::pow(ratio, k);
    for (std::size_t i = static_cast<std::size_t>(k); i < m; ++i) {
      table[k][i] = (table[k - 1][i] - rk * table[k - 1][i - 1]) / (1.0 - rk);
      double err = std::max(std::abs(table[k][i] - table[k - 1][i]), std::abs(table[k][i] - table[k - 1][i - 1]));
      if (err <= best_err) {
        best_err = err;
        best = table[k][i];
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Estimator

LiminfEstimate estimate_liminf(const Quotient& q, const Vector& u, const SampleSchedule& schedule,
                               const HintSource& hints, LiminfOptions options) {
  schedule.validate();
  const int dim = static_cast<int>(u.size());
  if (dim < 1) throw ConfigError("estimate_liminf: direction must have dimension >= 1");

  // Stage-independent pattern: log-offsets from a Kronecker sequence with a
  // seeded phase, ball offsets drawn in sequence so that longer runs extend
  // shorter ones.
  constexpr double golden = 0.61803398874989484820;
  Rng rng(schedule.seed);
  const double phase = rng.uniform();
  std::vector<double> offsets(schedule.samples_per_stage);
  std::vector<Vector> ball(schedule.samples_per_stage);
  for (int i = 0; i < schedule.samples_per_stage; ++i) {
    double s = phase + golden * i;
    offsets[i] = s - std::floor(s);
    ball[i] = options.pin_direction ? Vector::Zero(dim) : sample_unit_ball(rng, dim);
  }

  auto shape = [&](Vector d) {
    if (options.unit_directions) {
      double n = d.norm();
      if (n > 0.0) d /= n;
    }
    return d;
  };

  LiminfEstimate est;
  est.stage_infima.reserve(schedule.stages);
  est.stage_anchors.reserve(schedule.stages);
  std::vector<Sample> hint_pool;
  if (hints) hint_pool = hints(schedule.step(0));

  for (int j = 0; j < schedule.stages; ++j) {
    const double tau = schedule.step(j);
    const double eps = schedule.radius(j);

    std::vector<Sample> pts;
    pts.reserve(schedule.samples_per_stage + 1);
    pts.push_back({tau, shape(u)});
    for (int i = 0; i < schedule.samples_per_stage; ++i) {
      double t = tau * std::pow(schedule.t_ratio, offsets[i]);
      pts.push_back({t, shape(u + eps * ball[i])});
    }
    for (const auto& h : hint_pool)
      if (h.t > 0.0 && h.t <= tau) pts.push_back(h);

    ExtReal best = ExtReal::pos_inf();
    Sample arg = pts.front();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      ExtReal val = q(pts[k].t, pts[k].direction);
      if (k == 0) est.stage_anchors.push_back(val);
      if (val < best) {
        best = val;
        arg = pts[k];
      }
    }
    est.stage_infima.push_back(best);
    if (j == schedule.stages - 1) {
      est.value = best;
      est.witness = arg;
    }
  }

  TrendResult tr = classify_trend(est.stage_infima, schedule);
  est.trend = tr.trend;
  est.limit = tr.limit;
  est.extrapolated = tr.extrapolated;
  return est;
}

}  // namespace nsdiag

#include "nsdiag/parallel.hpp"

namespace nsdiag {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned n) { g_max_threads = n; }

unsigned max_threads() {
  unsigned n = g_max_threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

}  // namespace nsdiag
