#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "nsdiag/cones.hpp"

namespace testing {

inline nsdiag::Vector vec(std::initializer_list<double> xs) {
  nsdiag::Vector v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Independent estimate of max <a, y> over unit y in cone(gens): random sparse
// nonnegative combinations, then a pattern search on the best coefficient
// vector. Never uses projections or face enumeration.
inline double dense_sphere_max(const std::vector<nsdiag::Vector>& gens, const nsdiag::Vector& a, int samples,
                               nsdiag::Rng& rng) {
  const std::size_t m = gens.size();
  auto value = [&](const std::vector<double>& c) {
    nsdiag::Vector y = nsdiag::Vector::Zero(a.size());
    for (std::size_t i = 0; i < m; ++i) y += c[i] * gens[i];
    const double n = y.norm();
    return n < 1e-300 ? -std::numeric_limits<double>::infinity() : a.dot(y) / n;
  };
  std::vector<double> best(m, 0.0);
  double best_v = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& c) {
    const double v = value(c);
    if (v > best_v) {
      best_v = v;
      best = c;
    }
  };
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> c(m, 0.0);
    c[i] = 1.0;
    consider(c);
  }
  for (int s = 0; s < samples; ++s) {
    std::vector<double> c(m);
    for (auto& ci : c) ci = rng.uniform() < 0.5 ? 0.0 : -std::log(1.0 - rng.uniform());
    consider(c);
  }
  double h = 0.5 * *std::max_element(best.begin(), best.end());
  for (int iter = 0; h > 1e-14 && iter < 200000; ++iter) {
    bool moved = false;
    for (std::size_t i = 0; i < m; ++i)
      for (double step : {h, -h}) {
        std::vector<double> c = best;
        c[i] = std::max(0.0, c[i] + step);
        const double v = value(c);
        if (v > best_v + 1e-16) {
          best_v = v;
          best = c;
          moved = true;
        }
      }
    if (!moved) h *= 0.5;
  }
  return best_v;
}

}  // namespace testing

#include "nsdiag/corpus.hpp"
#include "nsdiag/derivatives.hpp"

namespace testing {

struct HomogeneityTally {
  int checked = 0;
  int failed = 0;
  std::string first_failure;
};

// h(tau u) = tau^k h(u) for hadamard1 (k = 1) and hadamard2 with x1* = 0
// (k = 2), wherever both estimates converge to finite values. Estimates are
// compared as evidence intervals [lower, upper]; for tight intervals this is
// the plain point comparison.
inline HomogeneityTally homogeneity_tally(const std::vector<double>& taus, int n_dirs, double rel_tol = 1e-4) {
  HomogeneityTally tally;
  const nsdiag::SampleSchedule s;
  const nsdiag::EstimatorOptions opt;
  for (const nsdiag::CorpusEntry& e : nsdiag::corpus()) {
    const nsdiag::ProperFunction& f = e.function;
    const nsdiag::LinearFunctional zero{nsdiag::Vector::Zero(f.dim)};
    const nsdiag::DirectionSet dirs =
        f.dim == 1 ? nsdiag::DirectionSet::defaults(1) : nsdiag::DirectionSet::fibonacci(f.dim, n_dirs);
    for (const nsdiag::Vector& u : dirs.directions) {
      for (int k : {1, 2}) {
        auto est = [&](const nsdiag::Vector& d) {
          return k == 1 ? nsdiag::hadamard1(f, e.candidate, d, s, opt)
                        : nsdiag::hadamard2(f, e.candidate, zero, d, s, opt);
        };
        const nsdiag::LiminfEstimate base = est(u);
        if (base.trend != nsdiag::Trend::converged || !base.best().is_finite()) continue;
        for (double tau : taus) {
          const nsdiag::LiminfEstimate scaled = est(tau * u);
          if (scaled.trend != nsdiag::Trend::converged || !scaled.best().is_finite()) continue;
          const double w = std::pow(tau, k);
          const double want = w * base.best().value();
          const double got = scaled.best().value();
          const double lo = std::max(w * base.lower(), scaled.lower());
          const double hi = std::min(w * base.upper(), scaled.upper());
          ++tally.checked;
          if (lo - hi > rel_tol * std::abs(want) + opt.zero_band) {
            ++tally.failed;
            if (tally.first_failure.empty())
              tally.first_failure = f.name + " order " + std::to_string(k) + " tau " + std::to_string(tau) +
                                    ": " + std::to_string(got) + " vs " + std::to_string(want);
          }
        }
      }
    }
  }
  return tally;
}

}  // namespace testing
