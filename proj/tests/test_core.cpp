#include <doctest.h>

#include <cmath>

#include "nsdiag/core.hpp"
#include "nsdiag/errors.hpp"
#include "nsdiag/parallel.hpp"
#include "support.hpp"

using namespace nsdiag;
using testing::vec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ExtReal> ext(std::initializer_list<double> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("extended reals") {
    CHECK_THROWS_AS(ExtReal(std::nan("")), DomainError);
    CHECK_THROWS_AS(ExtReal::pos_inf() + ExtReal::neg_inf(), DomainError);
    CHECK_THROWS_AS(0.0 * ExtReal(1.0), DomainError);
    CHECK((ExtReal(1.0) + ExtReal::pos_inf()).is_pos_inf());
    CHECK((2.0 * ExtReal::neg_inf()).is_neg_inf());
    CHECK(ExtReal::neg_inf() < ExtReal(-1e308));
    CHECK(ExtReal::pos_inf().to_string() == "+inf");
    CHECK(ExtReal::neg_inf().to_string() == "-inf");
    CHECK(ExtReal(0.1).to_string() == "0.10000000000000001");
    CHECK(nsdiag::min(ExtReal(2.0), ExtReal::neg_inf()).is_neg_inf());
  }

  TEST_CASE("schedule parsing and validation") {
    const SampleSchedule s = parse_schedule("t0=0.2,tratio=0.25,eps0=0.3,epsratio=0.9,stages=5,samples=16,seed=9");
    CHECK(s.t0 == 0.2);
    CHECK(s.t_ratio == 0.25);
    CHECK(s.eps0 == 0.3);
    CHECK(s.eps_ratio == 0.9);
    CHECK(s.stages == 5);
    CHECK(s.samples_per_stage == 16);
    CHECK(s.seed == 9u);
    CHECK(s.step(2) == doctest::Approx(0.2 * 0.0625));
    CHECK_THROWS_AS(parse_schedule("stages=2"), ConfigError);
    CHECK_THROWS_AS(parse_schedule("tratio=1"), ConfigError);
    CHECK_THROWS_AS(parse_schedule("bogus=1"), ConfigError);
    CHECK_THROWS_AS(parse_schedule("t0"), ConfigError);
  }

  TEST_CASE("trend strings round trip") {
    for (Trend t : {Trend::converged, Trend::diverging_plus_inf, Trend::diverging_minus_inf, Trend::oscillating,
                    Trend::inconclusive})
      CHECK(trend_from_string(to_string(t)) == t);
    CHECK(to_string(Trend::diverging_plus_inf) == "diverging_plus_inf");
  }

  TEST_CASE("constant quotient") {
    const LiminfEstimate e = estimate_liminf([](double, const Vector&) { return ExtReal(5.0); }, vec({1}), {});
    CHECK(e.value.value() == 5.0);
    CHECK(e.trend == Trend::converged);
    CHECK(e.stage_infima.size() == 12u);
  }

  TEST_CASE("forced divergence") {
    const SampleSchedule s;
    const LiminfEstimate e = estimate_liminf([](double t, const Vector&) { return ExtReal(1.0 / t); }, vec({1}), s);
    CHECK(e.trend == Trend::diverging_plus_inf);
    for (std::size_t j = 0; j < e.stage_infima.size(); ++j) {
      CHECK(e.stage_infima[j].value() >= 1.0 / s.step(static_cast<int>(j)));
      CHECK(e.stage_infima[j].value() <= 1.0 / s.step(static_cast<int>(j) + 1));
    }
    const LiminfEstimate m = estimate_liminf([](double t, const Vector&) { return ExtReal(-1.0 / t); }, vec({1}), s);
    CHECK(m.trend == Trend::diverging_minus_inf);
  }

  TEST_CASE("sin(1/t) against a dense sweep of the final stage") {
    SampleSchedule s;
    s.samples_per_stage = 4096;
    const LiminfEstimate e =
        estimate_liminf([](double t, const Vector&) { return ExtReal(std::sin(1.0 / t)); }, vec({1}), s);
    // Oracle: 10^6 log-spaced points over the final stage region.
    const double hi = s.step(s.stages - 1), lo = s.step(s.stages);
    double dense = 1.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) dense = std::min(dense, std::sin(1.0 / (hi * std::pow(lo / hi, (i + 0.5) / n))));
    CHECK(dense == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(e.value.value() >= -1.0);
    CHECK(e.value.value() - dense < 1e-4);
    CHECK(e.trend == Trend::converged);
  }

  TEST_CASE("power-law quotient extrapolates to its limit") {
    const LiminfEstimate e =
        estimate_liminf([](double t, const Vector&) { return ExtReal(3.0 + 2.0 * t); }, vec({1}), {}, {}, {true, false});
    CHECK(e.trend == Trend::converged);
    CHECK(e.extrapolated);
    CHECK(e.limit.value() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(e.lower() <= 3.0 + 1e-9);
  }

  TEST_CASE("nestedness: one more stage reproduces the earlier ones") {
    const Quotient q = [](double t, const Vector& u) { return ExtReal(u.squaredNorm() + std::sin(7.0 / t)); };
    SampleSchedule a;
    a.stages = 6;
    SampleSchedule b = a;
    b.stages = 7;
    const LiminfEstimate ea = estimate_liminf(q, vec({1, 0}), a);
    const LiminfEstimate eb = estimate_liminf(q, vec({1, 0}), b);
    for (int j = 0; j < 6; ++j) CHECK(ea.stage_infima[j].value() == eb.stage_infima[j].value());
  }

  TEST_CASE("doubling the samples can only lower stage infima") {
    const Quotient q = [](double t, const Vector& u) { return ExtReal(u[0] * u[0] + std::cos(3.0 / t)); };
    SampleSchedule a;
    SampleSchedule b = a;
    b.samples_per_stage *= 2;
    const LiminfEstimate ea = estimate_liminf(q, vec({1, 0}), a);
    const LiminfEstimate eb = estimate_liminf(q, vec({1, 0}), b);
    for (std::size_t j = 0; j < ea.stage_infima.size(); ++j) CHECK(eb.stage_infima[j] <= ea.stage_infima[j]);
  }

  TEST_CASE("a low hint lowers the value and never raises it") {
    const Quotient q = [](double t, const Vector& u) { return ExtReal(t < 1e-9 ? -1.0 : u.norm()); };
    const SampleSchedule s;
    const LiminfEstimate plain = estimate_liminf(q, vec({1}), s);
    const HintSource hints = [](double t_max) {
      std::vector<Sample> out;
      for (double t = 1e-10; t <= t_max && out.size() < 3; t *= 0.5) out.push_back({t, vec({1})});
      return out;
    };
    const LiminfEstimate hinted = estimate_liminf(q, vec({1}), s, hints);
    CHECK(hinted.value <= plain.value);
    CHECK(hinted.value.value() == -1.0);
  }

  TEST_CASE("trend labels") {
    SampleSchedule s;
    CHECK(classify_trend(ext({1.0, 1.0, 1.0}), s).trend == Trend::converged);
    const TrendResult g = classify_trend(ext({1.5, 1.25, 1.125, 1.0625}), s);
    CHECK(g.trend == Trend::converged);
    CHECK(g.limit.value() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(classify_trend(ext({1.0, -1.0, 1.0, -1.0}), s).trend == Trend::oscillating);
    CHECK(classify_trend(ext({-10.0, -1e3, -1e5}), s).trend == Trend::diverging_minus_inf);
    CHECK(classify_trend(ext({1.0, kInf, kInf}), s).trend == Trend::diverging_plus_inf);
    CHECK(classify_trend(ext({1.0, kInf, 2.0}), s).trend == Trend::inconclusive);
  }

  TEST_CASE("richardson removes power terms") {
    std::vector<ExtReal> col;
    for (int j = 0; j < 8; ++j) {
      const double t = 0.1 * std::pow(0.5, j);
      col.emplace_back(2.0 + 3.0 * t - 5.0 * t * t);
    }
    const auto lim = richardson_limit(col, 0.5);
    REQUIRE(lim);
    CHECK(*lim == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(richardson_limit(ext({1.0}), 0.5));
  }

  TEST_CASE("seeded randomness is reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
    Rng r(3);
    for (int i = 0; i < 200; ++i) CHECK(sample_unit_ball(r, 3).norm() <= 1.0);
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  }

  TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
    CHECK(std::count(hit.begin(), hit.end(), 1) == 1000);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                      if (i == 5) throw DomainError("boom");
                    }),
                    DomainError);
  }
}
