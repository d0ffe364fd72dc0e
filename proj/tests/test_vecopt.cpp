#include <doctest.h>

#include <cmath>
#include <memory>

#include "nsdiag/errors.hpp"
#include "nsdiag/vecopt.hpp"
#include "support.hpp"

using namespace nsdiag;
using testing::vec;

namespace {

VectorProblem biobjective(VectorMap f, VectorMap g = [](const Vector&) { return vec({-1}); },
                          PolyhedralCone K = PolyhedralCone::orthant(1)) {
  VectorProblem p;
  p.name = "TEST";
  p.dim = 2;
  p.n_objectives = 2;
  p.n_constraints = static_cast<int>(K.dim);
  p.f = std::move(f);
  p.g = std::move(g);
  p.C = PolyhedralCone::orthant(2);
  p.K = std::move(K);
  p.domain_box = symmetric_box(2, 1.0);
  p.candidate = Vector::Zero(2);
  return p;
}

VectorProblem squares() {
  return biobjective([](const Vector& x) { return vec({x[0] * x[0], x[1] * x[1]}); });
}

VectorProblem identity_map() {
  return biobjective([](const Vector& x) { return x; });
}

std::string data_path(const std::string& rel) { return std::string(NSDIAG_SOURCE_DIR) + "/data/" + rel; }

const Vector kOrigin = Vector::Zero(2);

}  // namespace

TEST_SUITE("vecopt") {
  TEST_CASE("feasibility") {
    VectorProblem p = biobjective([](const Vector& x) { return x; },
                                  [](const Vector& x) { return vec({x[0] * x[0] - 1}); });
    CHECK(feasible(p, vec({0, 0})));
    CHECK_FALSE(feasible(p, vec({2, 0})));
    const auto l = violated_constraint(p, vec({2, 0}));
    REQUIRE(l);
    CHECK((*l)(vec({-3})) < 0.0);
    CHECK_FALSE(violated_constraint(p, vec({0, 0})));

    VectorProblem eq =
        biobjective([](const Vector& x) { return x; }, [](const Vector& x) { return vec({x[0]}); },
                    PolyhedralCone::zero(1));
    CHECK(feasible(eq, vec({0, 1})));
    CHECK_FALSE(feasible(eq, vec({0.5, 0})));
  }

  TEST_CASE("problem validation") {
    VectorProblem p = squares();
    CHECK_NOTHROW(p.validate());
    p.C = PolyhedralCone::from_generators({vec({1, 1})});
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }

  TEST_CASE("scalarization examples") {
    const ScalarizedF F = scalarize(squares(), kOrigin);
    CHECK(std::abs(F(kOrigin)) <= 1e-9);
    CHECK(F(vec({0.1, 0})) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(F.payoff(vec({0.1, 0})).isApprox(vec({0.01, 0, -1})));
    const ScalarizedF L = scalarize(identity_map(), kOrigin);
    CHECK(L(vec({-0.1, -0.1})) == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(F.as_function().name == "F[TEST]");

    VectorProblem strip = biobjective([](const Vector& x) { return x; },
                                      [](const Vector& x) { return vec({x[0] * x[0] - 1}); });
    CHECK_THROWS_AS(scalarize(strip, vec({2, 0})), PreconditionError);
  }

  TEST_CASE("F vanishes at the candidate and is nonnegative nearby") {
    const ScalarizedF F = scalarize(squares(), kOrigin);
    double low = 0.0;
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) low = std::min(low, F(vec({-0.5 + 0.05 * i, -0.5 + 0.05 * j})));
    CHECK(low >= -1e-9);
  }

  TEST_CASE("infeasible points have positive F") {
    VectorProblem p = biobjective([](const Vector& x) { return vec({x[0] * x[0], x[1] * x[1]}); },
                                  [](const Vector& x) { return vec({x[0] * x[0] - 1}); });
    p.domain_box = symmetric_box(2, 3.0);
    const ScalarizedF F = scalarize(p, kOrigin);
    int infeasible = 0;
    for (double a = -3.0; a <= 3.0; a += 0.25)
      for (double b = -3.0; b <= 3.0; b += 0.5) {
        const Vector x = vec({a, b});
        if (feasible(p, x)) continue;
        ++infeasible;
        CHECK(F(x) > 1e-12);
      }
    CHECK(infeasible > 0);
  }

  TEST_CASE("F agrees with dense sampling of the multiplier sphere") {
    Rng rng(19);
    Rng oracle_rng(23);
    for (int k = 0; k < 20; ++k) {
      VectorProblem p = squares();
      p.C = random_cone(rng, 2, 2);
      if (!interior_contains(p.C, (*complete(p.C).generators)[0] + (*complete(p.C).generators)[1])) {
        p.C = PolyhedralCone::orthant(2);
      }
      const ScalarizedF F = scalarize(p, kOrigin);
      const Vector x = vec({2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0});
      const double dense =
          testing::dense_sphere_max(*complete(F.lambda_cone).generators, F.payoff(x), 10000, oracle_rng);
      CAPTURE(k);
      CHECK(std::abs(F(x) - dense) <= 1e-6);
    }
  }

  TEST_CASE("weak minimizer necessary conditions") {
    const SampleSchedule s;
    const DirectionSet d = DirectionSet::defaults(2);
    const Verdict sq = check_weak_min_necessary(squares(), kOrigin, d, s);
    CHECK(sq.condition_id == "VecWeakMin");
    CHECK(sq.outcome == Outcome::pass);
    const Verdict lin = check_weak_min_necessary(identity_map(), kOrigin, d, s);
    CHECK(lin.outcome == Outcome::fail);
    bool saw_negative_quadrant = false;
    for (const EstimateWitness& w : lin.witnesses)
      if (w.direction[0] < 0 && w.direction[1] < 0 && w.estimate.best().value() < 0) saw_negative_quadrant = true;
    CHECK(saw_negative_quadrant);
  }

  TEST_CASE("isolated order two on the shipped instances") {
    const SampleSchedule s;
    const DirectionSet d = DirectionSet::defaults(2);
    struct Case {
      const char* file;
      Outcome verdict;
    };
    for (const Case c : {Case{"vecopt/sqnorm_pair.json", Outcome::pass}, Case{"vecopt/quartic_pair.json", Outcome::fail},
                         Case{"vecopt/quadratic_biobjective.json", Outcome::pass}}) {
      CAPTURE(c.file);
      const VectorProblem p = load_vector_problem(data_path(c.file));
      const Vector x = *p.candidate;
      const Verdict v = check_vector_isolated_order2(p, x, d, s);
      CHECK(v.condition_id == "VecIso2");
      CHECK(v.outcome == c.verdict);
      const OracleOutcome want = c.verdict == Outcome::pass ? OracleOutcome::yes : OracleOutcome::no;
      for (IsolationVariant var : {IsolationVariant::jimenez, IsolationVariant::isolmin, IsolationVariant::lambda})
        CHECK(vector_isolated_oracle(p, x, GridSpec::around(x), 2, var).outcome == want);
    }
  }

  TEST_CASE("order one isolation fails for opposed objectives") {
    VectorProblem p = biobjective([](const Vector& x) { return vec({x[0], -x[0]}); });
    const OracleReport r = vector_isolated_oracle(p, kOrigin, GridSpec::around(kOrigin), 1, IsolationVariant::isolmin);
    CHECK(r.outcome == OracleOutcome::no);
  }

  TEST_CASE("orthant-only variants reject other cones") {
    VectorProblem p = squares();
    p.C = PolyhedralCone::from_generators({vec({1, 0}), vec({1, 1})});
    CHECK_THROWS_AS(vector_isolated_oracle(p, kOrigin, GridSpec::around(kOrigin), 2, IsolationVariant::jimenez),
                    ConfigError);
    CHECK_NOTHROW(vector_isolated_oracle(p, kOrigin, GridSpec::around(kOrigin), 2, IsolationVariant::lambda));
  }

  TEST_CASE("variant names") {
    for (IsolationVariant v : {IsolationVariant::jimenez, IsolationVariant::isolmin, IsolationVariant::lambda})
      CHECK(isolation_variant_from_string(to_string(v)) == v);
    CHECK_THROWS_AS(isolation_variant_from_string("nope"), ConfigError);
  }

  TEST_CASE("problem files") {
    const VectorProblem p = load_vector_problem(data_path("vecopt/quadratic_biobjective.json"));
    CHECK(p.name == "QUAD_BIOBJECTIVE");
    CHECK(p.n_objectives == 2);
    CHECK(p.n_constraints == 1);
    CHECK(p.f(vec({0.5, 2})).isApprox(vec({0.25, 4})));
    CHECK(p.f_source.size() == 2u);
    REQUIRE(p.candidate);

    const VectorProblem strip = load_vector_problem(data_path("vecopt/infeasible_candidate.json"));
    CHECK_FALSE(feasible(strip, *strip.candidate));

    CHECK_THROWS_AS(parse_vector_problem("{"), ConfigError);
    CHECK_THROWS_AS(parse_vector_problem(R"({"dim": 2, "f": ["x1"], "C": {"generators": [[1]]},
                                              "K": {"generators": [[1]]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_vector_problem(R"({"dim": 1, "f": ["x1"], "g": ["-1"], "C": {"generators": [[1]]},
                                              "K": {"generators": [[1, 0]]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_vector_problem(R"({"dim": 1, "f": ["x1 +"], "g": ["-1"], "C": {"generators": [[1]]},
                                              "K": {"generators": [[1]]}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_cone_literal(R"({"rays": [[1]]})"), ConfigError);
    CHECK(parse_cone_literal(R"({"halfspaces": [[0, 1]]})").dim == 2);
    CHECK_THROWS_AS(load_vector_problem(data_path("vecopt/none.json")), ConfigError);
  }

  TEST_CASE("jimenez and isolmin agree on random instances") {
    const EquivalenceResult r = equivalence_suite(100, 7);
    CHECK(r.instances == 100);
    CHECK(r.agreements == 100);
    CHECK(r.disagreements.empty());
    CHECK(r.yes_count > 0);
    CHECK(r.yes_count < 100);
  }
}
