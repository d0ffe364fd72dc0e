#include <doctest.h>

#include <cmath>

#include "nsdiag/cones.hpp"
#include "nsdiag/errors.hpp"
#include "support.hpp"

using namespace nsdiag;
using testing::vec;

namespace {

bool same_cone(const PolyhedralCone& a, const PolyhedralCone& b) { return cone_subset(a, b) && cone_subset(b, a); }

PolyhedralCone upper_halfplane() { return PolyhedralCone::from_generators({vec({1, 0}), vec({-1, 0}), vec({0, 1})}); }
PolyhedralCone diagonal_ray() { return PolyhedralCone::from_generators({vec({1, 1})}); }

Vector gaussian(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

TEST_SUITE("cones") {
  TEST_CASE("polar examples") {
    const PolyhedralCone o = PolyhedralCone::orthant(2);
    CHECK(same_cone(polar(o), o));
    CHECK(same_cone(polar(upper_halfplane()), PolyhedralCone::from_generators({vec({0, 1})})));
    const PolyhedralCone pr = polar(diagonal_ray());
    CHECK(same_cone(pr, PolyhedralCone::from_halfspaces({vec({1, 1})})));
    CHECK(contains(pr, vec({1, -1})));
    CHECK_FALSE(contains(pr, vec({-1, -0.5})));
    CHECK(same_cone(polar(PolyhedralCone::zero(3)), PolyhedralCone::whole(3)));
    CHECK(same_cone(polar(PolyhedralCone::whole(2)), PolyhedralCone::zero(2)));
  }

  TEST_CASE("double polar examples") {
    CHECK(double_polar_check(PolyhedralCone::orthant(2)));
    CHECK(double_polar_check(upper_halfplane()));
    CHECK(double_polar_check(diagonal_ray()));
  }

  TEST_CASE("double description of simple systems") {
    const DualDescription quadrant = dual_description(2, {vec({1, 0}), vec({0, 1})});
    CHECK(quadrant.pointed());
    CHECK(quadrant.rays.size() == 2u);
    const DualDescription half = dual_description(2, {vec({0, 1})});
    CHECK(half.rays.size() == 1u);
    CHECK(half.lineality.size() == 1u);
    CHECK(half.generators().size() == 3u);
    const DualDescription line = dual_description(2, {vec({1, 0}), vec({-1, 0})});
    CHECK(line.rays.empty());
    CHECK(line.lineality.size() == 1u);
    CHECK(std::abs(line.lineality[0][0]) < 1e-12);
    const DualDescription all = dual_description(3, {});
    CHECK(all.lineality.size() == 3u);
  }

  TEST_CASE("membership and interior") {
    const PolyhedralCone o = PolyhedralCone::orthant(2);
    CHECK(interior_contains(o, vec({1, 1})));
    CHECK(contains(o, vec({1, 0})));
    CHECK_FALSE(interior_contains(o, vec({1, 0})));
    CHECK(contains(diagonal_ray(), vec({1, 1})));
    CHECK_FALSE(interior_contains(diagonal_ray(), vec({1, 1})));
    CHECK_FALSE(contains(diagonal_ray(), vec({1, 1.1})));
    // A redundant halfspace must not spoil the strict test.
    const PolyhedralCone red = PolyhedralCone::from_halfspaces({vec({1, 0}), vec({0, 1}), vec({1, 1})});
    CHECK(interior_contains(red, vec({1, 1})));
    CHECK(interior_contains(PolyhedralCone::whole(2), vec({0, 0})));
  }

  TEST_CASE("separation examples") {
    const auto a = separate(PolyhedralCone::orthant(2), vec({-1, 1}));
    REQUIRE(a);
    CHECK(a->coeffs == vec({1, 0}));
    CHECK((*a)(vec({-1, 1})) == -1.0);
    CHECK_FALSE(separate(PolyhedralCone::orthant(2), vec({1, 1})));
    const auto b = separate(upper_halfplane(), vec({0, -1}));
    REQUIRE(b);
    CHECK(b->coeffs.isApprox(vec({0, 1})));
    CHECK((*b)(vec({0, -1})) == doctest::Approx(-1.0));
  }

  TEST_CASE("projection examples") {
    const PolyhedralCone o = PolyhedralCone::orthant(2);
    CHECK(project(o, vec({1, -2})).isApprox(vec({1, 0})));
    CHECK(project(o, vec({1, 1})).isApprox(vec({1, 1})));
    CHECK(project(PolyhedralCone::from_generators({vec({1, 0})}), vec({3, 4})).isApprox(vec({3, 0})));
    CHECK(project(o, vec({-1, -1})).norm() < 1e-15);
  }

  TEST_CASE("sphere_max examples") {
    const PolyhedralCone o = PolyhedralCone::orthant(2);
    auto [v1, y1] = sphere_max(o, vec({1, 1}));
    CHECK(v1 == doctest::Approx(std::sqrt(2.0)));
    CHECK(y1.isApprox(vec({1, 1}) / std::sqrt(2.0)));
    auto [v2, y2] = sphere_max(o, vec({-1, -1}));
    CHECK(v2 == doctest::Approx(-1.0));
    CHECK((y2.isApprox(vec({1, 0})) || y2.isApprox(vec({0, 1}))));
    auto [v3, y3] = sphere_max(o, vec({1, -2}));
    CHECK(v3 == doctest::Approx(1.0));
    CHECK(y3.isApprox(vec({1, 0})));
    CHECK_THROWS_AS(sphere_max(PolyhedralCone::zero(2), vec({1, 0})), DomainError);
  }

  TEST_CASE("budgets") {
    std::vector<Vector> many;
    for (int i = 0; i < 17; ++i) many.push_back(vec({std::cos(0.1 * i), std::sin(0.1 * i), 1.0}));
    CHECK_THROWS_AS(polar(PolyhedralCone::from_generators(many)), ConfigError);
    CHECK_THROWS_AS(polar(PolyhedralCone::orthant(5)), ConfigError);
  }

  TEST_CASE("double polar on random cones") {
    Rng rng(101);
    for (int k = 0; k < 50; ++k) {
      const int dim = 2 + k % 3;
      const int n = 1 + static_cast<int>(rng.uniform() * 8);
      const PolyhedralCone C = random_cone(rng, dim, n);
      CAPTURE(k);
      CHECK(double_polar_check(C));
      CHECK(representations_agree(complete(C)));
      CHECK(representations_agree(polar(C)));
    }
  }

  TEST_CASE("polarity reverses inclusion") {
    Rng rng(55);
    for (int k = 0; k < 20; ++k) {
      const int dim = 2 + k % 3;
      const PolyhedralCone D = random_cone(rng, dim, 3 + k % 4);
      std::vector<Vector> inner;
      for (int j = 0; j < 3; ++j) {
        Vector c = Vector::Zero(dim);
        for (const Vector& g : *D.generators) c += rng.uniform() * g;
        inner.push_back(c);
      }
      const PolyhedralCone C = PolyhedralCone::from_generators(inner);
      REQUIRE(cone_subset(C, D));
      CHECK(cone_subset(polar(D), polar(C)));
    }
  }

  TEST_CASE("projection is idempotent and nonexpansive") {
    Rng rng(77);
    for (int k = 0; k < 30; ++k) {
      const int dim = 2 + k % 3;
      const PolyhedralCone C = random_cone(rng, dim, 2 + k % 5);
      const Vector a = gaussian(rng, dim), b = gaussian(rng, dim);
      const Vector pa = project(C, a), pb = project(C, b);
      CHECK(contains(C, pa, 1e-9));
      CHECK((project(C, pa) - pa).norm() <= 1e-9);
      CHECK((pa - pb).norm() <= (a - b).norm() + 1e-9);
      // Optimality: the residual is orthogonal to p and lies in -C*.
      CHECK(std::abs((a - pa).dot(pa)) <= 1e-9);
      for (const Vector& g : *C.generators) CHECK((a - pa).dot(g) <= 1e-9);
    }
  }

  TEST_CASE("separation soundness") {
    Rng rng(31);
    int separated = 0;
    for (int k = 0; k < 40; ++k) {
      const int dim = 2 + k % 3;
      const PolyhedralCone C = random_cone(rng, dim, 2 + k % 4);
      const Vector x = gaussian(rng, dim);
      const auto l = separate(C, x);
      if (contains(C, x)) {
        CHECK_FALSE(l);
        continue;
      }
      REQUIRE(l);
      ++separated;
      CHECK((*l)(x) < 0.0);
      for (const Vector& g : *C.generators) CHECK((*l)(g) >= -1e-12);
    }
    CHECK(separated > 10);
  }

  TEST_CASE("sphere_max dominates every generator and matches dense sampling") {
    Rng rng(8);
    Rng oracle_rng(9);
    for (int k = 0; k < 20; ++k) {
      const int dim = 2 + k % 3;
      const PolyhedralCone C = random_cone(rng, dim, 1 + k % 6);
      const Vector a = gaussian(rng, dim);
      const auto [value, arg] = sphere_max(C, a);
      CAPTURE(k);
      CHECK(arg.norm() == doctest::Approx(1.0));
      CHECK(contains(C, arg, 1e-9));
      CHECK(a.dot(arg) == doctest::Approx(value));
      for (const Vector& g : *C.generators) CHECK(value >= a.dot(g.normalized()) - 1e-12);
      const double dense = testing::dense_sphere_max(*C.generators, a, 10000, oracle_rng);
      CHECK(std::abs(value - dense) <= 1e-6);
    }
  }

  TEST_CASE("product cones") {
    const PolyhedralCone p = product(PolyhedralCone::orthant(2), diagonal_ray());
    CHECK(p.dim == 4);
    CHECK(contains(p, vec({1, 2, 3, 3})));
    CHECK_FALSE(contains(p, vec({1, 2, 3, 2})));
    CHECK(same_cone(polar(p), product(PolyhedralCone::orthant(2), polar(diagonal_ray()))));
  }
}
