#include <doctest.h>

#include <cmath>
#include <string>

#include "nsdiag/corpus.hpp"
#include "nsdiag/errors.hpp"
#include "nsdiag/expr.hpp"
#include "nsdiag/oracle.hpp"
#include "support.hpp"

using namespace nsdiag;
using testing::vec;

namespace {

double ev(const std::string& text, const Vector& x) { return parse_expression(text, static_cast<int>(x.size()))(x); }

ParseError parse_error_of(const std::string& text, int dim = 2) {
  try {
    parse_expression(text, dim);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError for '" << text << "'");
  return ParseError("", 0, 0);
}

ParseError file_error_of(const std::string& text) {
  try {
    parse_function_text(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError for file text");
  return ParseError("", 0, 0);
}

std::string data_path(const std::string& rel) { return std::string(NSDIAG_SOURCE_DIR) + "/data/" + rel; }

}  // namespace

TEST_SUITE("funcspace") {
  TEST_CASE("precedence and associativity") {
    const Vector x = vec({2, 3});
    CHECK(ev("1 + 2 * 3", x) == 7.0);
    CHECK(ev("(1 + 2) * 3", x) == 9.0);
    CHECK(ev("2 ^ 3 ^ 2", x) == 512.0);
    CHECK(ev("-x1^2", x) == -4.0);
    CHECK(ev("x1^-1", x) == 0.5);
    CHECK(ev("8 / 2 / 2", x) == 2.0);
    CHECK(ev("10 - 3 - 2", x) == 5.0);
    CHECK(ev("x1*x2 - x2", x) == 3.0);
    CHECK(ev("1.5e1 + .5", x) == 15.5);
  }

  TEST_CASE("functions, conditionals and comparisons") {
    const Vector x = vec({-8, 4});
    CHECK(ev("abs(x1)", x) == 8.0);
    CHECK(ev("cbrt(x1)", x) == doctest::Approx(-2.0));
    CHECK(ev("sqrt(x2)", x) == 2.0);
    CHECK(ev("exp(0) + log(1)", x) == 1.0);
    CHECK(ev("if(x1 < 0, 1, 2)", x) == 1.0);
    CHECK(ev("if(x1 >= 0 or x2 = 4, 1, 2)", x) == 1.0);
    CHECK(ev("if(x1 <= -8 and x2 > 5, 1, 2)", x) == 2.0);
    CHECK(std::isinf(ev("if(x1 < 0, inf, 0)", x)));
  }

  TEST_CASE("parse errors carry line and column") {
    ParseError e = parse_error_of("x1 + * x2");
    CHECK(e.line() == 1);
    CHECK(e.column() == 6);
    e = parse_error_of("x3", 2);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("x1..x2") != std::string::npos);
    e = parse_error_of("foo(x1)");
    CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
    e = parse_error_of("(x1 + x2");
    CHECK(e.column() == 9);
    e = parse_error_of("x1 x2");
    CHECK(e.column() == 4);
    e = parse_error_of("x1 +", 2);
    CHECK(std::string(e.what()).find("unexpected end") != std::string::npos);
    // Offsets position the expression inside a file.
    try {
      parse_expression("x1 + ?", 2, 4, 6);
      FAIL("expected ParseError");
    } catch (const ParseError& pe) {
      CHECK(pe.line() == 4);
      CHECK(pe.column() == 12);
    }
  }

  TEST_CASE("NaN evaluation is a domain error") {
    const Expression e = parse_expression("sqrt(x1)", 1);
    CHECK(std::isnan(e(vec({-1}))));
    const ProperFunction f = function_from_expressions("ROOT", 1, e);
    CHECK_THROWS_AS(f(vec({-1})), DomainError);
    CHECK(f(vec({4})).value() == 2.0);
  }

  TEST_CASE("function text") {
    const ProperFunction f = parse_function_text(
        "# comment\n"
        "name: BOWL\n"
        "dim: 2\n"
        "\n"
        "expr: x1^2 + x2^2\n"
        "grad: 2*x1\n"
        "grad: 2*x2\n"
        "box: -2,3\n");
    CHECK(f.name == "BOWL");
    CHECK(f.dim == 2);
    CHECK(f(vec({1, 2})).value() == 5.0);
    REQUIRE(f.has_gradient());
    CHECK(f.gradient(vec({1, 2})) == vec({2, 4}));
    CHECK(f.domain_box.lo == vec({-2, -2}));
    CHECK(f.domain_box.hi == vec({3, 3}));

    const ProperFunction g = parse_function_text("dim: 1\nexpr: abs(x1)\n", "STEM");
    CHECK(g.name == "STEM");
    CHECK_FALSE(g.has_gradient());
    CHECK(g.domain_box.lo == vec({-1}));
  }

  TEST_CASE("function text errors") {
    CHECK(file_error_of("dim 2\nexpr: x1\n").line() == 1);
    CHECK(file_error_of("dim: 0\nexpr: x1\n").line() == 1);
    CHECK(file_error_of("dim: 1\ncolour: red\n").line() == 2);
    CHECK(file_error_of("dim: 1\nexpr: x1\nbox: 3\n").line() == 3);
    CHECK(std::string(file_error_of("expr: x1\n").what()).find("missing 'dim'") != std::string::npos);
    CHECK(std::string(file_error_of("dim: 1\n").what()).find("missing 'expr'") != std::string::npos);
    CHECK(std::string(file_error_of("dim: 2\nexpr: x1\ngrad: 1\n").what()).find("expected 2 grad") !=
          std::string::npos);
    // Column of an expression error is relative to the whole line.
    const ParseError e = file_error_of("dim: 1\nexpr: x1 + @\n");
    CHECK(e.line() == 2);
    CHECK(e.column() == 12);
  }

  TEST_CASE("shipped function files") {
    const ProperFunction a = load_function_file(data_path("functions/abs_sum.fn"));
    CHECK(a.name == "ABS_SUM");
    CHECK(a(vec({-0.5, 0.5})).value() == 0.75);

    const ProperFunction b = load_function_file(data_path("functions/smooth_bowl.fn"));
    CHECK(b.name == "SMOOTH_BOWL");
    REQUIRE(b.has_gradient());
    CHECK(check_gradient(b).ok);
    CHECK_THROWS_AS(load_function_file(data_path("functions/missing.fn")), ConfigError);
  }

  TEST_CASE("witness points stay inside the ball") {
    const ProperFunction f = make_ex1();
    const Vector o = vec({0, 0});
    const auto pts = witness_points(f, o, 1e-2);
    CHECK_FALSE(pts.empty());
    for (const Vector& p : pts) {
      CHECK(p.norm() <= 1e-2 + 1e-15);
      CHECK(p.norm() > 0.0);
    }
    CHECK(witness_points(make_sqnorm(), o, 1e-2).empty());
  }

  TEST_CASE("difference quotients") {
    const ProperFunction f = make_sqnorm();
    const Vector x = vec({1, 0});
    const Quotient q1 = eval_quotient1(f, x);
    CHECK(q1(0.5, vec({1, 0})).value() == doctest::Approx(2.5));
    const Quotient q2 = eval_quotient2(f, x, vec({2, 0}));
    CHECK(q2(0.1, vec({0, 1})).value() == doctest::Approx(2.0));
    CHECK(q2(0.1, vec({1, 0})).value() == doctest::Approx(2.0));
  }

  TEST_CASE("point parsing") {
    CHECK(parse_point("1, -2.5,3") == vec({1, -2.5, 3}));
    CHECK_THROWS_AS(parse_point("1,,2"), ConfigError);
    CHECK_THROWS_AS(parse_point("a"), ConfigError);
  }
}
