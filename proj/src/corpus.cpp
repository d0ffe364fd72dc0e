#include "nsdiag/corpus.hpp"

#include <cmath>
#include <numbers>

namespace nsdiag {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Expectation value_of(ExpectKind kind, Vector dir, double value, double tol, std::string basis) {
  Expectation e;
  e.kind = kind;
  e.direction = std::move(dir);
  e.value = value;
  e.tolerance = tol;
  e.basis = std::move(basis);
  return e;
}

Expectation trend_of(ExpectKind kind, Vector dir, Trend trend, std::string basis) {
  Expectation e;
  e.kind = kind;
  e.direction = std::move(dir);
  e.trend = trend;
  e.basis = std::move(basis);
  return e;
}

Expectation verdict(std::string check, std::string outcome, std::string basis) {
  Expectation e;
  e.kind = ExpectKind::verdict;
  e.check = std::move(check);
  e.outcome = std::move(outcome);
  e.basis = std::move(basis);
  return e;
}

Expectation oracle(std::string check, std::string outcome, std::string basis) {
  Expectation e = verdict(std::move(check), std::move(outcome), std::move(basis));
  e.kind = ExpectKind::oracle;
  return e;
}

ProperFunction base(std::string name, int dim) {
  ProperFunction f;
  f.name = std::move(name);
  f.dim = dim;
  f.domain_box = symmetric_box(dim, 1.0);
  return f;
}

}  // namespace

std::string Expectation::label() const {
  switch (kind) {
    case ExpectKind::dini1: return "dini1 u=(" + format_vector(direction) + ")";
    case ExpectKind::dini2: return "dini2 u=(" + format_vector(direction) + ")";
    case ExpectKind::hadamard1: return "hadamard1 u=(" + format_vector(direction) + ")";
    case ExpectKind::hadamard2: return "hadamard2 x1*=0 u=(" + format_vector(direction) + ")";
    case ExpectKind::ginchev2: return "ginchev2 u=(" + format_vector(direction) + ")";
    case ExpectKind::growth2: return "f(tv)/t^2 v=(" + format_vector(direction) + ")";
    case ExpectKind::verdict: return "verdict " + check;
    case ExpectKind::oracle: return "oracle " + check;
  }
  return "?";
}

ProperFunction make_neg_quad() {
  ProperFunction f = base("NEG_QUAD", 2);
  f.eval = [](const Vector& x) { return ExtReal(-x.squaredNorm()); };
  f.gradient = [](const Vector& x) -> Vector { return -2.0 * x; };
  return f;
}

ProperFunction make_ex1() {
  ProperFunction f = base("EX1", 2);
  f.eval = [](const Vector& x) {
    double x1 = x[0];
    double w = x[1] - std::cbrt(x1 * x1 * x1 * x1);
    return ExtReal(std::pow(std::abs(w), 1.5));
  };
  f.gradient = [](const Vector& x) -> Vector {
    double x1 = x[0];
    double w = x[1] - std::cbrt(x1 * x1 * x1 * x1);
    double dw = 1.5 * std::sqrt(std::abs(w)) * (w > 0 ? 1.0 : (w < 0 ? -1.0 : 0.0));
    Vector g(2);
    g[0] = -dw * (4.0 / 3.0) * std::cbrt(x1);
    g[1] = dw;
    return g;
  };
  // Points (s, s^(4/3)) on the zero curve, approached along (+-1, 0).
  for (double sign : {1.0, -1.0}) {
    WitnessEntry w;
    w.point = Vector::Zero(2);
    w.direction = vec({sign, 0.0});
    w.generator = [sign](double t_max) {
      std::vector<Sample> out;
      for (int i = 0; i < 60; ++i) {
        double s = 0.99 * t_max * std::ldexp(1.0, -i);
        Vector y = vec({sign * s, std::cbrt(s * s * s * s)});
        double t = y.norm();
        if (t <= t_max) out.push_back({t, y / t});
      }
      return out;
    };
    f.witnesses.push_back(std::move(w));
  }
  return f;
}

ProperFunction make_parabola_trap() {
  ProperFunction f = base("PARABOLA_TRAP", 2);
  f.eval = [](const Vector& x) {
    double sq = x[0] * x[0];
    bool on_curve = x[0] > 0 && std::abs(x[1] - sq) <= 1e-12 * std::max(std::abs(x[1]), sq);
    return ExtReal(on_curve ? -(sq + x[1] * x[1]) : 0.0);
  };
  // t_k = 1/k, u'_k = (1, t_k): x + t_k u'_k = (t_k, t_k^2) lies on the curve.
  WitnessEntry w;
  w.point = Vector::Zero(2);
  w.direction = vec({1.0, 0.0});
  w.generator = [](double t_max) {
    std::vector<Sample> out;
    double k0 = std::ceil(1.0 / t_max);
    for (int i = 0; i < 60; ++i) {
      double t = 1.0 / (k0 * std::ldexp(1.0, i));
      out.push_back({t, vec({1.0, t})});
    }
    return out;
  };
  f.witnesses.push_back(std::move(w));
  return f;
}

ProperFunction make_sqnorm(int dim) {
  ProperFunction f = base("SQNORM", dim);
  f.eval = [](const Vector& x) { return ExtReal(x.squaredNorm()); };
  f.gradient = [](const Vector& x) -> Vector { return 2.0 * x; };
  return f;
}

ProperFunction make_quartic(int dim) {
  ProperFunction f = base("QUARTIC", dim);
  f.eval = [](const Vector& x) {
    double s = x.squaredNorm();
    return ExtReal(s * s);
  };
  f.gradient = [](const Vector& x) -> Vector { return 4.0 * x.squaredNorm() * x; };
  return f;
}

ProperFunction make_cube1d() {
  ProperFunction f = base("CUBE1D", 1);
  f.eval = [](const Vector& x) { return ExtReal(x[0] * x[0] * x[0]); };
  f.gradient = [](const Vector& x) -> Vector { return Vector::Constant(1, 3.0 * x[0] * x[0]); };
  return f;
}

ProperFunction make_abs1d() {
  ProperFunction f = base("ABS1D", 1);
  f.eval = [](const Vector& x) { return ExtReal(std::abs(x[0])); };
  return f;
}

ProperFunction make_half1d() {
  ProperFunction f = base("HALF1D", 1);
  f.eval = [](const Vector& x) { return ExtReal(x[0] >= 0.0 ? x[0] : inf); };
  return f;
}

ProperFunction make_linear(const Vector& a) {
  ProperFunction f = base("LINEAR", static_cast<int>(a.size()));
  f.eval = [a](const Vector& x) { return ExtReal(a.dot(x)); };
  f.gradient = [a](const Vector&) -> Vector { return a; };
  return f;
}

ProperFunction make_quadratic(const Eigen::MatrixXd& Q) {
  Eigen::MatrixXd S = 0.5 * (Q + Q.transpose());
  ProperFunction f = base("QUADRATIC", static_cast<int>(S.rows()));
  f.eval = [S](const Vector& x) { return ExtReal(0.5 * x.dot(S * x)); };
  f.gradient = [S](const Vector& x) -> Vector { return S * x; };
  return f;
}

ProperFunction make_shifted(const ProperFunction& f, const Vector& shift) {
  ProperFunction g = f;
  g.name = f.name + "_SHIFTED";
  g.eval = [f, shift](const Vector& x) { return f.eval(x - shift); };
  if (f.gradient) g.gradient = [f, shift](const Vector& x) -> Vector { return f.gradient(x - shift); };
  g.domain_box = {f.domain_box.lo + shift, f.domain_box.hi + shift};
  g.witnesses.clear();
  for (auto w : f.witnesses) {
    w.point += shift;
    g.witnesses.push_back(std::move(w));
  }
  return g;
}

std::vector<CorpusEntry> corpus() {
  const double r = std::numbers::sqrt2 / 2;
  std::vector<CorpusEntry> out;

  {
    CorpusEntry e{make_neg_quad(), Vector::Zero(2), {}};
    e.expected.push_back(value_of(ExpectKind::hadamard1, vec({1, 0}), 0.0, 1e-6, "gradient formula at the origin"));
    for (int k = 0; k < 16; ++k) {
      double a = 2 * std::numbers::pi * k / 16;
      e.expected.push_back(value_of(ExpectKind::hadamard2, vec({std::cos(a), std::sin(a)}), -2.0, 1e-3,
                                    "stated second derivative -2|u|^2"));
    }
    e.expected.push_back(verdict("Thm1", "FAIL", "stated: origin is not a minimizer"));
    e.expected.push_back(verdict("Thm1-Dini", "FAIL", "stated: origin is not a minimizer"));
    e.expected.push_back(verdict("Thm2-b", "FAIL", "oracle: not a minimizer"));
    e.expected.push_back(verdict("Thm2-c", "FAIL", "oracle: not a minimizer"));
    e.expected.push_back(verdict("2Stat", "FAIL", "stated: no 2-stationary points"));
    e.expected.push_back(verdict("SPC-Dini", "FAIL", "algebra: quotient -|u|^2"));
    e.expected.push_back(verdict("2Invex", "PASS", "stated: second-order invex, vacuously"));
    e.expected.push_back(oracle("local_min", "NO", "direct evaluation"));
    e.expected.push_back(oracle("isolated_order2", "NO", "direct evaluation"));
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{make_ex1(), Vector::Zero(2), {}};
    e.expected.push_back(value_of(ExpectKind::growth2, vec({1, 0}), 1.0, 1e-9, "stated limit 1, exact t^2 on the axis"));
    e.expected.push_back(value_of(ExpectKind::growth2, vec({-1, 0}), 1.0, 1e-9, "stated limit 1, exact t^2 on the axis"));
    e.expected.push_back(trend_of(ExpectKind::growth2, vec({0, 1}), Trend::diverging_plus_inf, "stated: +inf for v2 != 0"));
    e.expected.push_back(trend_of(ExpectKind::growth2, vec({0, -1}), Trend::diverging_plus_inf, "stated: +inf for v2 != 0"));
    e.expected.push_back(trend_of(ExpectKind::growth2, vec({r, r}), Trend::diverging_plus_inf, "stated: +inf for v2 != 0"));
    e.expected.push_back(trend_of(ExpectKind::growth2, vec({r, -r}), Trend::diverging_plus_inf, "stated: +inf for v2 != 0"));
    e.expected.push_back(value_of(ExpectKind::dini2, vec({1, 0}), 2.0, 1e-3, "twice the stated growth limit"));
    e.expected.push_back(verdict("Thm1", "PASS", "stated: global minimizer"));
    e.expected.push_back(verdict("Thm2-b", "FAIL", "stated: not isolated of order two"));
    e.expected.push_back(verdict("Thm2-c", "FAIL", "stated: not isolated of order two"));
    e.expected.push_back(verdict("SPC-Dini", "PASS", "stated: strongly pseudoconvex"));
    e.expected.push_back(verdict("LStab", "FAIL", "stated: not l-stable"));
    e.expected.push_back(verdict("Thm5", "PRECONDITION_NOT_MET", "curve direction breaks the Hadamard growth bound"));
    e.expected.push_back(oracle("local_min", "YES", "stated: f >= 0"));
    e.expected.push_back(oracle("isolated_order2", "NO", "stated: f = 0 on the curve"));
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{make_parabola_trap(), Vector::Zero(2), {}};
    e.expected.push_back(value_of(ExpectKind::hadamard1, vec({1, 0}), 0.0, 1e-6, "stated: ld1 = 0 for every direction"));
    e.expected.push_back(value_of(ExpectKind::hadamard1, vec({0, 1}), 0.0, 1e-6, "stated: ld1 = 0 for every direction"));
    e.expected.push_back(value_of(ExpectKind::hadamard2, vec({1, 0}), -2.0, 1e-3, "stated: ld2 = -2 along (1,0)"));
    for (const Vector& u : {vec({1, 0}), vec({0, 1}), vec({r, r})}) {
      e.expected.push_back(value_of(ExpectKind::dini1, u, 0.0, 1e-6, "stated: Dini derivatives vanish"));
      e.expected.push_back(value_of(ExpectKind::dini2, u, 0.0, 1e-6, "stated: Dini derivatives vanish"));
    }
    e.expected.push_back(verdict("Thm1", "FAIL", "stated: detected by the Hadamard conditions"));
    e.expected.push_back(verdict("Thm1-Dini", "PASS", "stated: Dini conditions cannot detect"));
    e.expected.push_back(verdict("Thm2-b", "FAIL", "stated: not a minimizer"));
    e.expected.push_back(verdict("Thm2-c", "FAIL", "stated: not a minimizer"));
    e.expected.push_back(oracle("local_min", "NO", "stated: not a local minimizer"));
    e.expected.push_back(oracle("isolated_order2", "NO", "stated: not a local minimizer"));
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{make_sqnorm(), Vector::Zero(2), {}};
    e.expected.push_back(value_of(ExpectKind::hadamard1, vec({1, 0}), 0.0, 1e-6, "smooth stationary point"));
    e.expected.push_back(value_of(ExpectKind::hadamard2, vec({1, 0}), 2.0, 1e-3, "Hessian form 2|u|^2"));
    e.expected.push_back(value_of(ExpectKind::dini2, vec({r, r}), 2.0, 1e-3, "Hessian form 2|u|^2"));
    e.expected.push_back(value_of(ExpectKind::ginchev2, vec({1, 0}), 2.0, 1e-3, "zero gradient: Hessian form"));
    for (const char* c : {"Thm1", "Thm1-Dini", "Thm2-b", "Thm2-c", "2Stat", "SPC-Dini", "LStab", "Thm5", "2Invex"})
      e.expected.push_back(verdict(c, "PASS", "global strict minimizer"));
    e.expected.push_back(oracle("local_min", "YES", "f(y) - f(0) = |y|^2"));
    e.expected.push_back(oracle("isolated_order2", "YES", "f(y) - f(0) = |y|^2"));
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{make_quartic(), Vector::Zero(2), {}};
    e.expected.push_back(value_of(ExpectKind::hadamard2, vec({1, 0}), 0.0, 1e-6, "quotient 2t^2|u'|^4"));
    e.expected.push_back(verdict("Thm1", "PASS", "global minimizer"));
    e.expected.push_back(verdict("2Stat", "PASS", "global minimizer"));
    e.expected.push_back(verdict("Thm2-b", "FAIL", "oracle: C(r) = r^2 -> 0"));
    e.expected.push_back(verdict("Thm2-c", "FAIL", "oracle: C(r) = r^2 -> 0"));
    e.expected.push_back(oracle("local_min", "YES", "f >= 0"));
    e.expected.push_back(oracle("isolated_order2", "NO", "C(r) = r^2 -> 0"));
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{make_cube1d(), Vector::Zero(1), {}};
    e.expected.push_back(value_of(ExpectKind::ginchev2, vec({1}), 0.0, 1e-6, "quotient 2t u'^3"));
    e.expected.push_back(value_of(ExpectKind::ginchev2, vec({-1}), 0.0, 1e-6, "quotient 2t u'^3"));
    e.expected.push_back(verdict("2Stat", "PASS", "ld1 = ld2 = 0"));
    e.expected.push_back(verdict("Thm2-b", "FAIL", "not a minimizer"));
    e.expected.push_back(verdict("Thm2-c", "FAIL", "not a minimizer"));
    e.expected.push_back(verdict("2Invex", "FAIL", "f(-1) = -1 < f(0)"));
    e.expected.push_back(oracle("local_min", "NO", "f(-r) < 0"));
    e.expected.push_back(oracle("isolated_order2", "NO", "f(-r) < 0"));
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{make_abs1d(), Vector::Zero(1), {}};
    e.expected.push_back(value_of(ExpectKind::hadamard1, vec({1}), 1.0, 1e-6, "|u|"));
    e.expected.push_back(value_of(ExpectKind::hadamard1, vec({-1}), 1.0, 1e-6, "|u|"));
    for (const char* c : {"Thm1", "Thm2-b", "Thm2-c"}) e.expected.push_back(verdict(c, "PASS", "sharp minimizer"));
    e.expected.push_back(verdict("LStab", "FAIL", "Dini jump of 2 at distance r"));
    e.expected.push_back(oracle("local_min", "YES", "f >= 0"));
    e.expected.push_back(oracle("isolated_order2", "YES", "C(r) = 1/r"));
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{make_half1d(), Vector::Zero(1), {}};
    e.expected.push_back(value_of(ExpectKind::hadamard1, vec({1}), 1.0, 1e-6, "slope 1 inside the domain"));
    e.expected.push_back(trend_of(ExpectKind::hadamard1, vec({-1}), Trend::diverging_plus_inf, "every sample leaves the domain"));
    for (const char* c : {"Thm1", "Thm2-b", "Thm2-c"}) e.expected.push_back(verdict(c, "PASS", "sharp minimizer"));
    e.expected.push_back(oracle("local_min", "YES", "f >= 0"));
    e.expected.push_back(oracle("isolated_order2", "YES", "C(r) = 1/r"));
    out.push_back(std::move(e));
  }
  return out;
}

CorpusEntry corpus_entry(const std::string& name) {
  for (auto& e : corpus())
    if (e.function.name == name) return e;
  throw ConfigError("unknown corpus entry '" + name + "'");
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& e : corpus()) out.push_back(e.function.name);
  return out;
}

}  // namespace nsdiag
