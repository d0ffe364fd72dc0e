#include "nsdiag/vecopt.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nsdiag/errors.hpp"
#include "nsdiag/expr.hpp"
#include "nsdiag/parallel.hpp"

namespace nsdiag {

void VectorProblem::validate() const {
  if (dim < 1 || n_objectives < 1 || n_constraints < 1) throw ConfigError(name + ": dimensions must be positive");
  if (!f || !g) throw ConfigError(name + ": f and g are required");
  if (C.dim != n_objectives) throw ConfigError(name + ": C must live in R^" + std::to_string(n_objectives));
  if (K.dim != n_constraints) throw ConfigError(name + ": K must live in R^" + std::to_string(n_constraints));
  if (domain_box.dim() != dim) throw ConfigError(name + ": domain box of wrong dimension");
  const PolyhedralCone Cc = complete(C);
  complete(K);
  Vector probe = Vector::Zero(n_objectives);
  for (const auto& gen : *Cc.generators)
    if (gen.norm() > 0) probe += gen / gen.norm();
  if (!interior_contains(Cc, probe)) throw ConfigError(name + ": C must have nonempty interior");
  if (candidate && candidate->size() != dim) throw ConfigError(name + ": candidate of wrong dimension");
}

namespace {

Vector eval_checked(const VectorMap& m, const Vector& x, int expect, const char* what) {
  Vector v = m(x);
  if (v.size() != expect) throw DomainError(std::string(what) + " returned a vector of wrong size");
  for (int i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) throw DomainError(std::string(what) + " is not finite at (" + format_vector(x) + ")");
  return v;
}

}  // namespace

bool feasible(const VectorProblem& p, const Vector& x) {
  return contains(p.K, -eval_checked(p.g, x, p.n_constraints, "g"));
}

std::optional<LinearFunctional> violated_constraint(const VectorProblem& p, const Vector& x) {
  return separate(p.K, -eval_checked(p.g, x, p.n_constraints, "g"));
}

Vector ScalarizedF::payoff(const Vector& x) const {
  const VectorProblem& p = *problem;
  Vector a(p.n_objectives + p.n_constraints);
  a.head(p.n_objectives) = eval_checked(p.f, x, p.n_objectives, "f") - fbar;
  a.tail(p.n_constraints) = eval_checked(p.g, x, p.n_constraints, "g");
  return a;
}

double ScalarizedF::operator()(const Vector& x) const { return sphere_max(lambda_cone, payoff(x)).first; }

ProperFunction ScalarizedF::as_function() const {
  ProperFunction F;
  F.name = "F[" + problem->name + "]";
  F.dim = problem->dim;
  F.domain_box = problem->domain_box;
  ScalarizedF self = *this;
  F.eval = [self](const Vector& x) { return ExtReal(self(x)); };
  return F;
}

ScalarizedF scalarize(const VectorProblem& p, const Vector& xbar) {
  p.validate();
  if (xbar.size() != p.dim) throw ConfigError(p.name + ": candidate of wrong dimension");
  if (!feasible(p, xbar)) throw PreconditionError(p.name + ": candidate (" + format_vector(xbar) + ") is infeasible");
  ScalarizedF F;
  F.problem = std::make_shared<const VectorProblem>(p);
  F.xbar = xbar;
  F.fbar = eval_checked(p.f, xbar, p.n_objectives, "f");
  F.lambda_cone = product(polar(p.C), polar(p.K));
  return F;
}

Verdict check_weak_min_necessary(const VectorProblem& p, const Vector& xbar, const DirectionSet& dirs,
                                 const SampleSchedule& s, const ClassifyOptions& opt) {
  const ProperFunction F = scalarize(p, xbar).as_function();
  Verdict v = check_necessary_local_min(F, xbar, dirs, s, opt);
  v.condition_id = "VecWeakMin";
  return v;
}

Verdict check_vector_isolated_order2(const VectorProblem& p, const Vector& xbar, const DirectionSet& dirs,
                                     const SampleSchedule& s, const ClassifyOptions& opt) {
  const ProperFunction F = scalarize(p, xbar).as_function();
  const Verdict b = check_isolated_order2(F, xbar, dirs, s, Thm2Variant::b, opt);
  const Verdict c = check_isolated_order2(F, xbar, dirs, s, Thm2Variant::c, opt);
  Verdict v;
  v.condition_id = "VecIso2";
  v.zero_band = opt.zero_band;
  if (b.outcome == Outcome::fail || c.outcome == Outcome::fail)
    v.outcome = Outcome::fail;
  else if (b.outcome == Outcome::pass && c.outcome == Outcome::pass)
    v.outcome = Outcome::pass;
  else
    v.outcome = Outcome::inconclusive;
  for (const Verdict* part : {&b, &c})
    for (const auto& w : part->witnesses) v.witnesses.push_back(w);
  v.note = "b: " + to_string(b.outcome) + ", c: " + to_string(c.outcome);
  return v;
}

std::string to_string(IsolationVariant v) {
  switch (v) {
    case IsolationVariant::jimenez: return "jimenez";
    case IsolationVariant::isolmin: return "isolmin";
    case IsolationVariant::lambda: return "lambda";
  }
  return "lambda";
}

IsolationVariant isolation_variant_from_string(const std::string& s) {
  for (auto v : {IsolationVariant::jimenez, IsolationVariant::isolmin, IsolationVariant::lambda})
    if (to_string(v) == s) return v;
  throw ConfigError("unknown isolation variant '" + s + "'");
}

OracleReport vector_isolated_oracle(const VectorProblem& p, const Vector& xbar, const GridSpec& grid, int k,
                                    IsolationVariant variant) {
  p.validate();
  grid.validate();
  if (k != 1 && k != 2) throw ConfigError("vector oracle: order k must be 1 or 2");
  if (!feasible(p, xbar)) throw PreconditionError(p.name + ": candidate (" + format_vector(xbar) + ") is infeasible");
  if (variant != IsolationVariant::lambda) {
    const PolyhedralCone O = PolyhedralCone::orthant(p.n_objectives);
    if (!cone_subset(p.C, O) || !cone_subset(O, p.C))
      throw ConfigError("vector oracle: the " + to_string(variant) + " variant needs C = R^n_+");
  }
  const Vector fbar = eval_checked(p.f, xbar, p.n_objectives, "f");
  const PolyhedralCone Cstar = polar(p.C);

  // Largest admissible A at one point; +inf marks points that do not count.
  auto margin = [&](const Vector& x) {
    const double d = (x - xbar).norm();
    if (d == 0.0 || !feasible(p, x)) return std::numeric_limits<double>::infinity();
    const Vector delta = eval_checked(p.f, x, p.n_objectives, "f") - fbar;
    double m = 0.0;
    switch (variant) {
      case IsolationVariant::jimenez: m = delta.cwiseMax(0.0).norm(); break;
      case IsolationVariant::isolmin: m = delta.maxCoeff(); break;
      case IsolationVariant::lambda: m = sphere_max(Cstar, delta).first; break;
    }
    return m / std::pow(d, k);
  };

  OracleReport rep;
  rep.kind = OracleKind::isolated_order2;
  rep.radii = grid.radii;
  Vector last_arg;
  for (std::size_t r = 0; r < grid.radii.size(); ++r) {
    const std::vector<Vector> pts = grid.points(r);
    std::vector<double> q(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { q[i] = margin(pts[i]); });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
      if (q[i] < q[arg]) arg = i;
    rep.C_estimates.push_back(q[arg]);
    last_arg = pts[arg];
  }
  rep.outcome = classify_growth_constants(rep.C_estimates);
  if (rep.outcome == OracleOutcome::no) rep.counterexample = last_arg;
  rep.note = to_string(variant) + " variant, order " + std::to_string(k);
  return rep;
}

namespace {

using nlohmann::json;

std::vector<Vector> vectors_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of vectors");
  std::vector<Vector> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty()) throw ConfigError(std::string(what) + " entries must be nonempty arrays");
    Vector v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i].is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
      v[static_cast<Eigen::Index>(i)] = row[i].get<double>();
    }
    out.push_back(v);
  }
  return out;
}

Vector vector_from_json(const json& j, const char* what) {
  auto vs = vectors_from_json(json::array({j}), what);
  return vs.front();
}

PolyhedralCone cone_from_json(const json& j, int dim, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": cone literal must be an object");
  const bool has_g = j.contains("generators"), has_h = j.contains("halfspaces");
  if (has_g == has_h) throw ConfigError(std::string(what) + ": give exactly one of generators, halfspaces");
  PolyhedralCone C = has_g ? PolyhedralCone::from_generators(vectors_from_json(j["generators"], what), dim)
                           : PolyhedralCone::from_halfspaces(vectors_from_json(j["halfspaces"], what), dim);
  return C;
}

VectorMap map_from_exprs(const json& j, int dim, const char* what, std::vector<std::string>& sources) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a nonempty array of expressions");
  std::vector<Expression> exprs;
  for (const auto& e : j) {
    if (!e.is_string()) throw ConfigError(std::string(what) + " entries must be strings");
    sources.push_back(e.get<std::string>());
    exprs.push_back(parse_expression(sources.back(), dim));
  }
  return [exprs](const Vector& x) {
    Vector v(static_cast<Eigen::Index>(exprs.size()));
    for (std::size_t i = 0; i < exprs.size(); ++i) v[static_cast<Eigen::Index>(i)] = exprs[i](x);
    return v;
  };
}

}  // namespace

PolyhedralCone parse_cone_literal(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cone literal: ") + e.what());
  }
  return cone_from_json(j, -1, "cone literal");
}

VectorProblem parse_vector_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("problem file: top level must be an object");
  for (const char* key : {"dim", "f", "g", "C", "K"})
    if (!j.contains(key)) throw ConfigError(std::string("problem file: missing '") + key + "'");
  VectorProblem p;
  p.name = j.value("name", std::string("VP"));
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) throw ConfigError("problem file: dim must be a positive integer");
  p.dim = j["dim"].get<int>();
  p.f = map_from_exprs(j["f"], p.dim, "f", p.f_source);
  p.g = map_from_exprs(j["g"], p.dim, "g", p.g_source);
  p.n_objectives = static_cast<int>(p.f_source.size());
  p.n_constraints = static_cast<int>(p.g_source.size());
  p.C = cone_from_json(j["C"], p.n_objectives, "C");
  p.K = cone_from_json(j["K"], p.n_constraints, "K");
  if (j.contains("box")) {
    const json& b = j["box"];
    if (!b.is_object() || !b.contains("lo") || !b.contains("hi")) throw ConfigError("problem file: box needs lo and hi");
    p.domain_box = Box{vector_from_json(b["lo"], "box.lo"), vector_from_json(b["hi"], "box.hi")};
  } else {
    p.domain_box = symmetric_box(p.dim, 1.0);
  }
  if (j.contains("candidate")) p.candidate = vector_from_json(j["candidate"], "candidate");
  p.validate();
  return p;
}

VectorProblem load_vector_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_vector_problem(ss.str());
}

VectorProblem random_biobjective(Rng& rng) {
  struct Piece {
    Eigen::Matrix2d Q;
    Eigen::Vector2d b;
  };
  std::array<std::array<Piece, 2>, 2> pieces;
  for (auto& comp : pieces)
    for (auto& pc : comp) {
      Eigen::Matrix2d A;
      A << rng.normal(), rng.normal(), rng.normal(), rng.normal();
      pc.Q = 0.5 * (A + A.transpose());
      pc.b.setZero();
      if (rng.uniform() < 0.25) pc.b << rng.normal(), rng.normal();
    }
  VectorProblem p;
  p.name = "RANDOM_BIOBJECTIVE";
  p.dim = 2;
  p.n_objectives = 2;
  p.n_constraints = 1;
  p.f = [pieces](const Vector& x) {
    Eigen::Vector2d y(x[0], x[1]);
    Vector v(2);
    for (int i = 0; i < 2; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& pc : pieces[i]) best = std::max(best, y.dot(pc.Q * y) + pc.b.dot(y));
      v[i] = best;
    }
    return v;
  };
  p.g = [](const Vector&) { return Vector::Constant(1, -1.0); };
  p.C = PolyhedralCone::orthant(2);
  p.K = PolyhedralCone::orthant(1);
  p.domain_box = symmetric_box(2, 1.0);
  p.candidate = Vector::Zero(2);
  return p;
}

EquivalenceResult equivalence_suite(int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("equivalence suite: n must be positive");
  EquivalenceResult res;
  for (int i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const VectorProblem p = random_biobjective(rng);
    const GridSpec grid = GridSpec::around(*p.candidate);
    const OracleReport a = vector_isolated_oracle(p, *p.candidate, grid, 2, IsolationVariant::jimenez);
    const OracleReport b = vector_isolated_oracle(p, *p.candidate, grid, 2, IsolationVariant::isolmin);
    ++res.instances;
    if (a.outcome == b.outcome) {
      ++res.agreements;
      if (a.outcome == OracleOutcome::yes) ++res.yes_count;
    } else {
      res.disagreements.push_back("instance " + std::to_string(i) + ": jimenez " + to_string(a.outcome) +
                                  ", isolmin " + to_string(b.outcome));
    }
  }
  return res;
}

}  // namespace nsdiag
