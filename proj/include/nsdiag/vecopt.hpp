#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nsdiag/classify.hpp"
#include "nsdiag/cones.hpp"
#include "nsdiag/oracle.hpp"

namespace nsdiag {

using VectorMap = std::function<Vector(const Vector&)>;

/// C-minimize f(x) subject to g(x) in -K, x in R^dim.
struct VectorProblem {
  std::string name = "VP";
  int dim = 1;            // s
  int n_objectives = 1;   // n
  int n_constraints = 1;  // m
  VectorMap f;
  VectorMap g;
  PolyhedralCone C;  // ordering cone in R^n, nonempty interior
  PolyhedralCone K;  // constraint cone in R^m
  Box domain_box;
  std::optional<Vector> candidate;
  std::vector<std::string> f_source, g_source;  // expression text when loaded from a file

  /// Dimensions, cone budgets and int(C) nonempty (probe: sum of unit generators).
  void validate() const;
};

/// -g(x) in K.
bool feasible(const VectorProblem& p, const Vector& x);

/// The most violated halfspace of K at -g(x); none when feasible.
std::optional<LinearFunctional> violated_constraint(const VectorProblem& p, const Vector& x);

/// F(x) = max over unit (lambda, mu) in C* x K* of lambda.(f(x) - f(xbar)) + mu.g(x).
struct ScalarizedF {
  std::shared_ptr<const VectorProblem> problem;
  Vector xbar;
  Vector fbar;
  PolyhedralCone lambda_cone;  // polar(C) x polar(K)

  double operator()(const Vector& x) const;
  /// The payoff vector (f(x) - f(xbar), g(x)).
  Vector payoff(const Vector& x) const;
  ProperFunction as_function() const;
};

/// PreconditionError when xbar is infeasible.
ScalarizedF scalarize(const VectorProblem& p, const Vector& xbar);

/// Necessary conditions for a weak local minimizer, on the scalarization.
Verdict check_weak_min_necessary(const VectorProblem& p, const Vector& xbar, const DirectionSet& dirs,
                                 const SampleSchedule& s, const ClassifyOptions& opt = {});

/// Variants b and c of the isolated order-2 test on the scalarization. PASS iff
/// both pass, FAIL iff either fails.
Verdict check_vector_isolated_order2(const VectorProblem& p, const Vector& xbar, const DirectionSet& dirs,
                                     const SampleSchedule& s, const ClassifyOptions& opt = {});

enum class IsolationVariant { jimenez, isolmin, lambda };
std::string to_string(IsolationVariant v);
IsolationVariant isolation_variant_from_string(const std::string& s);

/// Grid search over feasible points for an isolated minimizer of order k:
///   jimenez: dist(f(xbar), f(x) + R^n_+) >= A |x - xbar|^k
///   isolmin: max_i f_i(x) - f_i(xbar) >= A |x - xbar|^k
///   lambda:  max over unit lambda in C* of lambda.(f(x) - f(xbar)) >= A |x - xbar|^k
/// The best A per radius is classified like oracle isolated_order2.
/// jimenez and isolmin require C = R^n_+.
OracleReport vector_isolated_oracle(const VectorProblem& p, const Vector& xbar, const GridSpec& grid, int k,
                                    IsolationVariant variant);

/// Problem file (JSON):
///   {"name": "...", "dim": 2, "f": ["x1^2", "x2^2"], "g": ["-1"],
///    "C": {"generators": [[1,0],[0,1]]}, "K": {"halfspaces": [[1]]},
///    "box": {"lo": [-1,-1], "hi": [1,1]}, "candidate": [0,0]}
VectorProblem parse_vector_problem(const std::string& json_text);
VectorProblem load_vector_problem(const std::string& path);

/// Cone literal {"generators": [...]} or {"halfspaces": [...]}.
PolyhedralCone parse_cone_literal(const std::string& json_text);

/// Outcome-level comparison of the jimenez and isolmin oracles (k = 2) on
/// seeded random bi-objective piecewise-quadratic instances.
struct EquivalenceResult {
  int instances = 0;
  int agreements = 0;
  int yes_count = 0;
  std::vector<std::string> disagreements;
};
EquivalenceResult equivalence_suite(int n, std::uint64_t seed);

/// The random instance used by the suite: f_i(x) = max of two quadratic forms
/// plus an optional linear term, C = R^2_+, g = -1, K = R_+, xbar = 0.
VectorProblem random_biobjective(Rng& rng);

}  // namespace nsdiag
