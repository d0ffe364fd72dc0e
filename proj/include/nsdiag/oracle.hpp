#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsdiag/function.hpp"

namespace nsdiag {

/// Cube grids of half-width r around `center`, one per radius.
struct GridSpec {
  Vector center;
  std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  int points_per_axis = 21;

  static GridSpec around(const Vector& center) {
    GridSpec g;
    g.center = center;
    return g;
  }
  void validate() const;
  /// Grid points of the cube with half-width radii[k] (center included).
  std::vector<Vector> points(std::size_t k) const;
};

enum class OracleKind { local_min, isolated_order2, global_min_box, strict_min };
enum class OracleOutcome { yes, no, undecided };

std::string to_string(OracleKind k);
std::string to_string(OracleOutcome o);
OracleKind oracle_kind_from_string(const std::string& s);
OracleOutcome oracle_outcome_from_string(const std::string& s);

struct OracleReport {
  OracleKind kind = OracleKind::local_min;
  OracleOutcome outcome = OracleOutcome::undecided;
  std::vector<double> radii;
  std::vector<double> C_estimates;  // isolated_order2 only
  std::optional<Vector> counterexample;
  std::optional<double> counterexample_value;
  std::string note;
};

/// NO when the smallest cube (plus witnesses) has a point below f(x) - 1e-12, or
/// when every cube has a point strictly below f(x); YES otherwise.
OracleReport local_min(const ProperFunction& f, const Vector& x, const GridSpec& grid, bool use_witnesses = true);

/// C(r) = min over the punctured cube (plus witnesses) of [f(y) - f(x)] / |y - x|^2.
/// YES when the last three C(r) exceed 1e-6 and are stable (within 20%) or
/// nondecreasing; NO when the last C(r) is <= 1e-6 or C halves per radius.
OracleReport isolated_order2(const ProperFunction& f, const Vector& x, const GridSpec& grid,
                             bool use_witnesses = true);

/// Rule used by isolated_order2 on a C(r) sequence; exposed for reuse.
OracleOutcome classify_growth_constants(const std::vector<double>& C);

/// Grid argmin over `box`; YES when f(query) attains it within 1e-12.
/// More than 1e6 grid points is a configuration error.
OracleReport global_min_box(const ProperFunction& f, const Box& box, int points_per_axis, const Vector& query);

/// All points of a points_per_axis^dim grid over `box`, in lexicographic order.
std::vector<Vector> box_grid(const Box& box, int points_per_axis, long long budget = 1000000);

}  // namespace nsdiag
