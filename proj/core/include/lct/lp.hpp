#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

namespace lct::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// lower may be -infinity (free or upper-bounded variable).
struct Bounds {
  double lower = 0.0;
  double upper = kInfinity;
};

/// maximize objective . x subject to constraints and bounds. An empty bounds
/// vector means every variable is >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<Bounds> bounds;

  std::size_t variable_count() const noexcept { return objective.size(); }
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status s) noexcept;

struct Tolerances {
  double feasibility = 1e-7;  // absolute, on max-norm scaled rows
  double optimality = 1e-9;   // reduced-cost threshold
  double pivot = 1e-11;       // smallest usable pivot element
  std::size_t max_iterations = 100000;
};

struct Solution {
  Status status = Status::Infeasible;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;  // optimal only
  /// Multipliers of the user constraints at the final basis (optimal only).
  /// For a maximisation they are >= 0 on <= rows, <= 0 on >= rows.
  std::vector<double> duals;
  /// Sum of artificial values left after phase 1; > 0 certifies infeasibility.
  double phase1_objective = 0.0;
  /// Improving direction in the original variables (unbounded only).
  std::vector<double> ray;
  std::size_t iterations = 0;
  /// Largest constraint or bound violation of `values` on max-norm scaled rows.
  double max_violation = 0.0;
};

/// Two-phase primal simplex on a dense tableau. Dantzig pricing, switching to
/// Bland's rule once 2 * (rows + columns) degenerate pivots have occurred.
/// Equality and >= rows get phase-1 artificials; rows are max-norm scaled.
/// Throws DimensionMismatch for malformed input and NumericalBreakdown when no
/// pivot above `tol.pivot` exists for any improving column.
/// `trace`, when given, receives a dump of every tableau.
Solution solve(const LinearProgram& lp, const Tolerances& tol = {}, std::ostream* trace = nullptr);

}  // namespace lct::lp
