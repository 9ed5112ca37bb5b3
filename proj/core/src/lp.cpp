#include "lct/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "lct/error.hpp"

namespace lct::lp {
namespace {

constexpr const char* kModule = "lp_core";

// x_original = shift + sign * x[pos] - x[neg]
struct VariableMap {
  std::size_t pos = 0;
  std::optional<std::size_t> neg;
  double shift = 0.0;
  double sign = 1.0;
};

enum class ColumnKind { Structural, Slack, Artificial };

struct Row {
  std::vector<double> coefficients;  // over transformed structural variables
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::optional<std::size_t> source;  // index of the user constraint
  double dual_factor = 1.0;           // user dual = internal dual * dual_factor
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  // Row `rows_` holds reduced costs; its rhs slot holds -objective.
  double& cost(std::size_t c) { return at(rows_, c); }
  double cost(std::size_t c) const { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t q) {
    const double p = at(r, q);
    for (std::size_t c = 0; c <= cols_; ++c) at(r, c) /= p;
    at(r, q) = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, q);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(i, c) -= f * at(r, c);
      at(i, q) = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

struct Simplex {
  Tableau t;
  std::vector<std::size_t> basis;
  std::vector<ColumnKind> kinds;
  const Tolerances& tol;
  std::ostream* trace;
  std::size_t iterations = 0;

  void price(const std::vector<double>& costs) {
    for (std::size_t c = 0; c < t.cols(); ++c) t.cost(c) = costs[c];
    t.rhs(t.rows()) = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double cb = costs[basis[r]];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c <= t.cols(); ++c) t.at(t.rows(), c) -= cb * t.at(r, c);
    }
  }

  void dump(std::string_view phase, std::optional<std::size_t> entering, std::optional<std::size_t> leaving) const {
    if (!trace) return;
    auto& os = *trace;
    os << "# " << phase << " iteration " << iterations;
    if (entering) os << " entering " << *entering;
    if (leaving) os << " leaving-row " << *leaving;
    os << '\n' << std::setprecision(6);
    for (std::size_t r = 0; r <= t.rows(); ++r) {
      os << (r < t.rows() ? "x" + std::to_string(basis[r]) : std::string("obj")) << '\t';
      for (std::size_t c = 0; c <= t.cols(); ++c) os << std::setw(12) << t.at(r, c);
      os << '\n';
    }
  }

  enum class Outcome { Optimal, Unbounded };

  // Runs primal simplex iterations on the current reduced-cost row.
  // On Unbounded, `ray_column` is the entering column with no blocking row.
  Outcome run(std::string_view phase, bool allow_artificial, std::size_t& ray_column) {
    const std::size_t bland_after = 2 * (t.rows() + t.cols());
    std::size_t degenerate = 0;
    std::vector<bool> skip(t.cols(), false);
    dump(phase, std::nullopt, std::nullopt);
    while (true) {
      if (++iterations > tol.max_iterations) {
        fail(ErrorCode::NumericalBreakdown, kModule, "iteration limit reached");
      }
      const bool bland = degenerate > bland_after;
      std::fill(skip.begin(), skip.end(), false);
      bool tiny_pivot_seen = false;
      while (true) {
        std::optional<std::size_t> q;
        for (std::size_t c = 0; c < t.cols(); ++c) {
          if (skip[c] || (!allow_artificial && kinds[c] == ColumnKind::Artificial)) continue;
          if (t.cost(c) <= tol.optimality) continue;
          if (!q || (!bland && t.cost(c) > t.cost(*q))) q = c;
          if (bland) break;
        }
        if (!q) {
          if (tiny_pivot_seen) {
            fail(ErrorCode::NumericalBreakdown, kModule,
                 "improving columns exist but every pivot element is below the pivot tolerance");
          }
          return Outcome::Optimal;
        }

        std::optional<std::size_t> leave;
        double best_ratio = 0.0;
        bool any_positive = false;
        for (std::size_t r = 0; r < t.rows(); ++r) {
          const double a = t.at(r, *q);
          if (a <= 0.0) continue;
          any_positive = true;
          if (a <= tol.pivot) continue;
          const double ratio = std::max(t.rhs(r), 0.0) / a;
          if (!leave) {
            leave = r;
            best_ratio = ratio;
            continue;
          }
          const double slack = 1e-12 * std::max(1.0, best_ratio);
          if (ratio < best_ratio - slack) {
            leave = r;
            best_ratio = ratio;
          } else if (ratio <= best_ratio + slack) {
            const bool better = bland ? basis[r] < basis[*leave] : a > t.at(*leave, *q);
            if (better) {
              leave = r;
              best_ratio = std::min(best_ratio, ratio);
            }
          }
        }
        if (!leave) {
          if (!any_positive) {
            ray_column = *q;
            return Outcome::Unbounded;
          }
          tiny_pivot_seen = true;
          skip[*q] = true;
          continue;
        }
        if (best_ratio <= 1e-12) ++degenerate;
        basis[*leave] = *q;
        t.pivot(*leave, *q);
        dump(phase, q, leave);
        break;
      }
    }
  }
};

void check_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) fail(ErrorCode::DimensionMismatch, kModule, what + " must be finite");
}

}  // namespace

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

Solution solve(const LinearProgram& lp, const Tolerances& tol, std::ostream* trace) {
  const std::size_t n = lp.variable_count();
  if (!lp.bounds.empty() && lp.bounds.size() != n) {
    fail(ErrorCode::DimensionMismatch, kModule, "bounds size does not match objective");
  }
  for (std::size_t j = 0; j < n; ++j) check_finite(lp.objective[j], "objective coefficient");
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    if (c.coefficients.size() != n) {
      fail(ErrorCode::DimensionMismatch, kModule,
           "constraint " + std::to_string(i) + " has " + std::to_string(c.coefficients.size()) +
               " coefficients, objective has " + std::to_string(n));
    }
    for (double a : c.coefficients) check_finite(a, "constraint coefficient");
    check_finite(c.rhs, "constraint rhs");
  }

  Solution sol;
  auto bounds_of = [&](std::size_t j) { return lp.bounds.empty() ? Bounds{} : lp.bounds[j]; };

  // Map every variable onto non-negative ones.
  std::vector<VariableMap> map(n);
  std::vector<Row> rows;
  std::size_t m_struct = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds b = bounds_of(j);
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower == kInfinity || b.upper == -kInfinity) {
      fail(ErrorCode::DimensionMismatch, kModule, "invalid bounds for variable " + std::to_string(j));
    }
    if (b.lower > b.upper) {
      sol.status = Status::Infeasible;
      sol.phase1_objective = b.lower - b.upper;
      return sol;
    }
    if (std::isfinite(b.lower)) {
      map[j] = {m_struct++, std::nullopt, b.lower, 1.0};
    } else if (std::isfinite(b.upper)) {
      map[j] = {m_struct++, std::nullopt, b.upper, -1.0};
    } else {
      map[j].pos = m_struct++;
      map[j].neg = m_struct++;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds b = bounds_of(j);
    if (std::isfinite(b.lower) && std::isfinite(b.upper)) {
      Row r;
      r.coefficients.assign(m_struct, 0.0);
      r.coefficients[map[j].pos] = 1.0;
      r.rhs = b.upper - b.lower;
      rows.push_back(std::move(r));
    }
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    Row r;
    r.coefficients.assign(m_struct, 0.0);
    r.relation = c.relation;
    r.rhs = c.rhs;
    r.source = i;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.coefficients[j];
      r.rhs -= a * map[j].shift;
      r.coefficients[map[j].pos] += a * map[j].sign;
      if (map[j].neg) r.coefficients[*map[j].neg] -= a;
    }
    rows.push_back(std::move(r));
  }

  // Scale, drop empty rows, and make every rhs non-negative.
  std::vector<Row> kept;
  for (auto& r : rows) {
    double norm = 0.0;
    for (double a : r.coefficients) norm = std::max(norm, std::abs(a));
    if (norm == 0.0) {
      const bool ok = (r.relation == Relation::LessEqual && r.rhs >= -tol.feasibility) ||
                      (r.relation == Relation::GreaterEqual && r.rhs <= tol.feasibility) ||
                      (r.relation == Relation::Equal && std::abs(r.rhs) <= tol.feasibility);
      if (!ok) {
        sol.status = Status::Infeasible;
        sol.phase1_objective = std::abs(r.rhs);
        return sol;
      }
      continue;
    }
    for (double& a : r.coefficients) a /= norm;
    r.rhs /= norm;
    r.dual_factor = 1.0 / norm;
    if (r.rhs < 0.0) {
      for (double& a : r.coefficients) a = -a;
      r.rhs = -r.rhs;
      r.dual_factor = -r.dual_factor;
      if (r.relation == Relation::LessEqual) r.relation = Relation::GreaterEqual;
      else if (r.relation == Relation::GreaterEqual) r.relation = Relation::LessEqual;
    }
    kept.push_back(std::move(r));
  }
  rows = std::move(kept);

  const std::size_t m = rows.size();
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::Equal) ++n_slack;
    if (r.relation != Relation::LessEqual) ++n_art;
  }
  const std::size_t cols = m_struct + n_slack + n_art;
  Simplex sx{Tableau(m, cols), std::vector<std::size_t>(m), std::vector<ColumnKind>(cols, ColumnKind::Structural),
             tol, trace};
  std::vector<std::size_t> unit_column(m);  // column holding +e_r initially
  {
    std::size_t next_slack = m_struct, next_art = m_struct + n_slack;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m_struct; ++c) sx.t.at(r, c) = rows[r].coefficients[c];
      sx.t.rhs(r) = rows[r].rhs;
      if (rows[r].relation != Relation::Equal) {
        const double s = rows[r].relation == Relation::LessEqual ? 1.0 : -1.0;
        sx.t.at(r, next_slack) = s;
        sx.kinds[next_slack] = ColumnKind::Slack;
        if (s > 0) unit_column[r] = next_slack;
        ++next_slack;
      }
      if (rows[r].relation != Relation::LessEqual) {
        sx.t.at(r, next_art) = 1.0;
        sx.kinds[next_art] = ColumnKind::Artificial;
        unit_column[r] = next_art;
        ++next_art;
      }
      sx.basis[r] = unit_column[r];
    }
  }

  std::size_t ray_column = 0;
  if (n_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c)
      if (sx.kinds[c] == ColumnKind::Artificial) phase1[c] = -1.0;
    sx.price(phase1);
    sx.run("phase1", true, ray_column);
    sol.phase1_objective = std::max(0.0, sx.t.rhs(m));  // rhs slot holds -(-sum artificials)
    if (sol.phase1_objective > tol.feasibility) {
      sol.status = Status::Infeasible;
      sol.iterations = sx.iterations;
      return sol;
    }
    // Pivot zero-valued artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (sx.kinds[sx.basis[r]] != ColumnKind::Artificial) continue;
      std::optional<std::size_t> q;
      for (std::size_t c = 0; c < cols; ++c) {
        if (sx.kinds[c] == ColumnKind::Artificial) continue;
        if (std::abs(sx.t.at(r, c)) > tol.pivot && (!q || std::abs(sx.t.at(r, c)) > std::abs(sx.t.at(r, *q)))) q = c;
      }
      if (q) {
        sx.basis[r] = *q;
        sx.t.pivot(r, *q);
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    phase2[map[j].pos] += lp.objective[j] * map[j].sign;
    if (map[j].neg) phase2[*map[j].neg] -= lp.objective[j];
  }
  sx.price(phase2);
  const auto outcome = sx.run("phase2", false, ray_column);
  sol.iterations = sx.iterations;

  auto to_original = [&](const std::vector<double>& xs) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = map[j].shift + map[j].sign * xs[map[j].pos];
      if (map[j].neg) x[j] -= xs[*map[j].neg];
    }
    return x;
  };

  if (outcome == Simplex::Outcome::Unbounded) {
    sol.status = Status::Unbounded;
    std::vector<double> dir(cols, 0.0);
    dir[ray_column] = 1.0;
    for (std::size_t r = 0; r < m; ++r) dir[sx.basis[r]] = -sx.t.at(r, ray_column);
    sol.ray.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      sol.ray[j] = map[j].sign * dir[map[j].pos];
      if (map[j].neg) sol.ray[j] -= dir[*map[j].neg];
    }
    return sol;
  }

  std::vector<double> xs(cols, 0.0);
  for (std::size_t r = 0; r < m; ++r) xs[sx.basis[r]] = std::max(sx.t.rhs(r), 0.0);
  sol.status = Status::Optimal;
  sol.values = to_original(xs);
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective_value += lp.objective[j] * sol.values[j];

  sol.duals.assign(lp.constraints.size(), 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (!rows[r].source) continue;
    sol.duals[*rows[r].source] = -sx.t.cost(unit_column[r]) * rows[r].dual_factor;
  }

  for (const auto& c : lp.constraints) {
    double lhs = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      lhs += c.coefficients[j] * sol.values[j];
      norm = std::max(norm, std::abs(c.coefficients[j]));
    }
    if (norm == 0.0) norm = 1.0;
    double v = 0.0;
    if (c.relation == Relation::LessEqual) v = lhs - c.rhs;
    else if (c.relation == Relation::GreaterEqual) v = c.rhs - lhs;
    else v = std::abs(lhs - c.rhs);
    sol.max_violation = std::max(sol.max_violation, v / norm);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds b = bounds_of(j);
    sol.max_violation = std::max({sol.max_violation, b.lower - sol.values[j], sol.values[j] - b.upper});
  }
  return sol;
}

}  // namespace lct::lp
