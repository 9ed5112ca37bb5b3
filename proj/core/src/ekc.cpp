#include "lct/ekc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include <Eigen/Dense>

#include "lct/csv.hpp"
#include "lct/error.hpp"
#include "lct/format.hpp"

namespace lct::ekc {
namespace {
constexpr const char* kModule = "ekc";
}

std::string_view to_string(Shape s) noexcept {
  switch (s) {
    case Shape::Rising: return "rising";
    case Shape::InvertedU: return "inverted_u";
    case Shape::UShaped: return "u_shaped";
    case Shape::Flat: return "flat";
  }
  return "unknown";
}

std::string_view to_string(Pooling p) noexcept { return p == Pooling::Pooled ? "pooled" : "basin-mean"; }

EKCFit fit_ekc(std::span<const double> te, std::span<const double> tcde, const FitOptions& options) {
  if (te.size() != tcde.size()) fail(ErrorCode::DimensionMismatch, kModule, "te and tcde lengths differ");
  if (te.size() < 3) {
    fail(ErrorCode::TooFewPoints, kModule, "quadratic fit needs at least 3 points, got " + std::to_string(te.size()));
  }
  for (std::size_t i = 0; i < te.size(); ++i)
    if (!std::isfinite(te[i]) || !std::isfinite(tcde[i])) fail(ErrorCode::NonFinite, kModule, "non-finite point");
  if (std::set<double>(te.begin(), te.end()).size() < 3) {
    fail(ErrorCode::RankDeficient, kModule, "fewer than 3 distinct economy index values");
  }

  const auto n = static_cast<Eigen::Index>(te.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = te[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = e;
    design(i, 2) = e * e;
    y(i) = tcde[static_cast<std::size_t>(i)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) fail(ErrorCode::RankDeficient, kModule, "design matrix is rank deficient");
  const Eigen::Vector3d coef = qr.solve(y);

  EKCFit fit;
  fit.a = coef(0);
  fit.b = coef(1);
  fit.c = coef(2);
  fit.points = te.size();
  const auto [lo, hi] = std::minmax_element(te.begin(), te.end());
  fit.te_min = *lo;
  fit.te_max = *hi;

  const Eigen::VectorXd residuals = y - design * coef;
  fit.residuals.assign(residuals.data(), residuals.data() + n);
  const double ss_res = residuals.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;

  const double tol = options.curvature_tolerance;
  if (std::abs(fit.c) <= tol) {
    fit.shape = Shape::Flat;
    return fit;
  }
  const double vertex = -fit.b / (2.0 * fit.c);
  fit.turning_point = vertex;
  fit.turning_point_in_range = vertex >= fit.te_min && vertex <= fit.te_max;
  if (fit.c > 0.0) {
    fit.shape = Shape::UShaped;
  } else if (fit.turning_point_in_range || vertex < fit.te_min) {
    fit.shape = Shape::InvertedU;
  } else {
    fit.shape = Shape::Rising;
  }
  return fit;
}

std::vector<EKCPoint> ekc_points(std::span<const index::IndexSeries> te, std::span<const index::IndexSeries> tcde,
                                 Pooling pooling) {
  std::vector<EKCPoint> pooled;
  for (const auto& a : te) {
    auto it = std::find_if(tcde.begin(), tcde.end(), [&](const auto& b) { return b.region == a.region; });
    if (it == tcde.end()) fail(ErrorCode::RegionMismatch, kModule, "no emissions index for region '" + a.region + "'");
    if (it->years != a.years) fail(ErrorCode::YearMismatch, kModule, "year vectors differ for '" + a.region + "'");
    for (std::size_t i = 0; i < a.years.size(); ++i) pooled.push_back({a.region, a.years[i], a.values[i], it->values[i]});
  }
  if (te.size() != tcde.size()) fail(ErrorCode::RegionMismatch, kModule, "different region counts");
  if (pooling == Pooling::Pooled) return pooled;

  std::map<int, std::pair<std::size_t, EKCPoint>> by_year;
  for (const auto& p : pooled) {
    auto& [count, acc] = by_year[p.year];
    acc.region = "basin";
    acc.year = p.year;
    acc.te += p.te;
    acc.tcde += p.tcde;
    ++count;
  }
  std::vector<EKCPoint> out;
  for (auto& [year, entry] : by_year) {
    auto& [count, acc] = entry;
    acc.te /= static_cast<double>(count);
    acc.tcde /= static_cast<double>(count);
    out.push_back(acc);
  }
  return out;
}

EKCFit fit_points(std::span<const EKCPoint> points, const FitOptions& options) {
  std::vector<double> te, tcde;
  for (const auto& p : points) {
    te.push_back(p.te);
    tcde.push_back(p.tcde);
  }
  return fit_ekc(te, tcde, options);
}

void write_points_csv(std::ostream& out, std::span<const EKCPoint> points, const EKCFit& fit, bool full_precision) {
  csv::Writer w(out);
  w.row({"region", "year", "te_index", "tcde_index", "fitted"});
  for (const auto& p : points) {
    const double fitted = fit.a + fit.b * p.te + fit.c * p.te * p.te;
    w.row({p.region, std::to_string(p.year), format_number(p.te, full_precision),
           format_number(p.tcde, full_precision), format_number(fitted, full_precision)});
  }
}

void write_fit_csv(std::ostream& out, const EKCFit& fit, Pooling pooling, bool full_precision) {
  csv::Writer w(out);
  auto num = [&](double v) { return format_number(v, full_precision); };
  w.row({"pooling", "points", "a", "b", "c", "r_squared", "turning_point", "turning_point_in_range", "te_min",
         "te_max", "shape"});
  w.row({std::string(to_string(pooling)), std::to_string(fit.points), num(fit.a), num(fit.b), num(fit.c),
         num(fit.r_squared), fit.turning_point ? num(*fit.turning_point) : "",
         fit.turning_point_in_range ? "true" : "false", num(fit.te_min), num(fit.te_max),
         std::string(to_string(fit.shape))});
}

}  // namespace lct::ekc
