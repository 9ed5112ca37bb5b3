#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lct/index.hpp"

namespace lct::ekc {

/// Rising: concave but still climbing over the observed range (pre-peak).
/// InvertedU: concave with the vertex inside the range, or past it when
/// turning_point_in_range is false.
enum class Shape { Rising, InvertedU, UShaped, Flat };

std::string_view to_string(Shape s) noexcept;

/// tcde ~ a + b * te + c * te^2 by ordinary least squares.
struct EKCFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double r_squared = 0.0;
  std::optional<double> turning_point;  // -b / (2c) when c is not flat
  bool turning_point_in_range = false;
  Shape shape = Shape::Flat;
  double te_min = 0.0;
  double te_max = 0.0;
  std::size_t points = 0;
  std::vector<double> residuals;
};

struct FitOptions {
  double curvature_tolerance = 1e-8;  // |c| at or below this is flat
};

EKCFit fit_ekc(std::span<const double> te, std::span<const double> tcde, const FitOptions& options = {});

/// Pooled: every region-year is a point. BasinMean: one point per year, the
/// mean index over regions.
enum class Pooling { Pooled, BasinMean };

std::string_view to_string(Pooling p) noexcept;

struct EKCPoint {
  std::string region;  // "basin" for basin means
  int year = 0;
  double te = 0.0;
  double tcde = 0.0;
};

std::vector<EKCPoint> ekc_points(std::span<const index::IndexSeries> te, std::span<const index::IndexSeries> tcde,
                                 Pooling pooling);

EKCFit fit_points(std::span<const EKCPoint> points, const FitOptions& options = {});

/// region,year,te_index,tcde_index,fitted
void write_points_csv(std::ostream& out, std::span<const EKCPoint> points, const EKCFit& fit,
                      bool full_precision = false);
/// pooling,points,a,b,c,r_squared,turning_point,turning_point_in_range,te_min,te_max,shape
void write_fit_csv(std::ostream& out, const EKCFit& fit, Pooling pooling, bool full_precision = false);

}  // namespace lct::ekc
