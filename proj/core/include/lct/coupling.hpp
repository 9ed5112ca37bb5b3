#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lct/index.hpp"

namespace lct::coupling {

enum class Condition { Imbalance, Coordination };

std::string_view to_string(Condition c) noexcept;

/// One of the ten coordination-degree bands, e.g. level 8 "Mediocre coordination".
struct Classification {
  int level = 1;
  std::string_view name;
  Condition condition = Condition::Imbalance;
};

/// alpha multiplies u1 and beta multiplies u2 in the overall level, yet alpha
/// is u2's share and beta is u1's share.
struct Contributions {
  double alpha = 0.0;
  double beta = 0.0;
};

struct CouplingResult {
  double u1 = 0.0;  // tourism economy index
  double u2 = 0.0;  // tourism emissions index
  double c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double t = 0.0;
  double d = 0.0;
  Classification classification;
  bool degenerate = false;  // (0, 0) input: C, T, D reported as 0
};

/// C = sqrt([1 - sqrt((u1 - u2)^2)] * u1 * u2) / max(u1, u2).
/// Returns 0 for (0, 0); throws OutOfRange outside [0, 1].
double coupling_degree(double u1, double u2);
Contributions contributions(double u1, double u2);
/// alpha*u1 + beta*u2, which is the harmonic mean 2*u1*u2 / (u1 + u2).
double overall_level(double u1, double u2);
CouplingResult ccd(double u1, double u2);
/// Bands are [k/10, (k+1)/10) for levels 1..9 and [0.9, 1.0] for level 10.
Classification classify(double d);

struct CouplingSeries {
  std::string region;
  std::vector<int> years;
  std::vector<CouplingResult> results;
};

CouplingSeries ccd_series(const index::IndexSeries& te, const index::IndexSeries& tcde);
/// Pairs series by region name; both sides must cover the same regions.
std::vector<CouplingSeries> ccd_panel(std::span<const index::IndexSeries> te,
                                      std::span<const index::IndexSeries> tcde);

/// Basin-level figures per year under both aggregation readings: the mean of
/// regional C/D, and C/D evaluated at the mean regional indices.
struct BasinCoupling {
  int year = 0;
  double mean_c = 0.0;
  double mean_d = 0.0;
  double c_of_mean = 0.0;
  double d_of_mean = 0.0;
};

std::vector<BasinCoupling> basin_coupling(std::span<const CouplingSeries> series);

/// region,year,u1,u2,c,t,d,level,level_name,condition
void write_ccd_csv(std::ostream& out, std::span<const CouplingSeries> series, bool full_precision = false);
/// year,mean_of_regional_c,mean_of_regional_d,c_of_mean_indices,d_of_mean_indices
void write_basin_csv(std::ostream& out, std::span<const BasinCoupling> basin, bool full_precision = false);

}  // namespace lct::coupling
