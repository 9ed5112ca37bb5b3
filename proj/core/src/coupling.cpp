#include "lct/coupling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "lct/csv.hpp"
#include "lct/error.hpp"
#include "lct/format.hpp"

namespace lct::coupling {
namespace {

constexpr const char* kModule = "coupling";

constexpr std::array<std::string_view, 10> kLevelNames{
    "Extreme imbalance",     "Severe imbalance",      "Moderate imbalance",    "Slight imbalance",
    "Imminent imbalance",    "Barely coordination",   "Primary coordination",  "Mediocre coordination",
    "Good coordination",     "Super coordination"};

// Lower edges of levels 2..10.
constexpr std::array<double, 9> kBandEdges{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

void require_unit(double u, const char* name) {
  if (!std::isfinite(u) || u < 0.0 || u > 1.0) {
    std::ostringstream os;
    os << name << " = " << u << " is outside [0, 1]";
    fail(ErrorCode::OutOfRange, kModule, os.str());
  }
}

}  // namespace

std::string_view to_string(Condition c) noexcept {
  return c == Condition::Imbalance ? "imbalance" : "coordination";
}

double coupling_degree(double u1, double u2) {
  require_unit(u1, "u1");
  require_unit(u2, "u2");
  const double hi = std::max(u1, u2);
  if (hi == 0.0) return 0.0;
  if (u1 == u2) return 1.0;  // sqrt(u*u)/u can round to 1 - ulp
  const double diff = u1 - u2;
  return std::min(1.0, std::sqrt((1.0 - std::sqrt(diff * diff)) * u1 * u2) / hi);
}

Contributions contributions(double u1, double u2) {
  require_unit(u1, "u1");
  require_unit(u2, "u2");
  const double sum = u1 + u2;
  if (sum == 0.0) fail(ErrorCode::BothZero, kModule, "contributions undefined for u1 = u2 = 0");
  return {u2 / sum, u1 / sum};
}

double overall_level(double u1, double u2) {
  const auto [alpha, beta] = contributions(u1, u2);
  return alpha * u1 + beta * u2;
}

Classification classify(double d) {
  if (!std::isfinite(d) || d < 0.0 || d > 1.0) {
    std::ostringstream os;
    os << "coupling coordination degree " << d << " is outside [0, 1]";
    fail(ErrorCode::OutOfRange, kModule, os.str());
  }
  int level = 1;
  for (double edge : kBandEdges)
    if (d >= edge) ++level;
  return {level, kLevelNames[static_cast<std::size_t>(level - 1)],
          level <= 5 ? Condition::Imbalance : Condition::Coordination};
}

CouplingResult ccd(double u1, double u2) {
  CouplingResult r;
  r.u1 = u1;
  r.u2 = u2;
  r.c = coupling_degree(u1, u2);
  if (u1 + u2 == 0.0) {
    r.degenerate = true;
  } else {
    const auto k = contributions(u1, u2);
    r.alpha = k.alpha;
    r.beta = k.beta;
    r.t = r.alpha * u1 + r.beta * u2;
    r.d = std::sqrt(r.c * r.t);
  }
  r.classification = classify(r.d);
  return r;
}

CouplingSeries ccd_series(const index::IndexSeries& te, const index::IndexSeries& tcde) {
  if (te.region != tcde.region) {
    fail(ErrorCode::RegionMismatch, kModule, "regions '" + te.region + "' and '" + tcde.region + "' differ");
  }
  if (te.years != tcde.years || te.values.size() != tcde.values.size()) {
    fail(ErrorCode::YearMismatch, kModule, "year vectors differ for region '" + te.region + "'");
  }
  CouplingSeries out{te.region, te.years, {}};
  out.results.reserve(te.values.size());
  for (std::size_t i = 0; i < te.values.size(); ++i) {
    try {
      out.results.push_back(ccd(te.values[i], tcde.values[i]));
    } catch (const Error& e) {
      throw e.with_context("region '" + te.region + "', year " + std::to_string(te.years[i]));
    }
  }
  return out;
}

std::vector<CouplingSeries> ccd_panel(std::span<const index::IndexSeries> te,
                                      std::span<const index::IndexSeries> tcde) {
  if (te.size() != tcde.size()) fail(ErrorCode::RegionMismatch, kModule, "different region counts");
  std::vector<CouplingSeries> out;
  for (const auto& a : te) {
    auto it = std::find_if(tcde.begin(), tcde.end(), [&](const auto& b) { return b.region == a.region; });
    if (it == tcde.end()) fail(ErrorCode::RegionMismatch, kModule, "no emissions index for region '" + a.region + "'");
    out.push_back(ccd_series(a, *it));
  }
  return out;
}

std::vector<BasinCoupling> basin_coupling(std::span<const CouplingSeries> series) {
  if (series.empty()) return {};
  const auto& years = series.front().years;
  for (const auto& s : series)
    if (s.years != years) fail(ErrorCode::YearMismatch, kModule, "regions cover different years");
  const double n = static_cast<double>(series.size());
  std::vector<BasinCoupling> out;
  for (std::size_t y = 0; y < years.size(); ++y) {
    BasinCoupling b{years[y], 0.0, 0.0, 0.0, 0.0};
    double u1 = 0.0, u2 = 0.0;
    for (const auto& s : series) {
      b.mean_c += s.results[y].c;
      b.mean_d += s.results[y].d;
      u1 += s.results[y].u1;
      u2 += s.results[y].u2;
    }
    b.mean_c /= n;
    b.mean_d /= n;
    const CouplingResult at_mean = ccd(u1 / n, u2 / n);
    b.c_of_mean = at_mean.c;
    b.d_of_mean = at_mean.d;
    out.push_back(b);
  }
  return out;
}

void write_ccd_csv(std::ostream& out, std::span<const CouplingSeries> series, bool full_precision) {
  csv::Writer w(out);
  w.row({"region", "year", "u1", "u2", "c", "t", "d", "level", "level_name", "condition"});
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.years.size(); ++i) {
      const auto& r = s.results[i];
      w.row({s.region, std::to_string(s.years[i]), format_number(r.u1, full_precision),
             format_number(r.u2, full_precision), format_number(r.c, full_precision),
             format_number(r.t, full_precision), format_number(r.d, full_precision),
             std::to_string(r.classification.level), std::string(r.classification.name),
             std::string(to_string(r.classification.condition))});
    }
}

void write_basin_csv(std::ostream& out, std::span<const BasinCoupling> basin, bool full_precision) {
  csv::Writer w(out);
  w.row({"year", "mean_of_regional_c", "mean_of_regional_d", "c_of_mean_indices", "d_of_mean_indices"});
  for (const auto& b : basin)
    w.row({std::to_string(b.year), format_number(b.mean_c, full_precision), format_number(b.mean_d, full_precision),
           format_number(b.c_of_mean, full_precision), format_number(b.d_of_mean, full_precision)});
}

}  // namespace lct::coupling
