#include "lct/emissions.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lct/csv.hpp"
#include "lct/error.hpp"
#include "lct/format.hpp"

namespace lct::emissions {
namespace {

constexpr const char* kModule = "emissions";

void require_non_negative(double v, const std::string& what) {
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << what << " must be finite and >= 0 (got " << v << ")";
    fail(ErrorCode::NegativeQuantity, kModule, os.str());
  }
}

void require_fraction(double v, const std::string& what, ErrorCode code) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << what << " must lie in [0, 1] (got " << v << ")";
    fail(code, kModule, os.str());
  }
}

}  // namespace

double transport_emissions(std::span<const TransportModeRecord> modes) {
  double total = 0.0;
  for (const auto& m : modes) {
    require_fraction(m.tourist_share, "tourist_share of mode '" + m.mode_name + "'", ErrorCode::InvalidShare);
    require_non_negative(m.passengers, "passengers of mode '" + m.mode_name + "'");
    require_non_negative(m.distance_km, "distance_km of mode '" + m.mode_name + "'");
    require_non_negative(m.emission_factor_kg_per_pkm, "emission factor of mode '" + m.mode_name + "'");
    total += m.tourist_share * m.passengers * m.distance_km * m.emission_factor_kg_per_pkm;
  }
  return total;
}

double accommodation_emissions(const AccommodationParams& p) {
  require_non_negative(p.beds, "beds");
  require_fraction(p.occupancy, "occupancy", ErrorCode::OccupancyOutOfRange);
  require_non_negative(p.energy_mj_per_bed_night, "energy_mj_per_bed_night");
  require_non_negative(p.carbon_kg_c_per_mj, "carbon_kg_c_per_mj");
  const double tonnes_co2 =
      kDaysPerYear * p.beds * p.occupancy * p.energy_mj_per_bed_night * p.carbon_kg_c_per_mj * 1e-3 * kCarbonToCO2;
  return tonnes_co2 * 1e3;
}

double activity_emissions(const ActivityMix& mix, ShareMode mode, std::vector<std::string>* warnings) {
  require_non_negative(mix.tourists, "tourists");
  double share_sum = 0.0;
  for (const auto& a : mix.activities) {
    require_fraction(a.share, "share of activity '" + a.name + "'", ErrorCode::InvalidShare);
    require_non_negative(a.factor_kg_per_tourist, "factor of activity '" + a.name + "'");
    share_sum += a.share;
  }
  double scale = 1.0;
  if (!mix.activities.empty() && std::abs(share_sum - 1.0) > kShareTolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "activity shares sum to " << share_sum << ", expected 1";
    switch (mode) {
      case ShareMode::Strict:
        fail(ErrorCode::SharesNotNormalized, kModule, os.str());
      case ShareMode::Renormalize:
        if (share_sum <= 0.0) fail(ErrorCode::SharesNotNormalized, kModule, os.str());
        scale = 1.0 / share_sum;
        if (warnings) warnings->push_back(os.str() + "; renormalized");
        break;
      case ShareMode::WarnOnly:
        if (warnings) warnings->push_back(os.str());
        break;
    }
  }
  double total = 0.0;
  for (const auto& a : mix.activities) total += mix.tourists * (a.share * scale) * a.factor_kg_per_tourist;
  return total;
}

EmissionBreakdown total_emissions(double transport_kg, double accommodation_kg, double activities_kg) {
  require_non_negative(transport_kg, "transport emissions");
  require_non_negative(accommodation_kg, "accommodation emissions");
  require_non_negative(activities_kg, "activity emissions");
  return {transport_kg, accommodation_kg, activities_kg};
}

double Quantity::resolve(const PanelDataset& panel, std::size_t region, std::size_t year) const {
  if (const double* v = std::get_if<double>(&source)) return *v;
  const auto& name = std::get<std::string>(source);
  auto idx = panel.find_indicator(name);
  if (!idx) fail(ErrorCode::MissingIndicator, kModule, "panel has no indicator '" + name + "'");
  return panel.at(region, year, *idx);
}

std::vector<std::string> CoefficientConfig::referenced_indicators() const {
  std::vector<std::string> out;
  auto add = [&](const Quantity& q) {
    if (auto* n = q.indicator(); n && std::find(out.begin(), out.end(), *n) == out.end()) out.push_back(*n);
  };
  for (const auto& m : transport_modes) {
    add(m.tourist_share);
    add(m.passengers);
    add(m.distance_km);
    add(m.emission_factor_kg_per_pkm);
  }
  if (accommodation) {
    add(accommodation->beds);
    add(accommodation->occupancy_rate);
    add(accommodation->energy_mj_per_bed_night);
    add(accommodation->carbon_kg_c_per_mj);
  }
  if (!activities.empty()) add(activity_tourists);
  for (const auto& a : activities) {
    add(a.share);
    add(a.factor_kg_per_tourist);
  }
  return out;
}

namespace {

using nlohmann::json;

Quantity quantity(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(ErrorCode::InvalidConfig, kModule, where + ": missing field '" + key + "'");
  const json& v = obj.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_string()) return {v.get<std::string>()};
  fail(ErrorCode::InvalidConfig, kModule, where + ": field '" + key + "' must be a number or an indicator name");
}

std::string name_of(const json& obj, const std::string& where) {
  if (!obj.contains("name") || !obj.at("name").is_string())
    fail(ErrorCode::InvalidConfig, kModule, where + ": missing string field 'name'");
  return obj.at("name").get<std::string>();
}

}  // namespace

CoefficientConfig parse_coefficients(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, kModule, std::string("coefficient file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::InvalidConfig, kModule, "coefficient file must be a JSON object");

  CoefficientConfig cfg;
  cfg.note = doc.value("note", "");
  if (doc.contains("transport_modes")) {
    for (const auto& m : doc.at("transport_modes")) {
      const std::string where = "transport_modes[" + std::to_string(cfg.transport_modes.size()) + "]";
      cfg.transport_modes.push_back({name_of(m, where), quantity(m, "tourist_share", where),
                                     quantity(m, "passengers", where), quantity(m, "distance_km", where),
                                     quantity(m, "emission_factor_kg_per_pkm", where)});
    }
  }
  if (doc.contains("accommodation")) {
    const json& a = doc.at("accommodation");
    cfg.accommodation = AccommodationConfig{
        quantity(a, "beds", "accommodation"), quantity(a, "occupancy_rate", "accommodation"),
        quantity(a, "energy_mj_per_bed_night", "accommodation"), quantity(a, "carbon_kg_c_per_mj", "accommodation")};
  }
  if (doc.contains("activities")) {
    cfg.activity_tourists = quantity(doc, "activity_tourists", "root");
    for (const auto& a : doc.at("activities")) {
      const std::string where = "activities[" + std::to_string(cfg.activities.size()) + "]";
      cfg.activities.push_back({name_of(a, where), quantity(a, "share", where),
                                quantity(a, "factor_kg_per_tourist", where)});
    }
  }
  if (doc.contains("share_mode")) {
    const std::string mode = doc.at("share_mode").get<std::string>();
    if (mode == "strict") cfg.share_mode = ShareMode::Strict;
    else if (mode == "renormalize") cfg.share_mode = ShareMode::Renormalize;
    else if (mode == "warn") cfg.share_mode = ShareMode::WarnOnly;
    else fail(ErrorCode::InvalidConfig, kModule, "unknown share_mode '" + mode + "'");
  }
  return cfg;
}

CoefficientConfig load_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, kModule, "cannot open " + path.string());
  return parse_coefficients(in);
}

PanelDataset EmissionTable::to_panel() const {
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& row : rows) values.push_back(row.breakdown.total_kg());
  return {regions, years, {Indicator{kTotalIndicator, Attribute::Positive}}, std::move(values)};
}

EmissionTable emissions_series(const PanelDataset& panel, const CoefficientConfig& coeffs, ShareMode mode) {
  for (const auto& name : coeffs.referenced_indicators()) {
    if (!panel.find_indicator(name))
      fail(ErrorCode::MissingIndicator, kModule, "panel has no indicator '" + name + "' required by coefficients");
  }
  EmissionTable table;
  table.regions = panel.regions();
  table.years = panel.years();
  table.rows.reserve(panel.region_count() * panel.year_count());
  for (std::size_t r = 0; r < panel.region_count(); ++r) {
    for (std::size_t y = 0; y < panel.year_count(); ++y) {
      const std::string& region = panel.regions()[r];
      const int year = panel.years()[y];
      try {
        std::vector<TransportModeRecord> modes;
        for (const auto& m : coeffs.transport_modes) {
          modes.push_back({m.name, m.tourist_share.resolve(panel, r, y), m.passengers.resolve(panel, r, y),
                           m.distance_km.resolve(panel, r, y), m.emission_factor_kg_per_pkm.resolve(panel, r, y)});
        }
        double accommodation = 0.0;
        if (coeffs.accommodation) {
          const auto& a = *coeffs.accommodation;
          accommodation = accommodation_emissions({a.beds.resolve(panel, r, y), a.occupancy_rate.resolve(panel, r, y),
                                                   a.energy_mj_per_bed_night.resolve(panel, r, y),
                                                   a.carbon_kg_c_per_mj.resolve(panel, r, y)});
        }
        double activities = 0.0;
        if (!coeffs.activities.empty()) {
          ActivityMix mix{coeffs.activity_tourists.resolve(panel, r, y), {}};
          for (const auto& a : coeffs.activities)
            mix.activities.push_back({a.name, a.share.resolve(panel, r, y), a.factor_kg_per_tourist.resolve(panel, r, y)});
          std::vector<std::string> notes;
          activities = activity_emissions(mix, mode, &notes);
          for (auto& n : notes) table.warnings.push_back("region '" + region + "', year " + std::to_string(year) + ": " + n);
        }
        table.rows.push_back({region, year, total_emissions(transport_emissions(modes), accommodation, activities)});
      } catch (const Error& e) {
        throw e.with_context("region '" + region + "', year " + std::to_string(year));
      }
    }
  }
  return table;
}

void write_emissions_csv(std::ostream& out, const EmissionTable& table, bool full_precision) {
  csv::Writer w(out);
  w.row({"region", "year", "q_transport_kg", "q_accommodation_kg", "q_activities_kg", "q_total_kg"});
  for (const auto& row : table.rows) {
    const auto& b = row.breakdown;
    w.row({row.region, std::to_string(row.year), format_number(b.transport_kg, full_precision),
           format_number(b.accommodation_kg, full_precision), format_number(b.activities_kg, full_precision),
           format_number(b.total_kg(), full_precision)});
  }
}

}  // namespace lct::emissions
