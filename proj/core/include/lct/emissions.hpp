#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lct/panel.hpp"

namespace lct::emissions {

/// Every emission quantity in this module is kg CO2.
inline constexpr double kCarbonToCO2 = 44.0 / 12.0;
inline constexpr double kDaysPerYear = 365.0;
inline constexpr double kShareTolerance = 1e-9;

struct TransportModeRecord {
  std::string mode_name;
  double tourist_share = 0.0;               // fraction of passengers that are tourists
  double passengers = 0.0;                  // persons
  double distance_km = 0.0;                 // average journey distance per passenger
  double emission_factor_kg_per_pkm = 0.0;  // kg CO2 per passenger-km
};

struct AccommodationParams {
  double beds = 0.0;
  double occupancy = 0.0;                // annual bed occupancy rate
  double energy_mj_per_bed_night = 0.0;
  double carbon_kg_c_per_mj = 0.0;       // kg carbon per MJ
};

struct ActivityShare {
  std::string name;
  double share = 0.0;
  double factor_kg_per_tourist = 0.0;
};

struct ActivityMix {
  double tourists = 0.0;
  std::vector<ActivityShare> activities;
};

/// Handling of activity shares whose sum is not 1 within kShareTolerance.
enum class ShareMode { Strict, Renormalize, WarnOnly };

struct EmissionBreakdown {
  double transport_kg = 0.0;
  double accommodation_kg = 0.0;
  double activities_kg = 0.0;

  double total_kg() const noexcept { return transport_kg + accommodation_kg + activities_kg; }
};

double transport_emissions(std::span<const TransportModeRecord> modes);

/// 365 * beds * occupancy * energy * carbon * 1e-3 * 44/12 gives tonnes CO2;
/// the result is reported in kg.
double accommodation_emissions(const AccommodationParams& p);

/// `warnings` receives a note when shares are off and the mode tolerates it.
double activity_emissions(const ActivityMix& mix, ShareMode mode = ShareMode::Strict,
                          std::vector<std::string>* warnings = nullptr);

EmissionBreakdown total_emissions(double transport_kg, double accommodation_kg, double activities_kg);

/// A coefficient either fixed in the config or read per region-year from a
/// panel indicator.
struct Quantity {
  std::variant<double, std::string> source = 0.0;

  double resolve(const PanelDataset& panel, std::size_t region, std::size_t year) const;
  const std::string* indicator() const noexcept { return std::get_if<std::string>(&source); }
};

struct TransportModeConfig {
  std::string name;
  Quantity tourist_share;
  Quantity passengers;
  Quantity distance_km;
  Quantity emission_factor_kg_per_pkm;
};

struct AccommodationConfig {
  Quantity beds;
  Quantity occupancy_rate;
  Quantity energy_mj_per_bed_night;
  Quantity carbon_kg_c_per_mj;
};

struct ActivityConfig {
  std::string name;
  Quantity share;
  Quantity factor_kg_per_tourist;
};

struct CoefficientConfig {
  std::string note;
  std::vector<TransportModeConfig> transport_modes;
  std::optional<AccommodationConfig> accommodation;
  Quantity activity_tourists;
  std::vector<ActivityConfig> activities;
  std::optional<ShareMode> share_mode;

  /// Every indicator the config reads from a panel.
  std::vector<std::string> referenced_indicators() const;
};

/// JSON with sections `transport_modes[]`, `accommodation`, `activities[]`.
CoefficientConfig parse_coefficients(std::istream& in);
CoefficientConfig load_coefficients(const std::filesystem::path& path);

struct EmissionRow {
  std::string region;
  int year = 0;
  EmissionBreakdown breakdown;
};

struct EmissionTable {
  std::vector<std::string> regions;
  std::vector<int> years;
  std::vector<EmissionRow> rows;  // region-major, years ascending
  std::vector<std::string> warnings;

  /// Single-indicator panel of total emissions, indicator `q_total_kg`.
  PanelDataset to_panel() const;
};

inline constexpr const char* kTotalIndicator = "q_total_kg";

EmissionTable emissions_series(const PanelDataset& panel, const CoefficientConfig& coeffs,
                               ShareMode mode = ShareMode::Strict);

/// region,year,q_transport_kg,q_accommodation_kg,q_activities_kg,q_total_kg
void write_emissions_csv(std::ostream& out, const EmissionTable& table, bool full_precision = false);

}  // namespace lct::emissions
