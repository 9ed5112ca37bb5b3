#include "lct/fixture.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "lct/error.hpp"

namespace lct::fixture {

std::string illustrative_coefficients_json() {
  nlohmann::ordered_json doc;
  doc["note"] = "illustrative values, not calibrated to any study";
  doc["transport_modes"] = nlohmann::ordered_json::array();
  auto mode = [&](const char* name, double share, const char* passengers, double km, double factor) {
    nlohmann::ordered_json m;
    m["name"] = name;
    m["tourist_share"] = share;
    m["passengers"] = passengers;
    m["distance_km"] = km;
    m["emission_factor_kg_per_pkm"] = factor;
    doc["transport_modes"].push_back(m);
  };
  mode("plane", 0.64, "plane_passengers", 1200.0, 0.137);
  mode("train", 0.318, "rail_passengers", 300.0, 0.027);
  mode("car", 0.137, "road_passengers", 80.0, 0.133);
  mode("water", 0.106, "water_passengers", 60.0, 0.106);
  doc["accommodation"] = {{"beds", "hotel_beds"},
                          {"occupancy_rate", "occupancy_rate"},
                          {"energy_mj_per_bed_night", 155.0},
                          {"carbon_kg_c_per_mj", 0.0159}};
  doc["activity_tourists"] = "activity_tourists";
  doc["activities"] = nlohmann::ordered_json::array();
  auto activity = [&](const char* name, double share, double factor) {
    nlohmann::ordered_json a;
    a["name"] = name;
    a["share"] = share;
    a["factor_kg_per_tourist"] = factor;
    doc["activities"].push_back(a);
  };
  activity("sightseeing", 0.5, 0.417);
  activity("leisure_vacation", 0.2, 0.670);
  activity("business_trip", 0.1, 0.786);
  activity("visiting_relatives_and_friends", 0.15, 0.172);
  activity("others", 0.05, 0.508);
  return doc.dump(2) + "\n";
}

Fixture generate(const FixtureOptions& options) {
  if (options.regions == 0 || options.years < 2) {
    fail(ErrorCode::InvalidConfig, "fixture", "need at least one region and two years");
  }
  std::mt19937_64 rng(options.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  const std::vector<Indicator> indicators = {
      {"tourist_arrivals"},  {"tourism_revenue"},   {"tourism_practitioners"}, {"fixed_asset_investment"},
      {"energy_consumption"}, {"plane_passengers"}, {"rail_passengers"},       {"road_passengers"},
      {"water_passengers"},  {"hotel_beds"},        {"occupancy_rate"},        {"activity_tourists"}};

  std::vector<std::string> regions;
  std::vector<int> years;
  for (std::size_t y = 0; y < options.years; ++y) years.push_back(options.first_year + static_cast<int>(y));
  for (std::size_t r = 0; r < options.regions; ++r) regions.push_back("region_" + std::to_string(r + 1));

  std::vector<double> values;
  values.reserve(options.regions * options.years * indicators.size());
  for (std::size_t r = 0; r < options.regions; ++r) {
    const double scale = uniform(0.5, 2.0);
    const double linear_rate = uniform(1.5, 3.0);  // emission drivers end at (1 + rate) x start
    const double economy_ratio = (1.0 + linear_rate) * uniform(0.95, 1.05);
    const double economy_power = uniform(1.3, 1.5);
    const double arrivals0 = 3.0e7 * scale, revenue0 = 2.5e10 * scale;
    const double practitioners0 = 8.0e4 * scale, investment0 = 1.2e10 * scale, energy0 = 4.0e6 * scale;
    const double plane0 = 2.0e6 * scale, rail0 = 3.0e7 * scale, road0 = 1.5e8 * scale, water0 = 5.0e5 * scale;
    const double beds0 = 6.0e4 * scale, tourists0 = 2.8e7 * scale;
    const double occupancy = uniform(0.5, 0.65);

    for (std::size_t y = 0; y < options.years; ++y) {
      const double tau = static_cast<double>(y) / static_cast<double>(options.years - 1);
      const double linear = 1.0 + linear_rate * tau;
      const double economy = 1.0 + (economy_ratio - 1.0) * std::pow(tau, economy_power);
      // inputs follow the geometric mean of the two output curves
      const double inputs = std::sqrt(economy * linear);
      values.insert(values.end(), {arrivals0 * economy, revenue0 * economy, practitioners0 * inputs,
                                   investment0 * inputs, energy0 * inputs, plane0 * linear, rail0 * linear,
                                   road0 * linear, water0 * linear, beds0 * linear, occupancy,
                                   tourists0 * linear});
    }
  }
  return {PanelDataset(regions, years, indicators, std::move(values)), illustrative_coefficients_json()};
}

}  // namespace lct::fixture
