#pragma once

#include <cstdint>
#include <string>

#include "lct/panel.hpp"

namespace lct::fixture {

struct FixtureOptions {
  std::size_t regions = 9;
  std::size_t years = 20;
  int first_year = 2000;
  std::uint64_t seed = 1;
};

struct Fixture {
  PanelDataset panel;
  std::string coefficients_json;  // matches the panel's indicator names
};

/// Synthetic low-carbon tourism panel. Arrivals and revenue grow
/// super-linearly (1 + k * tau^p, p in [1.3, 1.5]); every emission driver
/// grows linearly with a common per-region rate, so total emissions are linear
/// in time. Inputs follow the geometric mean of those two curves.
/// Values are smooth (no noise); the seed only draws per-region parameters.
Fixture generate(const FixtureOptions& options = {});

/// Illustrative coefficients; not calibrated to any published study.
std::string illustrative_coefficients_json();

}  // namespace lct::fixture
