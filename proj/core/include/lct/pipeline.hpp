#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lct/coupling.hpp"
#include "lct/dea.hpp"
#include "lct/ekc.hpp"
#include "lct/emissions.hpp"
#include "lct/index.hpp"
#include "lct/panel.hpp"

namespace lct::pipeline {

std::string_view version() noexcept;

struct IndicatorRoles {
  std::vector<std::string> economy{"tourist_arrivals", "tourism_revenue", "tourism_practitioners"};
  std::vector<std::string> dea_inputs{"tourism_practitioners", "fixed_asset_investment", "energy_consumption"};
  std::vector<std::string> dea_good_outputs{"tourist_arrivals", "tourism_revenue"};
};

struct RunConfig {
  std::filesystem::path input;
  PanelFormat format = PanelFormat::Long;
  Imputation imputation = Imputation::None;
  std::map<std::string, Attribute> attributes;
  std::filesystem::path coefficients;
  std::filesystem::path output_dir;

  index::IndexOptions index;
  std::optional<emissions::ShareMode> share_mode;  // overrides the coefficient file
  dea::MLPIOptions mlpi;
  ekc::Pooling pooling = ekc::Pooling::Pooled;
  IndicatorRoles roles;
  bool full_precision = false;
};

struct RunResult {
  emissions::EmissionTable emissions;
  std::vector<index::IndexSeries> economy_index;
  std::vector<index::IndexSeries> emissions_index;
  std::vector<coupling::CouplingSeries> coupling;
  std::vector<coupling::BasinCoupling> basin_coupling;
  dea::MLPITable mlpi;
  dea::MLPIAggregate mlpi_summary;
  ekc::EKCFit ekc;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> warnings;
};

/// Runs emissions -> indices -> coupling -> productivity -> EKC and writes:
/// emissions.csv, te_index.csv, te_weights.csv, tcde_index.csv,
/// tcde_weights.csv, ccd.csv, ccd_basin.csv, mlpi.csv, mlpi_components.csv,
/// mlpi_records.csv, ekc_points.csv, ekc_fit.csv and manifest.json.
/// Identical inputs and config produce byte-identical files.
RunResult run_pipeline(const RunConfig& cfg);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lct::pipeline
