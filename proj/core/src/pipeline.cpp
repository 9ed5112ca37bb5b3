#include "lct/pipeline.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "lct/error.hpp"

#ifndef LCT_VERSION
#define LCT_VERSION "0.0.0"
#endif

namespace lct::pipeline {
namespace {

constexpr const char* kModule = "report_cli";

std::string share_mode_name(emissions::ShareMode m) {
  switch (m) {
    case emissions::ShareMode::Strict: return "strict";
    case emissions::ShareMode::Renormalize: return "renormalize";
    case emissions::ShareMode::WarnOnly: return "warn";
  }
  return "strict";
}

std::string imputation_name(Imputation i) {
  switch (i) {
    case Imputation::None: return "none";
    case Imputation::ForwardFill: return "forward-fill";
    case Imputation::Linear: return "linear";
  }
  return "none";
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

}  // namespace

std::string_view version() noexcept { return LCT_VERSION; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::Io, kModule, "sha256 digest failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, kModule, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, kModule, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::Io, kModule, "short write to " + path.string());
}

RunResult run_pipeline(const RunConfig& cfg) {
  PanelSchema schema;
  schema.format = cfg.format;
  schema.imputation = cfg.imputation;
  schema.attributes = cfg.attributes;
  const PanelDataset panel = load_panel(cfg.input, schema);
  const emissions::CoefficientConfig coeffs = emissions::load_coefficients(cfg.coefficients);
  const emissions::ShareMode share_mode = cfg.share_mode.value_or(coeffs.share_mode.value_or(emissions::ShareMode::Strict));

  RunResult result;
  result.emissions = emissions::emissions_series(panel, coeffs, share_mode);
  result.warnings = result.emissions.warnings;
  const PanelDataset emissions_panel = result.emissions.to_panel();

  result.economy_index = index::composite_index(panel.select(cfg.roles.economy), cfg.index);
  result.emissions_index = index::tcde_index(emissions_panel, cfg.index);
  result.coupling = coupling::ccd_panel(result.economy_index, result.emissions_index);
  result.basin_coupling = coupling::basin_coupling(result.coupling);

  const std::vector<std::string> bad{emissions::kTotalIndicator};
  const dea::DEAPanel dea_panel = dea::DEAPanel::from_panel(panel.merge(emissions_panel), cfg.roles.dea_inputs,
                                                            cfg.roles.dea_good_outputs, bad);
  result.mlpi = dea::compute_mlpi(dea_panel, cfg.mlpi);
  result.mlpi_summary = dea::aggregate(result.mlpi.records);
  result.warnings.insert(result.warnings.end(), result.mlpi.warnings.begin(), result.mlpi.warnings.end());

  const auto points = ekc::ekc_points(result.economy_index, result.emissions_index, cfg.pooling);
  result.ekc = ekc::fit_points(points);

  const bool full = cfg.full_precision;
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("emissions.csv", render([&](auto& os) { emissions::write_emissions_csv(os, result.emissions, full); }));
  files.emplace_back("te_index.csv", render([&](auto& os) { index::write_index_csv(os, result.economy_index, full); }));
  files.emplace_back("te_weights.csv", render([&](auto& os) { index::write_weights_csv(os, result.economy_index, full); }));
  files.emplace_back("tcde_index.csv", render([&](auto& os) { index::write_index_csv(os, result.emissions_index, full); }));
  files.emplace_back("tcde_weights.csv",
                     render([&](auto& os) { index::write_weights_csv(os, result.emissions_index, full); }));
  files.emplace_back("ccd.csv", render([&](auto& os) { coupling::write_ccd_csv(os, result.coupling, full); }));
  files.emplace_back("ccd_basin.csv",
                     render([&](auto& os) { coupling::write_basin_csv(os, result.basin_coupling, full); }));
  files.emplace_back("mlpi.csv", render([&](auto& os) {
                       dea::write_component_csv(os, result.mlpi_summary, dea::Component::MLPI, full);
                     }));
  files.emplace_back("mlpi_components.csv", render([&](auto& os) {
                       dea::write_component_csv(os, result.mlpi_summary, dea::Component::MLTE, full, true);
                       std::ostringstream tail;
                       dea::write_component_csv(tail, result.mlpi_summary, dea::Component::MLTC, full, true);
                       const std::string body = tail.str();
                       os << body.substr(body.find('\n') + 1);  // one shared header
                     }));
  files.emplace_back("mlpi_records.csv",
                     render([&](auto& os) { dea::write_records_csv(os, result.mlpi.records, full); }));
  files.emplace_back("ekc_points.csv", render([&](auto& os) { ekc::write_points_csv(os, points, result.ekc, full); }));
  files.emplace_back("ekc_fit.csv", render([&](auto& os) { ekc::write_fit_csv(os, result.ekc, cfg.pooling, full); }));

  nlohmann::ordered_json manifest;
  manifest["tool"] = "lct";
  manifest["version"] = std::string(version());
  manifest["inputs"]["panel"] = {{"path", cfg.input.generic_string()}, {"sha256", sha256_file(cfg.input)}};
  manifest["inputs"]["coefficients"] = {{"path", cfg.coefficients.generic_string()},
                                        {"sha256", sha256_file(cfg.coefficients)}};
  auto& c = manifest["config"];
  c["format"] = cfg.format == PanelFormat::Long ? "long" : "wide";
  c["imputation"] = imputation_name(cfg.imputation);
  c["method"] = std::string(index::to_string(cfg.index.method));
  c["offset"] = cfg.index.offset;
  c["weight_source"] = cfg.index.weight_source == index::WeightSource::Standardized ? "standardized" : "improved";
  c["constant_columns"] = cfg.index.constants == index::ConstantPolicy::Strict ? "strict" : "lenient";
  c["share_mode"] = share_mode_name(share_mode);
  c["pooling"] = std::string(ekc::to_string(cfg.pooling));
  c["full_precision"] = cfg.full_precision;
  c["roles"] = {{"economy", cfg.roles.economy},
                {"dea_inputs", cfg.roles.dea_inputs},
                {"dea_good_outputs", cfg.roles.dea_good_outputs},
                {"dea_bad_outputs", bad}};
  c["lp_tolerances"] = {{"feasibility", cfg.mlpi.tolerances.feasibility},
                        {"optimality", cfg.mlpi.tolerances.optimality},
                        {"pivot", cfg.mlpi.tolerances.pivot}};
  auto& outs = manifest["outputs"];
  outs = nlohmann::ordered_json::array();
  for (const auto& [name, body] : files) outs.push_back({{"file", name}, {"sha256", sha256_hex(body)}});
  manifest["warnings"] = result.warnings;

  for (const auto& [name, body] : files) {
    write_file(cfg.output_dir / name, body);
    result.outputs.push_back(cfg.output_dir / name);
  }
  write_file(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");
  result.outputs.push_back(cfg.output_dir / "manifest.json");
  return result;
}

}  // namespace lct::pipeline
