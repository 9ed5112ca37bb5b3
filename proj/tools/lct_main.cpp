// lct: command-line front end for the low-carbon tourism toolkit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lct/coupling.hpp"
#include "lct/dea.hpp"
#include "lct/ekc.hpp"
#include "lct/emissions.hpp"
#include "lct/error.hpp"
#include "lct/fixture.hpp"
#include "lct/index.hpp"
#include "lct/panel.hpp"
#include "lct/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lct;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string input;
  std::string coeffs;
  std::string out = ".";
  std::string format = "long";
  std::string imputation = "none";
  std::string method = "improved";
  double offset = index::kDefaultOffset;
  bool lenient_constants = false;
  bool strict_shares = false;
  bool renormalize_shares = false;
  bool warn_shares = false;
  bool full_precision = false;
  std::vector<std::string> negative;
  bool basin_mean = false;
  unsigned threads = 1;
  double feasibility_tol = lp::Tolerances{}.feasibility;
  double optimality_tol = lp::Tolerances{}.optimality;
  double pivot_tol = lp::Tolerances{}.pivot;
  std::string te;
  std::string tcde;
  std::string emissions;
  std::string dump_tableaus;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("lct");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("LCT_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

template <class Fn>
void emit(const fs::path& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  pipeline::write_file(path, os.str());
  spdlog::info("wrote {}", path.string());
}

PanelSchema panel_schema(const Common& c) {
  PanelSchema s;
  if (c.format == "long") {
    s.format = PanelFormat::Long;
  } else if (c.format == "wide") {
    s.format = PanelFormat::Wide;
  } else {
    fail(ErrorCode::InvalidConfig, "report_cli", "--format must be long or wide");
  }
  const auto imp = parse_imputation(c.imputation);
  if (!imp) fail(ErrorCode::InvalidConfig, "report_cli", "unknown imputation '" + c.imputation + "'");
  s.imputation = *imp;
  for (const auto& name : c.negative) s.attributes[name] = Attribute::Negative;
  return s;
}

index::IndexOptions index_options(const Common& c) {
  index::IndexOptions o;
  if (c.method == "improved") {
    o.method = index::Method::Improved;
  } else if (c.method == "classic") {
    o.method = index::Method::Classic;
  } else {
    fail(ErrorCode::InvalidConfig, "report_cli", "--method must be classic or improved");
  }
  if (!(c.offset > 0.0)) fail(ErrorCode::NonPositiveOffset, "report_cli", "--offset must be > 0");
  o.offset = c.offset;
  o.constants = c.lenient_constants ? index::ConstantPolicy::Lenient : index::ConstantPolicy::Strict;
  return o;
}

std::optional<emissions::ShareMode> share_mode(const Common& c) {
  if (c.renormalize_shares) return emissions::ShareMode::Renormalize;
  if (c.warn_shares) return emissions::ShareMode::WarnOnly;
  if (c.strict_shares) return emissions::ShareMode::Strict;
  return std::nullopt;
}

dea::MLPIOptions mlpi_options(const Common& c) {
  dea::MLPIOptions o;
  if (!(c.feasibility_tol > 0.0) || !(c.optimality_tol > 0.0) || !(c.pivot_tol > 0.0)) {
    fail(ErrorCode::InvalidConfig, "report_cli", "tolerances must be > 0");
  }
  o.tolerances.feasibility = c.feasibility_tol;
  o.tolerances.optimality = c.optimality_tol;
  o.tolerances.pivot = c.pivot_tol;
  o.threads = c.threads == 0 ? 1 : c.threads;
  return o;
}

ekc::Pooling pooling(const Common& c) { return c.basin_mean ? ekc::Pooling::BasinMean : ekc::Pooling::Pooled; }

std::vector<index::IndexSeries> load_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "report_cli", "cannot open " + path);
  return index::read_index_csv(in);
}

PanelDataset load_emissions_panel(const std::string& path) {
  PanelSchema s;
  s.format = PanelFormat::Wide;
  s.indicators = {emissions::kTotalIndicator};
  return load_panel(path, s);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) fail(ErrorCode::InvalidConfig, "report_cli", std::string(flag) + " is required");
}

void log_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) spdlog::warn("{}", w);
}

void cmd_emissions(const Common& c) {
  require(c.input, "--input");
  require(c.coeffs, "--coeffs");
  const PanelDataset panel = load_panel(c.input, panel_schema(c));
  const auto coeffs = emissions::load_coefficients(c.coeffs);
  const auto mode = share_mode(c).value_or(coeffs.share_mode.value_or(emissions::ShareMode::Strict));
  const auto table = emissions::emissions_series(panel, coeffs, mode);
  log_warnings(table.warnings);
  emit(fs::path(c.out) / "emissions.csv", [&](auto& os) { emissions::write_emissions_csv(os, table, c.full_precision); });
}

void cmd_index(const Common& c) {
  if (c.input.empty() && c.emissions.empty()) {
    fail(ErrorCode::InvalidConfig, "report_cli", "index needs --input and/or --emissions");
  }
  const auto opts = index_options(c);
  if (!c.input.empty()) {
    const PanelDataset panel = load_panel(c.input, panel_schema(c));
    const pipeline::IndicatorRoles roles;
    const PanelDataset economy = panel.find_indicator(roles.economy.front()) ? panel.select(roles.economy) : panel;
    const auto series = index::composite_index(economy, opts);
    emit(fs::path(c.out) / "te_index.csv", [&](auto& os) { index::write_index_csv(os, series, c.full_precision); });
    emit(fs::path(c.out) / "te_weights.csv",
         [&](auto& os) { index::write_weights_csv(os, series, c.full_precision); });
  }
  if (!c.emissions.empty()) {
    const auto series = index::tcde_index(load_emissions_panel(c.emissions), opts);
    emit(fs::path(c.out) / "tcde_index.csv", [&](auto& os) { index::write_index_csv(os, series, c.full_precision); });
    emit(fs::path(c.out) / "tcde_weights.csv",
         [&](auto& os) { index::write_weights_csv(os, series, c.full_precision); });
  }
}

void cmd_ccd(const Common& c) {
  require(c.te, "--te");
  require(c.tcde, "--tcde");
  const auto series = coupling::ccd_panel(load_index(c.te), load_index(c.tcde));
  const auto basin = coupling::basin_coupling(series);
  emit(fs::path(c.out) / "ccd.csv", [&](auto& os) { coupling::write_ccd_csv(os, series, c.full_precision); });
  emit(fs::path(c.out) / "ccd_basin.csv", [&](auto& os) { coupling::write_basin_csv(os, basin, c.full_precision); });
}

void cmd_mlpi(const Common& c) {
  require(c.input, "--input");
  require(c.emissions, "--emissions");
  const PanelDataset panel = load_panel(c.input, panel_schema(c)).merge(load_emissions_panel(c.emissions));
  const pipeline::IndicatorRoles roles;
  const std::vector<std::string> bad{emissions::kTotalIndicator};
  const auto dea_panel = dea::DEAPanel::from_panel(panel, roles.dea_inputs, roles.dea_good_outputs, bad);
  const auto opts = mlpi_options(c);

  if (!c.dump_tableaus.empty()) {
    std::ofstream trace(c.dump_tableaus);
    if (!trace) fail(ErrorCode::Io, "report_cli", "cannot write " + c.dump_tableaus);
    const auto& periods = dea_panel.periods();
    for (std::size_t t = 0; t + 1 < periods.size(); ++t) {
      for (std::size_t k = 0; k < dea_panel.dmus().size(); ++k) {
        const std::pair<std::size_t, std::size_t> pairs[] = {{t, t}, {t + 1, t + 1}, {t, t + 1}, {t + 1, t}};
        for (const auto& [obs, tech] : pairs) {
          trace << "# dmu " << dea_panel.dmus()[k] << " obs " << periods[obs] << " tech " << periods[tech] << '\n';
          dea::ddf(dea_panel, k, obs, tech, opts.tolerances, &trace);
        }
      }
    }
  }

  const auto table = dea::compute_mlpi(dea_panel, opts);
  log_warnings(table.warnings);
  const auto agg = dea::aggregate(table.records);
  emit(fs::path(c.out) / "mlpi.csv",
       [&](auto& os) { dea::write_component_csv(os, agg, dea::Component::MLPI, c.full_precision); });
  emit(fs::path(c.out) / "mlpi_components.csv", [&](auto& os) {
    dea::write_component_csv(os, agg, dea::Component::MLTE, c.full_precision, true);
    std::ostringstream tail;
    dea::write_component_csv(tail, agg, dea::Component::MLTC, c.full_precision, true);
    const std::string body = tail.str();
    os << body.substr(body.find('\n') + 1);
  });
  emit(fs::path(c.out) / "mlpi_records.csv",
       [&](auto& os) { dea::write_records_csv(os, table.records, c.full_precision); });
}

void cmd_ekc(const Common& c) {
  require(c.te, "--te");
  require(c.tcde, "--tcde");
  const auto points = ekc::ekc_points(load_index(c.te), load_index(c.tcde), pooling(c));
  const auto fit = ekc::fit_points(points);
  spdlog::info("EKC shape: {}", ekc::to_string(fit.shape));
  emit(fs::path(c.out) / "ekc_points.csv",
       [&](auto& os) { ekc::write_points_csv(os, points, fit, c.full_precision); });
  emit(fs::path(c.out) / "ekc_fit.csv",
       [&](auto& os) { ekc::write_fit_csv(os, fit, pooling(c), c.full_precision); });
}

void cmd_run(const Common& c) {
  require(c.input, "--input");
  require(c.coeffs, "--coeffs");
  pipeline::RunConfig cfg;
  const PanelSchema schema = panel_schema(c);
  cfg.input = c.input;
  cfg.format = schema.format;
  cfg.imputation = schema.imputation;
  cfg.attributes = schema.attributes;
  cfg.coefficients = c.coeffs;
  cfg.output_dir = c.out;
  cfg.index = index_options(c);
  cfg.share_mode = share_mode(c);
  cfg.mlpi = mlpi_options(c);
  cfg.pooling = pooling(c);
  cfg.full_precision = c.full_precision;
  const auto result = pipeline::run_pipeline(cfg);
  log_warnings(result.warnings);
  for (const auto& p : result.outputs) spdlog::info("wrote {}", p.string());
  spdlog::info("EKC shape: {}", ekc::to_string(result.ekc.shape));
}

void cmd_gen_fixture(const Common& c, const fixture::FixtureOptions& opts) {
  const auto fx = fixture::generate(opts);
  emit(fs::path(c.out) / "panel.csv", [&](auto& os) { write_panel_long(os, fx.panel, true); });
  emit(fs::path(c.out) / "coefficients.json", [&](auto& os) { os << fx.coefficients_json; });
}

void add_panel_options(CLI::App* app, Common& c) {
  app->add_option("--input", c.input, "Panel CSV");
  app->add_option("--format", c.format, "Panel layout: long or wide")->check(CLI::IsMember({"long", "wide"}));
  app->add_option("--impute", c.imputation, "Gap filling: none, forward-fill or linear");
  app->add_option("--negative", c.negative, "Indicator with negative attribute (repeatable)");
}

void add_index_options(CLI::App* app, Common& c) {
  app->add_option("--method", c.method, "Index method: classic or improved")
      ->check(CLI::IsMember({"classic", "improved"}));
  app->add_option("--offset", c.offset, "Standardization offset");
  app->add_flag("--lenient-constants", c.lenient_constants, "Give constant indicators zero weight");
}

void add_share_options(CLI::App* app, Common& c) {
  auto* strict = app->add_flag("--strict-shares", c.strict_shares, "Reject shares that do not sum to 1");
  auto* renorm = app->add_flag("--renormalize-shares", c.renormalize_shares, "Rescale shares to sum to 1");
  auto* warn = app->add_flag("--warn-shares", c.warn_shares, "Accept unnormalized shares with a warning");
  strict->excludes(renorm)->excludes(warn);
  renorm->excludes(warn);
}

void add_lp_options(CLI::App* app, Common& c) {
  app->add_option("--threads", c.threads, "Worker threads for distance solves");
  app->add_option("--feasibility-tol", c.feasibility_tol, "LP feasibility tolerance");
  app->add_option("--optimality-tol", c.optimality_tol, "LP optimality tolerance");
  app->add_option("--pivot-tol", c.pivot_tol, "LP pivot tolerance");
}

void add_pooling_options(CLI::App* app, Common& c) {
  auto* pooled = app->add_flag("--pooled", "Fit every region-year point (default)");
  auto* basin = app->add_flag("--basin-mean", c.basin_mean, "Fit one basin-mean point per year");
  pooled->excludes(basin);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Low-carbon tourism analytics: emissions, indices, coupling, productivity, EKC"};
  app.set_version_flag("--version", std::string(pipeline::version()));
  app.require_subcommand(1);
  Common c;
  fixture::FixtureOptions fx;

  auto* emissions_cmd = app.add_subcommand("emissions", "Bottom-up CO2 per region and year");
  add_panel_options(emissions_cmd, c);
  emissions_cmd->add_option("--coeffs", c.coeffs, "Coefficient JSON");
  add_share_options(emissions_cmd, c);

  auto* index_cmd = app.add_subcommand("index", "Entropy-weighted economy and emission indices");
  add_panel_options(index_cmd, c);
  index_cmd->add_option("--emissions", c.emissions, "emissions.csv from the emissions stage");
  add_index_options(index_cmd, c);

  auto* ccd_cmd = app.add_subcommand("ccd", "Coupling and coordination degree");
  ccd_cmd->add_option("--te", c.te, "Economy index CSV");
  ccd_cmd->add_option("--tcde", c.tcde, "Emission index CSV");

  auto* mlpi_cmd = app.add_subcommand("mlpi", "Malmquist-Luenberger productivity index");
  add_panel_options(mlpi_cmd, c);
  mlpi_cmd->add_option("--emissions", c.emissions, "emissions.csv from the emissions stage");
  add_lp_options(mlpi_cmd, c);
  mlpi_cmd->add_option("--dump-tableaus", c.dump_tableaus, "Write every simplex tableau to this file");

  auto* ekc_cmd = app.add_subcommand("ekc", "Quadratic EKC fit of emission index on economy index");
  ekc_cmd->add_option("--te", c.te, "Economy index CSV");
  ekc_cmd->add_option("--tcde", c.tcde, "Emission index CSV");
  add_pooling_options(ekc_cmd, c);

  auto* run_cmd = app.add_subcommand("run", "Full pipeline with a run manifest");
  add_panel_options(run_cmd, c);
  run_cmd->add_option("--coeffs", c.coeffs, "Coefficient JSON");
  add_index_options(run_cmd, c);
  add_share_options(run_cmd, c);
  add_lp_options(run_cmd, c);
  add_pooling_options(run_cmd, c);

  auto* gen_cmd = app.add_subcommand("gen-fixture", "Write a synthetic panel and matching coefficients");
  gen_cmd->add_option("--seed", fx.seed, "Random seed");
  gen_cmd->add_option("--regions", fx.regions, "Number of regions")->check(CLI::Range(1, 1000));
  gen_cmd->add_option("--years", fx.years, "Number of years")->check(CLI::Range(2, 1000));
  gen_cmd->add_option("--first-year", fx.first_year, "First year");

  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--out", c.out, "Output directory");
    sub->add_flag("--full-precision", c.full_precision, "Write 17 significant digits");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (emissions_cmd->parsed()) cmd_emissions(c);
    if (index_cmd->parsed()) cmd_index(c);
    if (ccd_cmd->parsed()) cmd_ccd(c);
    if (mlpi_cmd->parsed()) cmd_mlpi(c);
    if (ekc_cmd->parsed()) cmd_ekc(c);
    if (run_cmd->parsed()) cmd_run(c);
    if (gen_cmd->parsed()) cmd_gen_fixture(c, fx);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.category() == ErrorCategory::Numerical ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  }
  return 0;
}
