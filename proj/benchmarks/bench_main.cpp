#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "lct/dea.hpp"
#include "lct/emissions.hpp"
#include "lct/fixture.hpp"
#include "lct/index.hpp"
#include "lct/lp.hpp"

namespace {

lct::lp::LinearProgram random_program(std::size_t vars, std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.1, 10.0);
  lct::lp::LinearProgram lp;
  for (std::size_t j = 0; j < vars; ++j) lp.objective.push_back(coef(rng));
  for (std::size_t i = 0; i < rows; ++i) {
    lct::lp::Constraint c;
    for (std::size_t j = 0; j < vars; ++j) c.coefficients.push_back(coef(rng));
    c.rhs = 100.0 * coef(rng);
    lp.constraints.push_back(std::move(c));
  }
  return lp;
}

lct::dea::DEAPanel fixture_dea(std::size_t regions, std::size_t years) {
  const auto fx = lct::fixture::generate({regions, years, 2000, 1});
  std::istringstream coeffs(fx.coefficients_json);
  const auto table = lct::emissions::emissions_series(fx.panel, lct::emissions::parse_coefficients(coeffs));
  const std::vector<std::string> inputs{"tourism_practitioners", "fixed_asset_investment", "energy_consumption"};
  const std::vector<std::string> goods{"tourist_arrivals", "tourism_revenue"};
  const std::vector<std::string> bads{lct::emissions::kTotalIndicator};
  return lct::dea::DEAPanel::from_panel(fx.panel.merge(table.to_panel()), inputs, goods, bads);
}

void BM_Simplex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto lp = random_program(n, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lct::lp::solve(lp));
}
BENCHMARK(BM_Simplex)->Arg(10)->Arg(40)->Arg(160);

void BM_EntropyIndex(benchmark::State& state) {
  const auto years = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1.0, 100.0);
  lct::Matrix raw(years, 6);
  for (std::size_t i = 0; i < years; ++i)
    for (std::size_t j = 0; j < 6; ++j) raw(i, j) = u(rng);
  const std::vector<lct::Attribute> tags(6, lct::Attribute::Positive);
  for (auto _ : state) benchmark::DoNotOptimize(lct::index::composite_index(raw, tags));
}
BENCHMARK(BM_EntropyIndex)->Arg(20)->Arg(1000);

void BM_Mlpi(benchmark::State& state) {
  const auto panel = fixture_dea(9, 20);
  lct::dea::MLPIOptions options;
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lct::dea::compute_mlpi(panel, options));
}
BENCHMARK(BM_Mlpi)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
