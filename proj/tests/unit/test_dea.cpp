#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "lct/dea.hpp"
#include "oracles.hpp"

using namespace lct;
using namespace lct::dea;

namespace {

Observation obs(double x, double y, double b) { return {{x}, {y}, {b}}; }

oracle::Activity activity(const Observation& o) { return {o.inputs, o.good_outputs, o.bad_outputs}; }

std::vector<oracle::Activity> technology(const DEAPanel& p, std::size_t period) {
  std::vector<oracle::Activity> t;
  for (std::size_t d = 0; d < p.dmus().size(); ++d) t.push_back(activity(p.at(d, period)));
  return t;
}

DEAPanel random_panel(std::mt19937_64& rng, std::size_t dmus, std::size_t periods, std::size_t inputs = 2,
                      std::size_t goods = 1, std::size_t bads = 1) {
  std::vector<std::string> names;
  std::vector<int> years;
  for (std::size_t d = 0; d < dmus; ++d) names.push_back("d" + std::to_string(d));
  for (std::size_t t = 0; t < periods; ++t) years.push_back(2000 + static_cast<int>(t));
  std::vector<Observation> all;
  for (std::size_t d = 0; d < dmus; ++d) {
    Observation o;
    for (std::size_t i = 0; i < inputs; ++i) o.inputs.push_back(oracle::uniform(rng, 1, 10));
    for (std::size_t i = 0; i < goods; ++i) o.good_outputs.push_back(oracle::uniform(rng, 1, 10));
    for (std::size_t i = 0; i < bads; ++i) o.bad_outputs.push_back(oracle::uniform(rng, 1, 10));
    for (std::size_t t = 0; t < periods; ++t) {
      all.push_back(o);
      for (auto* v : {&o.inputs, &o.good_outputs, &o.bad_outputs})
        for (double& x : *v) x *= oracle::uniform(rng, 0.9, 1.15);
    }
  }
  return {names, years, all};
}

MLPIRecord record(std::string dmu, int from, double mlpi, bool feasible = true) {
  MLPIRecord r;
  r.dmu = std::move(dmu);
  r.from_period = from;
  r.to_period = from + 1;
  r.mlpi = r.mltc = mlpi;
  r.mlte = 1.0;
  r.feasible_t1_t = feasible;
  if (!feasible) r.mlpi = r.mltc = std::nan("");
  return r;
}

}  // namespace

TEST(DEAPanel, Validation) {
  EXPECT_LCT_ERROR(DEAPanel({"a"}, {1}, {obs(0, 1, 1)}), ErrorCode::NonPositiveValue);
  EXPECT_LCT_ERROR(DEAPanel({"a"}, {1}, {}), ErrorCode::DimensionMismatch);
  EXPECT_LCT_ERROR(DEAPanel({"a", "b"}, {1}, {obs(1, 1, 1), {{1, 2}, {1}, {1}}}), ErrorCode::DimensionMismatch);
  const DEAPanel p({"a"}, {5, 7}, {obs(1, 1, 1), obs(2, 2, 2)});
  EXPECT_EQ(p.period_index(7), 1u);
  EXPECT_THROW(p.dmu_index("z"), Error);
}

TEST(DEAPanel, FromPanelPicksRoles) {
  const PanelDataset panel({"a", "b"}, {1, 2}, {{"x"}, {"y"}, {"q"}}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  const std::vector<std::string> x{"x"}, y{"y"}, q{"q"};
  const auto p = DEAPanel::from_panel(panel, x, y, q);
  EXPECT_EQ(p.at(1, 0).inputs[0], 7.0);
  EXPECT_EQ(p.at(1, 0).good_outputs[0], 8.0);
  EXPECT_EQ(p.at(1, 1).bad_outputs[0], 12.0);
}

TEST(Ddf, SingleDmuOwnPeriodIsZero) {
  const DEAPanel p({"a"}, {1}, {obs(3, 5, 2)});
  const auto r = ddf(p, 0, 0, 0);
  EXPECT_TRUE(r.feasible);
  EXPECT_NEAR(r.beta, 0.0, 1e-12);
}

TEST(Ddf, HandDerivedTwoDmuInstance) {
  const DEAPanel p({"A", "B"}, {1}, {obs(1, 1, 1), obs(1, 2, 1)});
  const auto a = ddf(p, 0, 0, 0);
  EXPECT_NEAR(a.beta, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(*oracle::ddf(technology(p, 0), activity(p.at(0, 0))), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(ddf(p, 1, 0, 0).beta, 0.0, 1e-12);
}

TEST(Ddf, DuplicateDmusShareBeta) {
  const DEAPanel p({"A", "B", "C"}, {1}, {obs(1, 1, 1), obs(1, 2, 1), obs(1, 1, 1)});
  EXPECT_NEAR(ddf(p, 0, 0, 0).beta, ddf(p, 2, 0, 0).beta, 1e-12);
}

TEST(Ddf, MatchesVertexEnumerationOnSmallPanels) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dmus = static_cast<std::size_t>(oracle::uniform_int(rng, 1, 3));
    const auto p = random_panel(rng, dmus, 2, 1, 1, 1);
    for (std::size_t d = 0; d < dmus; ++d)
      for (std::size_t o = 0; o < 2; ++o)
        for (std::size_t t = 0; t < 2; ++t) {
          const auto want = oracle::ddf(technology(p, t), activity(p.at(d, o)));
          if (o == t) {
            ASSERT_TRUE(want);
          }
          if (!want) {
            EXPECT_FALSE(ddf(p, d, o, t).feasible);
            continue;
          }
          const auto got = ddf(p, d, o, t);
          ASSERT_TRUE(got.feasible);
          EXPECT_NEAR(got.beta, *want, 1e-6);
        }
  }
}

TEST(Ddf, OwnPeriodAlwaysFeasibleAndNonNegative) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_panel(rng, 6, 2, 3, 2, 1);
    for (std::size_t d = 0; d < 6; ++d) {
      const auto r = ddf(p, d, 1, 1);
      EXPECT_TRUE(r.feasible);
      EXPECT_GE(r.beta, 0.0);
    }
  }
}

TEST(Ddf, MoreGoodOutputDoesNotRaiseOwnBeta) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_panel(rng, 5, 1, 2, 2, 1);
    const std::size_t d = static_cast<std::size_t>(oracle::uniform_int(rng, 0, 4));
    std::vector<Observation> all;
    for (std::size_t k = 0; k < 5; ++k) all.push_back(p.at(k, 0));
    all[d].good_outputs[0] *= oracle::uniform(rng, 1.0, 1.5);
    const DEAPanel q(p.dmus(), p.periods(), all);
    EXPECT_LE(ddf(q, d, 0, 0).beta, ddf(p, d, 0, 0).beta + 1e-9);
  }
}

TEST(Mlpi, StationaryPanelIsOne) {
  std::mt19937_64 rng(1);
  const auto base = random_panel(rng, 5, 1);
  std::vector<Observation> all;
  for (std::size_t d = 0; d < 5; ++d) all.insert(all.end(), {base.at(d, 0), base.at(d, 0)});
  const DEAPanel p(base.dmus(), {2000, 2001}, all);
  for (std::size_t d = 0; d < 5; ++d) {
    const auto r = mlpi_transition(p, d, 0);
    EXPECT_NEAR(r.mlpi, 1.0, 1e-9);
    EXPECT_NEAR(r.mlte, 1.0, 1e-9);
    EXPECT_NEAR(r.mltc, 1.0, 1e-9);
  }
}

TEST(Mlpi, ComposesOracleDistances) {
  std::mt19937_64 rng(31);
  int fully_feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_panel(rng, 2, 2, 1, 1, 1);
    for (std::size_t d = 0; d < 2; ++d) {
      const auto o = [&](std::size_t tech, std::size_t period) {
        return oracle::ddf(technology(p, tech), activity(p.at(d, period)));
      };
      const auto tt = o(0, 0), t1t1 = o(1, 1), t_t1 = o(0, 1), t1_t = o(1, 0);
      ASSERT_TRUE(tt && t1t1);
      const auto r = mlpi_transition(p, p.dmus()[d], 2000, 2001);
      EXPECT_EQ(r.feasible_t_t1, t_t1.has_value());
      EXPECT_EQ(r.feasible_t1_t, t1_t.has_value());
      EXPECT_NEAR(r.d_tt, *tt, 1e-9);
      EXPECT_NEAR(r.d_t1t1, *t1t1, 1e-9);
      EXPECT_NEAR(r.mlte, (1 + *tt) / (1 + *t1t1), 1e-9);
      if (!t_t1 || !t1_t) {
        EXPECT_TRUE(std::isnan(r.mlpi));
        continue;
      }
      ++fully_feasible;
      EXPECT_NEAR(r.d_t_t1, *t_t1, 1e-9);
      EXPECT_NEAR(r.d_t1_t, *t1_t, 1e-9);
      EXPECT_NEAR(r.mlpi, std::sqrt((1 + *tt) * (1 + *t1_t) / ((1 + *t_t1) * (1 + *t1t1))), 1e-9);
      EXPECT_NEAR(r.mltc, std::sqrt((1 + *t1_t) * (1 + *t1t1) / ((1 + *tt) * (1 + *t_t1))), 1e-9);
    }
  }
  EXPECT_GE(fully_feasible, 20);
}

TEST(Mlpi, YearKeyedTransitionNeedsAdjacentYears) {
  const DEAPanel p({"A"}, {1, 2, 3}, {obs(1, 1, 1), obs(1, 1, 1), obs(1, 1, 1)});
  EXPECT_NO_THROW(mlpi_transition(p, "A", 2, 3));
  EXPECT_LCT_ERROR(mlpi_transition(p, "A", 2, 1), ErrorCode::InvalidPeriod);
  EXPECT_LCT_ERROR(mlpi_transition(p, "A", 1, 3), ErrorCode::InvalidPeriod);
}

TEST(Mlpi, RescalingADimensionChangesNothing) {
  std::mt19937_64 rng(17);
  const auto p = random_panel(rng, 6, 2, 2, 2, 1);
  for (int group = 0; group < 3; ++group) {
    std::vector<Observation> all;
    for (std::size_t d = 0; d < 6; ++d)
      for (std::size_t t = 0; t < 2; ++t) {
        Observation o = p.at(d, t);
        (group == 0 ? o.inputs : group == 1 ? o.good_outputs : o.bad_outputs)[0] *= 10.0;
        all.push_back(o);
      }
    const DEAPanel q(p.dmus(), p.periods(), all);
    for (std::size_t d = 0; d < 6; ++d) {
      const auto a = mlpi_transition(p, d, 0), b = mlpi_transition(q, d, 0);
      EXPECT_NEAR(a.d_tt, b.d_tt, 1e-9);
      EXPECT_NEAR(a.mlte, b.mlte, 1e-9);
      if (a.feasible()) {
        EXPECT_NEAR(a.mlpi, b.mlpi, 1e-9);
        EXPECT_NEAR(a.mltc, b.mltc, 1e-9);
      }
    }
  }
}

TEST(Mlpi, DecompositionIdentity) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const auto table = compute_mlpi(random_panel(rng, 9, 3));
    for (const auto& r : table.records) EXPECT_NEAR(r.mlpi, r.mlte * r.mltc, 1e-9 * r.mlpi);
  }
}

TEST(Impute, GeometricMeanOfFeasible) {
  std::vector<MLPIRecord> rs{record("a", 1, 1.0), record("b", 1, 4.0), record("c", 1, 0, false)};
  const auto out = impute_infeasible(rs);
  EXPECT_EQ(out[2].mlpi, 2.0);
  EXPECT_EQ(out[2].mltc, 2.0);
  EXPECT_TRUE(out[2].imputed.mlpi);
  EXPECT_TRUE(out[2].imputed.mltc);
  EXPECT_FALSE(out[0].imputed.any());
}

TEST(Impute, NoInfeasibleIsNoOp) {
  std::vector<MLPIRecord> rs{record("a", 1, 1.1), record("b", 1, 0.9)};
  const auto out = impute_infeasible(rs);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(out[i].mlpi, rs[i].mlpi);
    EXPECT_FALSE(out[i].imputed.any());
  }
}

TEST(Impute, ConstantFeasibleValues) {
  std::vector<MLPIRecord> rs;
  for (int i = 0; i < 9; ++i) rs.push_back(record("d" + std::to_string(i), 1, 1.07, i >= 3 ? true : false));
  std::vector<std::string> warnings;
  const auto out = impute_infeasible(rs, &warnings);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(out[i].mlpi, 1.07, 1e-15);
  EXPECT_TRUE(warnings.empty());
}

TEST(Impute, WarnsWhenMostAreInfeasibleAndFailsWhenAllAre) {
  std::vector<MLPIRecord> rs{record("a", 1, 1.2), record("b", 1, 0, false), record("c", 1, 0, false)};
  std::vector<std::string> warnings;
  impute_infeasible(rs, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  std::vector<MLPIRecord> none{record("a", 1, 0, false)};
  EXPECT_LCT_ERROR(impute_infeasible(none), ErrorCode::AllInfeasible);
}

TEST(Aggregate, Conventions) {
  const std::vector<MLPIRecord> single{record("a", 1, 1.3)};
  const auto one = aggregate(single);
  EXPECT_EQ(one.mlpi.basin[0], 1.3);
  EXPECT_NEAR(one.mlpi.dmu_average[0], 1.3, 1e-15);

  const std::vector<MLPIRecord> rs{record("a", 1, 1.21), record("b", 1, 1.0), record("a", 2, 1.0),
                                   record("b", 2, 1.2)};
  const auto agg = aggregate(rs);
  EXPECT_EQ(agg.transitions.size(), 2u);
  EXPECT_NEAR(agg.mlpi.dmu_average[0], 1.1, 1e-15);
  EXPECT_NEAR(agg.mlpi.basin[0], 1.105, 1e-15);
  EXPECT_NEAR(agg.mlpi.basin[1], 1.1, 1e-15);
  EXPECT_NEAR(agg.mlpi.basin_average, (1.1 + std::sqrt(1.2)) / 2, 1e-15);
  EXPECT_EQ(label(agg.transitions[0]), "1~2");
}

TEST(ComputeMlpi, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(23);
  const auto p = random_panel(rng, 9, 4);
  const auto a = compute_mlpi(p, {{}, 1});
  const auto b = compute_mlpi(p, {{}, 4});
  ASSERT_EQ(a.records.size(), b.records.size());
  std::ostringstream sa, sb;
  write_records_csv(sa, a.records, true);
  write_records_csv(sb, b.records, true);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.records.size(), 27u);
}

TEST(ComputeMlpi, ComponentCsvMarksImputedCells) {
  std::vector<MLPIRecord> rs{record("a", 1, 1.0), record("b", 1, 4.0), record("c", 1, 0, false)};
  const auto agg = aggregate(impute_infeasible(rs));
  std::ostringstream out;
  write_component_csv(out, agg, Component::MLPI);
  EXPECT_NE(out.str().find("c,2,2,1~2*"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("basin,"), std::string::npos);
}
