#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "expect_error.hpp"
#include "lct/fixture.hpp"
#include "lct/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lct;

namespace {

const fs::path kData = LCT_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lct_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  pipeline::RunConfig config(const std::string& out, const std::string& panel = "panel.csv") const {
    pipeline::RunConfig cfg;
    cfg.input = kData / panel;
    cfg.coefficients = kData / "coefficients.json";
    cfg.output_dir = dir_ / out;
    return cfg;
  }

  fs::path dir_;
};

}  // namespace

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(pipeline::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(pipeline::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_F(PipelineTest, BundledFixtureProducesEveryOutput) {
  const auto result = pipeline::run_pipeline(config("a"));
  const char* expected[] = {"emissions.csv",  "te_index.csv",        "te_weights.csv",   "tcde_index.csv",
                            "tcde_weights.csv", "ccd.csv",           "ccd_basin.csv",    "mlpi.csv",
                            "mlpi_components.csv", "mlpi_records.csv", "ekc_points.csv", "ekc_fit.csv",
                            "manifest.json"};
  for (const char* name : expected) EXPECT_TRUE(fs::exists(dir_ / "a" / name)) << name;
  EXPECT_EQ(result.outputs.size(), std::size(expected));
  EXPECT_EQ(result.coupling.size(), 2u);
  EXPECT_EQ(result.mlpi.records.size(), 6u);
}

TEST_F(PipelineTest, RerunIsByteIdentical) {
  pipeline::run_pipeline(config("a"));
  pipeline::run_pipeline(config("b"));
  for (const auto& entry : fs::directory_iterator(dir_ / "a"))
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / entry.path().filename())) << entry.path().filename();
}

TEST_F(PipelineTest, ManifestRecordsInputsConfigAndOutputs) {
  pipeline::run_pipeline(config("a"));
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(manifest["version"], std::string(pipeline::version()));
  EXPECT_EQ(manifest["inputs"]["panel"]["sha256"], pipeline::sha256_file(kData / "panel.csv"));
  EXPECT_EQ(manifest["config"]["method"], "improved");
  EXPECT_EQ(manifest["config"]["offset"], 0.00001);
  EXPECT_EQ(manifest["outputs"].size(), 12u);
  for (const auto& o : manifest["outputs"])
    EXPECT_EQ(o["sha256"], pipeline::sha256_file(dir_ / "a" / o["file"].get<std::string>()));
}

TEST_F(PipelineTest, NanCellIsReportedWithItsKey) {
  try {
    pipeline::run_pipeline(config("a", "panel_nan.csv"));
    FAIL() << "expected NonFinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
    EXPECT_EQ(e.module(), "panel_core");
    EXPECT_NE(e.detail().find("region_2"), std::string::npos);
    EXPECT_NE(e.detail().find("2002"), std::string::npos);
    EXPECT_NE(e.detail().find("hotel_beds"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(dir_ / "a" / "manifest.json"));
}

TEST_F(PipelineTest, IdenticalIndicesCoupleperfectly) {
  const auto result = pipeline::run_pipeline(config("a"));
  const auto same = coupling::ccd_panel(result.economy_index, result.economy_index);
  for (const auto& s : same)
    for (const auto& r : s.results) EXPECT_EQ(r.c, 1.0);
}

TEST(Fixture, SeedDeterminesPanel) {
  EXPECT_EQ(fixture::generate({3, 5, 2000, 42}).panel, fixture::generate({3, 5, 2000, 42}).panel);
  EXPECT_NE(fixture::generate({3, 5, 2000, 42}).panel, fixture::generate({3, 5, 2000, 43}).panel);
  EXPECT_THROW(fixture::generate({0, 5, 2000, 1}), Error);
  const auto fx = fixture::generate({2, 4, 2000, 1});
  EXPECT_NE(fx.coefficients_json.find("illustrative"), std::string::npos);
}

TEST(Fixture, BundledDataMatchesGenerator) {
  std::ostringstream out;
  write_panel_long(out, fixture::generate({2, 4, 2000, 1}).panel, true);
  EXPECT_EQ(out.str(), slurp(kData / "panel.csv"));
  EXPECT_EQ(fixture::illustrative_coefficients_json(), slurp(kData / "coefficients.json"));
}
