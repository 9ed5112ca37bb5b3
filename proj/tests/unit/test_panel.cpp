#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "lct/panel.hpp"

using namespace lct;

namespace {

PanelDataset parse(const std::string& text, const PanelSchema& schema = {}) {
  std::istringstream in(text);
  return parse_panel(in, schema);
}

const char* kTwoByTwo =
    "region,year,indicator,value\n"
    "north,2000,gdp,1\n"
    "north,2001,gdp,2\n"
    "south,2000,gdp,3\n"
    "south,2001,gdp,4\n";

PanelDataset small_panel() {
  return PanelDataset({"a", "b", "c"}, {2000, 2001}, {{"x"}, {"y", Attribute::Negative}},
                      {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
}

}  // namespace

TEST(Panel, LoadsWellFormedLongFile) {
  const auto p = parse(kTwoByTwo);
  EXPECT_EQ(p.region_count(), 2u);
  EXPECT_EQ(p.year_count(), 2u);
  EXPECT_EQ(p.indicator_count(), 1u);
  EXPECT_EQ(p.at({"south", 2001}, "gdp"), 4.0);
}

TEST(Panel, MissingRowNamesTheAbsentKey) {
  try {
    parse("region,year,indicator,value\nnorth,2000,gdp,1\nnorth,2001,gdp,2\nsouth,2000,gdp,3\n");
    FAIL() << "expected MissingCell";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCell);
    EXPECT_NE(e.detail().find("south"), std::string::npos);
    EXPECT_NE(e.detail().find("2001"), std::string::npos);
    EXPECT_NE(e.detail().find("gdp"), std::string::npos);
  }
}

TEST(Panel, RejectsNonFiniteAndGarbage) {
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nnorth,2000,gdp,NaN\n"), ErrorCode::NonFinite);
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nnorth,2000,gdp,inf\n"), ErrorCode::NonFinite);
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nnorth,2000,gdp,abc\n"), ErrorCode::NonFinite);
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nnorth,2000,gdp,\n"), ErrorCode::NonFinite);
}

TEST(Panel, RejectsDuplicatesAndBadSchema) {
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nn,2000,g,1\nn,2000,g,2\n"), ErrorCode::DuplicateCell);
  EXPECT_LCT_ERROR(parse("region,year,value\nn,2000,1\n"), ErrorCode::SchemaMismatch);
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nn,twenty,g,1\n"), ErrorCode::SchemaMismatch);
}

TEST(Panel, RowOrderDoesNotMatter) {
  std::vector<std::string> lines;
  std::istringstream in(kTwoByTwo);
  std::string header, line;
  std::getline(in, header);
  while (std::getline(in, line)) lines.push_back(line);
  const auto reference = parse(kTwoByTwo);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string text = header + "\n";
    for (const auto& l : lines) text += l + "\n";
    EXPECT_EQ(parse(text), reference);
  }
}

TEST(Panel, WideFormatKeepsHeaderOrder) {
  PanelSchema s;
  s.format = PanelFormat::Wide;
  const auto p = parse("region,year,zeta,alpha\nb,2001,1,2\na,2001,3,4\nb,2000,5,6\na,2000,7,8\n", s);
  EXPECT_EQ(p.indicator_names(), (std::vector<std::string>{"zeta", "alpha"}));
  EXPECT_EQ(p.regions(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(p.at({"a", 2000}, "alpha"), 8.0);
}

TEST(Panel, DeclaredImputationFillsInteriorGapsOnly) {
  const std::string text =
      "region,year,indicator,value\n"
      "n,2000,g,1\nn,2001,g,\nn,2002,g,\nn,2003,g,7\n";
  PanelSchema s;
  s.imputation = Imputation::Linear;
  const auto lin = parse(text, s);
  EXPECT_DOUBLE_EQ(lin.at({"n", 2001}, "g"), 3.0);
  EXPECT_DOUBLE_EQ(lin.at({"n", 2002}, "g"), 5.0);
  s.imputation = Imputation::ForwardFill;
  EXPECT_EQ(parse(text, s).at({"n", 2002}, "g"), 1.0);

  s.imputation = Imputation::Linear;
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nn,2000,g,\nn,2001,g,1\n", s), ErrorCode::MissingCell);
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nn,2000,g,1\nn,2001,g,\n", s), ErrorCode::MissingCell);
}

TEST(Panel, AttributeColumnAndOverrides) {
  const auto p = parse("region,year,indicator,value,attribute\nn,2000,g,1,-\nn,2000,h,1,positive\n");
  EXPECT_EQ(p.indicators()[p.indicator_index("g")].attribute, Attribute::Negative);
  EXPECT_EQ(p.indicators()[p.indicator_index("h")].attribute, Attribute::Positive);
  EXPECT_LCT_ERROR(parse("region,year,indicator,value,attribute\nn,2000,g,1,-\nn,2001,g,1,+\n"),
                   ErrorCode::SchemaMismatch);
}

TEST(Panel, StrictlyPositiveRequirement) {
  PanelSchema s;
  s.strictly_positive = {"gdp"};
  EXPECT_NO_THROW(parse(kTwoByTwo, s));
  EXPECT_LCT_ERROR(parse("region,year,indicator,value\nn,2000,gdp,0\n", s), ErrorCode::NonPositiveValue);
}

TEST(Panel, SliceHasOneRowPerYear) {
  const auto p = small_panel();
  const Matrix m = p.slice_region("b");
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_EQ(m(1, 0), 7.0);
}

TEST(Panel, SliceThenAssembleIsIdentity) {
  const auto p = small_panel();
  std::vector<Matrix> slices;
  for (const auto& r : p.regions()) slices.push_back(p.slice_region(r));
  EXPECT_EQ(PanelDataset::assemble(p.regions(), p.years(), p.indicators(), slices), p);
}

TEST(Panel, LookupErrors) {
  const auto p = small_panel();
  EXPECT_LCT_ERROR(p.slice_region("nowhere"), ErrorCode::UnknownRegion);
  EXPECT_LCT_ERROR(p.indicator_index("z"), ErrorCode::UnknownIndicator);
  EXPECT_LCT_ERROR(p.year_index(1999), ErrorCode::MissingCell);
}

TEST(Panel, ConstructorValidatesShape) {
  EXPECT_LCT_ERROR(PanelDataset({"a", "a"}, {1}, {{"x"}}, {1, 2}), ErrorCode::SchemaMismatch);
  EXPECT_LCT_ERROR(PanelDataset({"a"}, {2, 1}, {{"x"}}, {1, 2}), ErrorCode::SchemaMismatch);
  EXPECT_LCT_ERROR(PanelDataset({"a"}, {1}, {{"x"}}, {1, 2}), ErrorCode::SchemaMismatch);
  EXPECT_LCT_ERROR(PanelDataset({"a"}, {1}, {{"x"}}, {std::nan("")}), ErrorCode::NonFinite);
}

TEST(Panel, SelectMergeAndAttributes) {
  const auto p = small_panel();
  const std::vector<std::string> pick{"y"};
  const auto y = p.select(pick);
  EXPECT_EQ(y.indicator_count(), 1u);
  EXPECT_EQ(y.at({"c", 2001}, "y"), 12.0);
  const auto merged = p.select(std::vector<std::string>{"x"}).merge(y);
  EXPECT_EQ(merged, p);
  EXPECT_EQ(p.with_attributes({{"x", Attribute::Negative}}).indicators()[0].attribute, Attribute::Negative);
}

TEST(Panel, LongWriterRoundTrips) {
  const auto p = small_panel();
  std::ostringstream out;
  write_panel_long(out, p, true);
  PanelSchema s;
  s.indicators = {"x", "y"};
  s.attributes = {{"y", Attribute::Negative}};
  EXPECT_EQ(parse(out.str(), s), p);
}
