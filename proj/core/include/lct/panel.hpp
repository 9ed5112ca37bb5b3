#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lct/matrix.hpp"

namespace lct {

/// Whether larger values of an indicator are better (positive) or worse.
enum class Attribute { Positive, Negative };

std::string_view to_string(Attribute a) noexcept;
std::optional<Attribute> parse_attribute(std::string_view text) noexcept;

struct Indicator {
  std::string name;
  Attribute attribute = Attribute::Positive;

  bool operator==(const Indicator&) const = default;
};

struct RegionYearKey {
  std::string region;
  int year = 0;

  auto operator<=>(const RegionYearKey&) const = default;
};

/// Regions x years x indicators, dense and immutable. Regions and indicators
/// are uniquely named; years strictly increase but need not be consecutive.
class PanelDataset {
 public:
  PanelDataset() = default;
  /// `values` is region-major: index ((region * years) + year) * indicators + indicator.
  PanelDataset(std::vector<std::string> regions, std::vector<int> years,
               std::vector<Indicator> indicators, std::vector<double> values);

  /// Inverse of slice_region: one years x indicators matrix per region.
  static PanelDataset assemble(std::vector<std::string> regions, std::vector<int> years,
                               std::vector<Indicator> indicators,
                               std::span<const Matrix> slices);

  const std::vector<std::string>& regions() const noexcept { return regions_; }
  const std::vector<int>& years() const noexcept { return years_; }
  const std::vector<Indicator>& indicators() const noexcept { return indicators_; }
  std::vector<std::string> indicator_names() const;

  std::size_t region_count() const noexcept { return regions_.size(); }
  std::size_t year_count() const noexcept { return years_.size(); }
  std::size_t indicator_count() const noexcept { return indicators_.size(); }

  double at(std::size_t region, std::size_t year, std::size_t indicator) const noexcept {
    return values_[(region * years_.size() + year) * indicators_.size() + indicator];
  }
  double at(const RegionYearKey& key, std::string_view indicator) const;

  std::size_t region_index(std::string_view region) const;
  std::size_t year_index(int year) const;
  std::size_t indicator_index(std::string_view name) const;
  std::optional<std::size_t> find_indicator(std::string_view name) const noexcept;

  Matrix slice_region(std::string_view region) const;
  Matrix slice_region(std::size_t region) const;

  /// Keeps only the named indicators, in the given order.
  PanelDataset select(std::span<const std::string> indicator_names) const;
  /// Appends the indicators of `other`, which must share regions and years.
  PanelDataset merge(const PanelDataset& other) const;
  PanelDataset with_attributes(const std::map<std::string, Attribute>& attributes) const;

  /// Throws NonPositiveValue naming the first offending cell.
  void require_positive(std::span<const std::string> indicator_names) const;

  bool operator==(const PanelDataset&) const = default;

 private:
  std::vector<std::string> regions_;
  std::vector<int> years_;
  std::vector<Indicator> indicators_;
  std::vector<double> values_;
};

enum class PanelFormat { Long, Wide };

/// How absent region-year-indicator cells are filled at ingestion. Fill runs
/// along the year axis of each region; leading/trailing gaps are never
/// extrapolated and remain MissingCell errors.
enum class Imputation { None, ForwardFill, Linear };

std::optional<Imputation> parse_imputation(std::string_view text) noexcept;

struct PanelSchema {
  PanelFormat format = PanelFormat::Long;
  std::string region_column = "region";
  std::string year_column = "year";
  std::string indicator_column = "indicator";  // long format only
  std::string value_column = "value";          // long format only
  std::string attribute_column = "attribute";  // optional long-format column

  /// Indicators to keep, in order. Empty: every indicator found, sorted by
  /// name (long) or in header order (wide).
  std::vector<std::string> indicators;
  std::map<std::string, Attribute> attributes;
  std::vector<std::string> strictly_positive;
  Imputation imputation = Imputation::None;
};

/// Rows are canonicalised (regions by name, years ascending), so the row order
/// of the file never affects the result.
PanelDataset load_panel(const std::filesystem::path& path, const PanelSchema& schema = {});
PanelDataset parse_panel(std::istream& in, const PanelSchema& schema = {});

/// Long format: region,year,indicator,value
void write_panel_long(std::ostream& out, const PanelDataset& panel, bool full_precision = false);

}  // namespace lct
