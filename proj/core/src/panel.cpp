#include "lct/panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "lct/csv.hpp"
#include "lct/error.hpp"
#include "lct/format.hpp"

namespace lct {
namespace {

constexpr const char* kModule = "panel_core";

std::string describe(std::string_view region, int year, std::string_view indicator) {
  std::ostringstream os;
  os << "region '" << region << "', year " << year << ", indicator '" << indicator << "'";
  return os.str();
}

template <class T>
void require_unique(const std::vector<T>& names, const char* what) {
  std::set<T> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      std::ostringstream os;
      os << "duplicate " << what << " '" << n << "'";
      fail(ErrorCode::SchemaMismatch, kModule, os.str());
    }
  }
}

}  // namespace

std::string_view to_string(Attribute a) noexcept {
  return a == Attribute::Positive ? "positive" : "negative";
}

std::optional<Attribute> parse_attribute(std::string_view text) noexcept {
  if (text == "positive" || text == "+") return Attribute::Positive;
  if (text == "negative" || text == "-") return Attribute::Negative;
  return std::nullopt;
}

std::optional<Imputation> parse_imputation(std::string_view text) noexcept {
  if (text == "none") return Imputation::None;
  if (text == "forward-fill" || text == "ffill") return Imputation::ForwardFill;
  if (text == "linear") return Imputation::Linear;
  return std::nullopt;
}

PanelDataset::PanelDataset(std::vector<std::string> regions, std::vector<int> years,
                           std::vector<Indicator> indicators, std::vector<double> values)
    : regions_(std::move(regions)),
      years_(std::move(years)),
      indicators_(std::move(indicators)),
      values_(std::move(values)) {
  require_unique(regions_, "region");
  std::vector<std::string> names = indicator_names();
  require_unique(names, "indicator");
  for (std::size_t y = 1; y < years_.size(); ++y) {
    if (years_[y] <= years_[y - 1]) {
      fail(ErrorCode::SchemaMismatch, kModule, "years must be strictly increasing");
    }
  }
  if (values_.size() != regions_.size() * years_.size() * indicators_.size()) {
    fail(ErrorCode::SchemaMismatch, kModule, "value array does not match panel shape");
  }
  for (std::size_t r = 0; r < regions_.size(); ++r)
    for (std::size_t y = 0; y < years_.size(); ++y)
      for (std::size_t i = 0; i < indicators_.size(); ++i)
        if (!std::isfinite(at(r, y, i)))
          fail(ErrorCode::NonFinite, kModule,
               "non-finite value at " + describe(regions_[r], years_[y], indicators_[i].name));
}

PanelDataset PanelDataset::assemble(std::vector<std::string> regions, std::vector<int> years,
                                    std::vector<Indicator> indicators,
                                    std::span<const Matrix> slices) {
  if (slices.size() != regions.size()) {
    fail(ErrorCode::SchemaMismatch, kModule, "one slice per region required");
  }
  std::vector<double> values;
  values.reserve(regions.size() * years.size() * indicators.size());
  for (const Matrix& m : slices) {
    if (m.rows() != years.size() || m.cols() != indicators.size()) {
      fail(ErrorCode::SchemaMismatch, kModule, "slice shape does not match years x indicators");
    }
    values.insert(values.end(), m.data().begin(), m.data().end());
  }
  return {std::move(regions), std::move(years), std::move(indicators), std::move(values)};
}

std::vector<std::string> PanelDataset::indicator_names() const {
  std::vector<std::string> names;
  names.reserve(indicators_.size());
  for (const auto& ind : indicators_) names.push_back(ind.name);
  return names;
}

double PanelDataset::at(const RegionYearKey& key, std::string_view indicator) const {
  return at(region_index(key.region), year_index(key.year), indicator_index(indicator));
}

std::size_t PanelDataset::region_index(std::string_view region) const {
  auto it = std::find(regions_.begin(), regions_.end(), region);
  if (it == regions_.end()) fail(ErrorCode::UnknownRegion, kModule, "unknown region '" + std::string(region) + "'");
  return static_cast<std::size_t>(it - regions_.begin());
}

std::size_t PanelDataset::year_index(int year) const {
  auto it = std::lower_bound(years_.begin(), years_.end(), year);
  if (it == years_.end() || *it != year) {
    fail(ErrorCode::MissingCell, kModule, "year " + std::to_string(year) + " not in panel");
  }
  return static_cast<std::size_t>(it - years_.begin());
}

std::optional<std::size_t> PanelDataset::find_indicator(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < indicators_.size(); ++i)
    if (indicators_[i].name == name) return i;
  return std::nullopt;
}

std::size_t PanelDataset::indicator_index(std::string_view name) const {
  auto idx = find_indicator(name);
  if (!idx) fail(ErrorCode::UnknownIndicator, kModule, "unknown indicator '" + std::string(name) + "'");
  return *idx;
}

Matrix PanelDataset::slice_region(std::string_view region) const {
  return slice_region(region_index(region));
}

Matrix PanelDataset::slice_region(std::size_t region) const {
  Matrix m(years_.size(), indicators_.size());
  for (std::size_t y = 0; y < years_.size(); ++y)
    for (std::size_t i = 0; i < indicators_.size(); ++i) m(y, i) = at(region, y, i);
  return m;
}

PanelDataset PanelDataset::select(std::span<const std::string> indicator_names) const {
  std::vector<std::size_t> cols;
  std::vector<Indicator> picked;
  for (const auto& name : indicator_names) {
    cols.push_back(indicator_index(name));
    picked.push_back(indicators_[cols.back()]);
  }
  std::vector<double> values;
  values.reserve(regions_.size() * years_.size() * cols.size());
  for (std::size_t r = 0; r < regions_.size(); ++r)
    for (std::size_t y = 0; y < years_.size(); ++y)
      for (std::size_t c : cols) values.push_back(at(r, y, c));
  return {regions_, years_, std::move(picked), std::move(values)};
}

PanelDataset PanelDataset::merge(const PanelDataset& other) const {
  if (other.regions_ != regions_) fail(ErrorCode::SchemaMismatch, kModule, "merge: region lists differ");
  if (other.years_ != years_) fail(ErrorCode::SchemaMismatch, kModule, "merge: year lists differ");
  std::vector<Indicator> inds = indicators_;
  inds.insert(inds.end(), other.indicators_.begin(), other.indicators_.end());
  std::vector<double> values;
  values.reserve(regions_.size() * years_.size() * inds.size());
  for (std::size_t r = 0; r < regions_.size(); ++r)
    for (std::size_t y = 0; y < years_.size(); ++y) {
      for (std::size_t i = 0; i < indicators_.size(); ++i) values.push_back(at(r, y, i));
      for (std::size_t i = 0; i < other.indicators_.size(); ++i) values.push_back(other.at(r, y, i));
    }
  return {regions_, years_, std::move(inds), std::move(values)};
}

PanelDataset PanelDataset::with_attributes(const std::map<std::string, Attribute>& attributes) const {
  PanelDataset copy = *this;
  for (auto& ind : copy.indicators_) {
    if (auto it = attributes.find(ind.name); it != attributes.end()) ind.attribute = it->second;
  }
  return copy;
}

void PanelDataset::require_positive(std::span<const std::string> indicator_names) const {
  for (const auto& name : indicator_names) {
    const std::size_t i = indicator_index(name);
    for (std::size_t r = 0; r < regions_.size(); ++r)
      for (std::size_t y = 0; y < years_.size(); ++y)
        if (!(at(r, y, i) > 0.0))
          fail(ErrorCode::NonPositiveValue, kModule,
               "value must be > 0 at " + describe(regions_[r], years_[y], name));
  }
}

namespace {

using Cell = std::optional<double>;

struct Grid {
  std::vector<std::string> regions;
  std::vector<int> years;
  std::vector<std::string> indicators;
  std::vector<Cell> cells;
  std::vector<bool> seen;

  std::size_t index(std::size_t r, std::size_t y, std::size_t i) const {
    return (r * years.size() + y) * indicators.size() + i;
  }
};

std::size_t position(const std::vector<std::string>& v, const std::string& key) {
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), key) - v.begin());
}

std::size_t position(const std::vector<int>& v, int key) {
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), key) - v.begin());
}

// A parsed cell value: nullopt for blank, otherwise the number (maybe non-finite).
Cell parse_cell(const std::string& text, std::string_view region, int year, std::string_view indicator,
                std::size_t line) {
  auto trimmed = std::string_view(text);
  if (trimmed.empty()) return std::nullopt;
  auto v = csv::parse_number(trimmed);
  if (!v) {
    fail(ErrorCode::NonFinite, kModule,
         "unparseable value '" + text + "' at " + describe(region, year, indicator) + " (line " +
             std::to_string(line) + ")");
  }
  if (!std::isfinite(*v)) {
    fail(ErrorCode::NonFinite, kModule,
         "non-finite value '" + text + "' at " + describe(region, year, indicator) + " (line " +
             std::to_string(line) + ")");
  }
  return v;
}

void impute(Grid& g, Imputation mode) {
  const std::size_t ny = g.years.size();
  for (std::size_t r = 0; r < g.regions.size(); ++r) {
    for (std::size_t i = 0; i < g.indicators.size(); ++i) {
      auto cell = [&](std::size_t y) -> Cell& { return g.cells[g.index(r, y, i)]; };
      std::optional<std::size_t> last;
      for (std::size_t y = 0; y < ny; ++y) {
        if (cell(y)) {
          last = y;
          continue;
        }
        if (mode == Imputation::None || !last) continue;
        if (mode == Imputation::ForwardFill) {
          cell(y) = *cell(*last);
          continue;
        }
        std::size_t next = y + 1;
        while (next < ny && !cell(next)) ++next;
        if (next == ny) continue;  // trailing gap: no extrapolation
        const double x0 = g.years[*last], x1 = g.years[next];
        const double v0 = *cell(*last), v1 = *cell(next);
        cell(y) = v0 + (v1 - v0) * (g.years[y] - x0) / (x1 - x0);
      }
    }
  }
}

PanelDataset finish(Grid& g, const PanelSchema& schema) {
  if (schema.imputation != Imputation::None) impute(g, schema.imputation);
  std::vector<double> values(g.cells.size());
  for (std::size_t r = 0; r < g.regions.size(); ++r)
    for (std::size_t y = 0; y < g.years.size(); ++y)
      for (std::size_t i = 0; i < g.indicators.size(); ++i) {
        const Cell& c = g.cells[g.index(r, y, i)];
        if (!c) {
          if (g.seen[g.index(r, y, i)] && schema.imputation == Imputation::None) {
            fail(ErrorCode::NonFinite, kModule,
                 "blank value at " + describe(g.regions[r], g.years[y], g.indicators[i]));
          }
          fail(ErrorCode::MissingCell, kModule,
               "missing value for " + describe(g.regions[r], g.years[y], g.indicators[i]));
        }
        values[g.index(r, y, i)] = *c;
      }
  std::vector<Indicator> inds;
  for (const auto& name : g.indicators) {
    Indicator ind{name, Attribute::Positive};
    if (auto it = schema.attributes.find(name); it != schema.attributes.end()) ind.attribute = it->second;
    inds.push_back(ind);
  }
  PanelDataset panel(std::move(g.regions), std::move(g.years), std::move(inds), std::move(values));
  panel.require_positive(schema.strictly_positive);
  return panel;
}

std::size_t require_column(const csv::Table& t, const std::string& name) {
  auto idx = t.find(name);
  if (!idx) fail(ErrorCode::SchemaMismatch, kModule, "missing column '" + name + "'");
  return *idx;
}

int parse_year(const std::string& text, std::size_t line) {
  auto y = csv::parse_int(text);
  if (!y) fail(ErrorCode::SchemaMismatch, kModule, "bad year '" + text + "' on line " + std::to_string(line));
  return *y;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

PanelDataset parse_long(const csv::Table& t, const PanelSchema& schema) {
  const std::size_t rc = require_column(t, schema.region_column);
  const std::size_t yc = require_column(t, schema.year_column);
  const std::size_t ic = require_column(t, schema.indicator_column);
  const std::size_t vc = require_column(t, schema.value_column);
  const auto ac = t.find(schema.attribute_column);

  std::vector<std::string> regions, indicators;
  std::vector<int> years;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& row = t.rows[k];
    if (!schema.indicators.empty() &&
        std::find(schema.indicators.begin(), schema.indicators.end(), row[ic]) == schema.indicators.end())
      continue;
    regions.push_back(row[rc]);
    years.push_back(parse_year(row[yc], t.line_numbers[k]));
    indicators.push_back(row[ic]);
  }
  Grid g;
  g.regions = sorted_unique(regions);
  g.years = sorted_unique(years);
  g.indicators = schema.indicators.empty() ? sorted_unique(indicators) : schema.indicators;
  g.cells.assign(g.regions.size() * g.years.size() * g.indicators.size(), std::nullopt);
  g.seen.assign(g.cells.size(), false);

  std::map<std::string, Attribute> column_attributes;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& row = t.rows[k];
    auto it = std::find(g.indicators.begin(), g.indicators.end(), row[ic]);
    if (it == g.indicators.end()) continue;
    const std::size_t i = static_cast<std::size_t>(it - g.indicators.begin());
    const std::size_t r = position(g.regions, row[rc]);
    const int year = parse_year(row[yc], t.line_numbers[k]);
    const std::size_t y = position(g.years, year);
    const std::size_t cell = g.index(r, y, i);
    if (g.seen[cell]) {
      fail(ErrorCode::DuplicateCell, kModule,
           "duplicate row for " + describe(row[rc], year, row[ic]) + " (line " +
               std::to_string(t.line_numbers[k]) + ")");
    }
    g.seen[cell] = true;
    g.cells[cell] = parse_cell(row[vc], row[rc], year, row[ic], t.line_numbers[k]);
    if (ac && !row[*ac].empty()) {
      auto attr = parse_attribute(row[*ac]);
      if (!attr) fail(ErrorCode::SchemaMismatch, kModule, "bad attribute '" + row[*ac] + "'");
      auto [pos, inserted] = column_attributes.emplace(row[ic], *attr);
      if (!inserted && pos->second != *attr)
        fail(ErrorCode::SchemaMismatch, kModule, "conflicting attribute tags for '" + row[ic] + "'");
    }
  }
  PanelSchema effective = schema;
  for (const auto& [name, attr] : column_attributes) effective.attributes.try_emplace(name, attr);
  return finish(g, effective);
}

PanelDataset parse_wide(const csv::Table& t, const PanelSchema& schema) {
  const std::size_t rc = require_column(t, schema.region_column);
  const std::size_t yc = require_column(t, schema.year_column);
  std::vector<std::string> names = schema.indicators;
  if (names.empty()) {
    for (std::size_t c = 0; c < t.header.size(); ++c)
      if (c != rc && c != yc) names.push_back(t.header[c]);
  }
  std::vector<std::size_t> cols;
  for (const auto& n : names) cols.push_back(require_column(t, n));

  std::vector<std::string> regions;
  std::vector<int> years;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    regions.push_back(t.rows[k][rc]);
    years.push_back(parse_year(t.rows[k][yc], t.line_numbers[k]));
  }
  Grid g;
  g.regions = sorted_unique(regions);
  g.years = sorted_unique(years);
  g.indicators = names;
  g.cells.assign(g.regions.size() * g.years.size() * g.indicators.size(), std::nullopt);
  g.seen.assign(g.cells.size(), false);
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& row = t.rows[k];
    const std::size_t r = position(g.regions, row[rc]);
    const int year = years[k];
    const std::size_t y = position(g.years, year);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::size_t cell = g.index(r, y, i);
      if (g.seen[cell]) {
        fail(ErrorCode::DuplicateCell, kModule,
             "duplicate row for region '" + row[rc] + "', year " + std::to_string(year) + " (line " +
                 std::to_string(t.line_numbers[k]) + ")");
      }
      g.seen[cell] = true;
      g.cells[cell] = parse_cell(row[cols[i]], row[rc], year, names[i], t.line_numbers[k]);
    }
  }
  return finish(g, schema);
}

}  // namespace

PanelDataset parse_panel(std::istream& in, const PanelSchema& schema) {
  const csv::Table table = csv::read(in);
  return schema.format == PanelFormat::Long ? parse_long(table, schema) : parse_wide(table, schema);
}

PanelDataset load_panel(const std::filesystem::path& path, const PanelSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, kModule, "cannot open " + path.string());
  return parse_panel(in, schema);
}

void write_panel_long(std::ostream& out, const PanelDataset& panel, bool full_precision) {
  csv::Writer w(out);
  w.row({"region", "year", "indicator", "value"});
  for (std::size_t r = 0; r < panel.region_count(); ++r)
    for (std::size_t y = 0; y < panel.year_count(); ++y)
      for (std::size_t i = 0; i < panel.indicator_count(); ++i)
        w.row({panel.regions()[r], std::to_string(panel.years()[y]), panel.indicators()[i].name,
               format_number(panel.at(r, y, i), full_precision)});
}

}  // namespace lct
