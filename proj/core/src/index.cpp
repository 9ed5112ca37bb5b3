#include "lct/index.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lct/csv.hpp"
#include "lct/error.hpp"
#include "lct/format.hpp"

namespace lct::index {
namespace {

constexpr const char* kModule = "index";

void require_tags(const Matrix& m, std::span<const Attribute> tags) {
  if (tags.size() != m.cols()) {
    fail(ErrorCode::DimensionMismatch, kModule,
         "expected " + std::to_string(m.cols()) + " attribute tags, got " + std::to_string(tags.size()));
  }
}

bool uniform(const Matrix& m, std::size_t c) {
  for (std::size_t r = 1; r < m.rows(); ++r)
    if (m(r, c) != m(0, c)) return false;
  return true;
}

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::Classic ? "classic" : "improved"; }

StandardizedMatrix standardize_minmax(const Matrix& raw, std::span<const Attribute> tags, double offset,
                                      ConstantPolicy constants) {
  require_tags(raw, tags);
  if (!(offset > 0.0) || !std::isfinite(offset)) {
    fail(ErrorCode::NonPositiveOffset, kModule, "offset must be a positive finite number");
  }
  if (raw.rows() == 0) fail(ErrorCode::SingleYear, kModule, "matrix has no years");

  StandardizedMatrix out{Matrix(raw.rows(), raw.cols()), offset, {tags.begin(), tags.end()},
                         std::vector<bool>(raw.cols(), false)};
  for (std::size_t c = 0; c < raw.cols(); ++c) {
    const auto col = raw.column(c);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
      if (constants == ConstantPolicy::Strict) {
        fail(ErrorCode::ConstantColumn, kModule, "indicator column " + std::to_string(c) + " is constant");
      }
      out.constant[c] = true;
      for (std::size_t r = 0; r < raw.rows(); ++r) out.values(r, c) = offset;
      continue;
    }
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      const double scaled = tags[c] == Attribute::Positive ? (col[r] - *lo) / range : (*hi - col[r]) / range;
      out.values(r, c) = scaled + offset;
    }
  }
  return out;
}

EntropyWeights entropy_weights(const StandardizedMatrix& standardized) {
  const Matrix& x = standardized.values;
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n < 2) fail(ErrorCode::SingleYear, kModule, "entropy weights need at least two years");

  EntropyWeights out{std::vector<double>(m), std::vector<double>(m), Matrix(n, m)};
  const double k = 1.0 / std::log(static_cast<double>(n));
  double divergence_sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double column_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(x(i, j) > 0.0)) fail(ErrorCode::NonPositiveValue, kModule, "standardized entries must be > 0");
      column_sum += x(i, j);
    }
    double plogp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = x(i, j) / column_sum;
      out.contributions(i, j) = r;
      plogp += r * std::log(r);
    }
    const bool flat = (j < standardized.constant.size() && standardized.constant[j]) || uniform(x, j);
    out.entropies[j] = flat ? 1.0 : std::clamp(-k * plogp, 0.0, 1.0);
    divergence_sum += 1.0 - out.entropies[j];
  }
  if (!(divergence_sum > 0.0)) {
    fail(ErrorCode::AllMaxEntropy, kModule, "every indicator has maximal entropy; weights undefined");
  }
  for (std::size_t j = 0; j < m; ++j) out.weights[j] = (1.0 - out.entropies[j]) / divergence_sum;
  return out;
}

Matrix improved_normalize(const Matrix& raw) {
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t c = 0; c < raw.cols(); ++c) {
    const auto col = raw.column(c);
    for (double v : col) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "improved normalization needs strictly positive values (column " << c << " has " << v << ")";
        fail(ErrorCode::NonPositiveValue, kModule, os.str());
      }
    }
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double denom = *hi + *lo;
    for (std::size_t r = 0; r < raw.rows(); ++r) out(r, c) = col[r] / denom;
  }
  return out;
}

IndexValues composite_index(const Matrix& raw, std::span<const Attribute> tags, const IndexOptions& options) {
  require_tags(raw, tags);
  const StandardizedMatrix standardized = standardize_minmax(raw, tags, options.offset, options.constants);

  Matrix improved;
  if (options.method == Method::Improved || options.weight_source == WeightSource::Improved) {
    improved = improved_normalize(raw);
    for (std::size_t c = 0; c < improved.cols(); ++c) {
      if (tags[c] == Attribute::Negative)
        for (std::size_t r = 0; r < improved.rows(); ++r) improved(r, c) = 1.0 - improved(r, c);
    }
  }

  IndexValues out;
  out.weights = options.weight_source == WeightSource::Improved
                    ? entropy_weights({improved, 0.0, standardized.tags, standardized.constant})
                    : entropy_weights(standardized);
  const Matrix& terms = options.method == Method::Improved ? improved : standardized.values;
  out.values.assign(raw.rows(), 0.0);
  for (std::size_t r = 0; r < raw.rows(); ++r)
    for (std::size_t c = 0; c < raw.cols(); ++c) out.values[r] += out.weights.weights[c] * terms(r, c);
  return out;
}

std::vector<IndexSeries> composite_index(const PanelDataset& panel, const IndexOptions& options) {
  std::vector<Attribute> tags;
  for (const auto& ind : panel.indicators()) tags.push_back(ind.attribute);
  std::vector<IndexSeries> out;
  out.reserve(panel.region_count());
  for (std::size_t r = 0; r < panel.region_count(); ++r) {
    try {
      IndexValues v = composite_index(panel.slice_region(r), tags, options);
      out.push_back({panel.regions()[r], panel.years(), std::move(v.values), panel.indicator_names(),
                     std::move(v.weights), options.method});
    } catch (const Error& e) {
      throw e.with_context("region '" + panel.regions()[r] + "'");
    }
  }
  return out;
}

std::vector<IndexSeries> tcde_index(const PanelDataset& emissions_panel, const IndexOptions& options) {
  if (emissions_panel.indicator_count() != 1) {
    fail(ErrorCode::DimensionMismatch, kModule, "emissions index expects exactly one indicator");
  }
  const std::vector<Attribute> tags{Attribute::Positive};
  std::vector<IndexSeries> out;
  for (std::size_t r = 0; r < emissions_panel.region_count(); ++r) {
    const std::string& region = emissions_panel.regions()[r];
    try {
      const Matrix q = emissions_panel.slice_region(r);
      const Matrix improved = improved_normalize(q);
      const std::size_t n = q.rows();
      EntropyWeights w{{1.0}, {1.0}, Matrix(n, 1, 1.0 / static_cast<double>(n))};
      std::vector<double> values;
      if (options.method == Method::Improved) {
        values = improved.column(0);
      } else {
        values = standardize_minmax(q, tags, options.offset, ConstantPolicy::Lenient).values.column(0);
      }
      const bool constant = std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; });
      if (n >= 2 && !constant) {
        const auto ew = entropy_weights(standardize_minmax(q, tags, options.offset, ConstantPolicy::Lenient));
        w.entropies = ew.entropies;
        w.contributions = ew.contributions;
      }
      out.push_back({region, emissions_panel.years(), std::move(values), emissions_panel.indicator_names(),
                     std::move(w), options.method});
    } catch (const Error& e) {
      throw e.with_context("region '" + region + "'");
    }
  }
  return out;
}

void write_index_csv(std::ostream& out, std::span<const IndexSeries> series, bool full_precision) {
  csv::Writer w(out);
  w.row({"region", "year", "index_value"});
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.years.size(); ++i)
      w.row({s.region, std::to_string(s.years[i]), format_number(s.values[i], full_precision)});
}

void write_weights_csv(std::ostream& out, std::span<const IndexSeries> series, bool full_precision) {
  csv::Writer w(out);
  w.row({"region", "indicator", "weight", "entropy"});
  for (const auto& s : series)
    for (std::size_t j = 0; j < s.weights.weights.size(); ++j)
      w.row({s.region, j < s.indicators.size() ? s.indicators[j] : std::to_string(j),
             format_number(s.weights.weights[j], full_precision),
             format_number(s.weights.entropies[j], full_precision)});
}

std::vector<IndexSeries> read_index_csv(std::istream& in) {
  const csv::Table t = csv::read(in);
  const auto rc = t.find("region"), yc = t.find("year"), vc = t.find("index_value");
  if (!rc || !yc || !vc) fail(ErrorCode::SchemaMismatch, kModule, "index CSV needs region,year,index_value");
  std::map<std::string, std::map<int, double>> grouped;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& row = t.rows[k];
    auto year = csv::parse_int(row[*yc]);
    auto value = csv::parse_number(row[*vc]);
    if (!year) fail(ErrorCode::SchemaMismatch, kModule, "bad year on line " + std::to_string(t.line_numbers[k]));
    if (!value || !std::isfinite(*value))
      fail(ErrorCode::NonFinite, kModule, "bad index value on line " + std::to_string(t.line_numbers[k]));
    if (!grouped[row[*rc]].emplace(*year, *value).second)
      fail(ErrorCode::DuplicateCell, kModule, "duplicate index row on line " + std::to_string(t.line_numbers[k]));
  }
  std::vector<IndexSeries> out;
  for (auto& [region, by_year] : grouped) {
    IndexSeries s;
    s.region = region;
    for (auto [y, v] : by_year) {
      s.years.push_back(y);
      s.values.push_back(v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace lct::index
