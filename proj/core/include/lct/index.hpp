#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lct/matrix.hpp"
#include "lct/panel.hpp"

namespace lct::index {

inline constexpr double kDefaultOffset = 0.00001;

/// Classic: E = sum w_j X'_ij over min-max standardized values.
/// Improved: E = sum w_j X''_ij with X'' = X / (max + min), which keeps every
/// value strictly inside (0, 1).
enum class Method { Classic, Improved };

/// Constant columns have max == min. Strict rejects them; lenient gives them
/// zero information (entropy 1, weight 0).
enum class ConstantPolicy { Strict, Lenient };

/// Which matrix the entropy weights are computed from.
enum class WeightSource { Standardized, Improved };

std::string_view to_string(Method m) noexcept;

struct StandardizedMatrix {
  Matrix values;  // years x indicators, each entry in [offset, 1 + offset]
  double offset = kDefaultOffset;
  std::vector<Attribute> tags;
  std::vector<bool> constant;  // per column, set only under ConstantPolicy::Lenient
};

struct EntropyWeights {
  std::vector<double> weights;
  std::vector<double> entropies;
  Matrix contributions;  // R_ij, kept for audit
};

struct IndexOptions {
  double offset = kDefaultOffset;
  Method method = Method::Improved;
  ConstantPolicy constants = ConstantPolicy::Strict;
  WeightSource weight_source = WeightSource::Standardized;
};

struct IndexValues {
  std::vector<double> values;
  EntropyWeights weights;
};

struct IndexSeries {
  std::string region;
  std::vector<int> years;
  std::vector<double> values;
  std::vector<std::string> indicators;
  EntropyWeights weights;
  Method method = Method::Improved;
};

StandardizedMatrix standardize_minmax(const Matrix& raw, std::span<const Attribute> tags,
                                      double offset = kDefaultOffset,
                                      ConstantPolicy constants = ConstantPolicy::Strict);

EntropyWeights entropy_weights(const StandardizedMatrix& standardized);

/// X''_ij = X_ij / (max_i X_ij + min_i X_ij); requires strictly positive input.
Matrix improved_normalize(const Matrix& raw);

IndexValues composite_index(const Matrix& raw, std::span<const Attribute> tags, const IndexOptions& options = {});

/// One series per region; every region is indexed on its own.
std::vector<IndexSeries> composite_index(const PanelDataset& panel, const IndexOptions& options = {});

/// Index of a single-indicator emissions panel. The weight is trivially 1 so a
/// constant series is allowed (improved value 0.5).
std::vector<IndexSeries> tcde_index(const PanelDataset& emissions_panel, const IndexOptions& options = {});

/// region,year,index_value
void write_index_csv(std::ostream& out, std::span<const IndexSeries> series, bool full_precision = false);
/// region,indicator,weight,entropy
void write_weights_csv(std::ostream& out, std::span<const IndexSeries> series, bool full_precision = false);
/// Reads region,year,index_value back into series (weights left empty).
std::vector<IndexSeries> read_index_csv(std::istream& in);

}  // namespace lct::index
