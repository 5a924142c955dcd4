#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hgacluster {

/// Column layout of a heart-disease table. The default is the 14-attribute
/// UCI order; `target` names the label column.
struct Schema {
  std::vector<std::string> columns;
  std::string target = "target";

  static Schema uci_heart();
  [[nodiscard]] std::ptrdiff_t index_of(std::string_view name) const;
};

struct CellRef {
  std::size_t row = 0;
  std::size_t column = 0;

  friend bool operator==(const CellRef&, const CellRef&) = default;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

/// Parsed table. Missing cells hold NaN until impute_missing fills them;
/// `imputed_cells` keeps the (row, column) marks of every cell that was
/// missing in the source, so provenance survives imputation.
struct RawDataset {
  Schema schema;
  std::vector<std::vector<double>> rows;
  std::vector<CellRef> imputed_cells;

  [[nodiscard]] std::size_t size() const { return rows.size(); }
  [[nodiscard]] bool is_complete() const;
};

struct FeatureMatrix {
  Eigen::MatrixXd values;  // n x d
  std::vector<std::string> column_names;
  std::vector<double> column_means;
  std::vector<double> column_stds;
  bool standardized = false;

  [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  [[nodiscard]] std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

/// 0 = Low risk, 1 = High risk.
struct LabelVector {
  std::vector<std::uint8_t> labels;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
  [[nodiscard]] std::size_t count(std::uint8_t label) const;
};

enum class ImputeStrategy { kMedian, kMode, kDrop };

std::string_view to_string(ImputeStrategy strategy);
ImputeStrategy parse_impute_strategy(std::string_view text);

/// Reads a comma-separated table. A first row containing any cell that is
/// neither numeric nor "?" is treated as a header and must match the schema.
/// Target values 2..4 (raw UCI `num` coding) are folded to 1.
RawDataset load_heart_csv(const std::filesystem::path& path,
                          const Schema& schema = Schema::uci_heart());
RawDataset parse_heart_csv(std::istream& in, const Schema& schema = Schema::uci_heart());

/// Writes a header row and one line per record. Numbers use the shortest
/// decimal text that round-trips (std::to_chars); missing cells are "?".
void write_heart_csv(std::ostream& out, const RawDataset& data);

RawDataset impute_missing(const RawDataset& data, ImputeStrategy strategy);

/// Column-wise z-score with the sample (n - 1) standard deviation. Columns
/// whose deviation is zero (to rounding) become all zeros with std 0.
FeatureMatrix standardize(const FeatureMatrix& features);

std::pair<FeatureMatrix, LabelVector> split_features_target(const RawDataset& data);

}  // namespace hgacluster
