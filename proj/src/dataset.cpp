#include "hgacluster/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <cctype>

#include "hgacluster/error.hpp"

namespace hgacluster {
namespace {

constexpr std::string_view kMissing = "?";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::optional<double> parse_number(std::string_view cell) {
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool looks_like_header(const std::vector<std::string_view>& cells) {
  return std::any_of(cells.begin(), cells.end(), [](std::string_view c) {
    return c != kMissing && !parse_number(c).has_value();
  });
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

bool is_missing(double v) { return std::isnan(v); }

double column_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

// Most frequent value; the smallest one among equally frequent values.
double column_mode(const std::vector<double>& values) {
  std::map<double, std::size_t> counts;
  for (double v : values) ++counts[v];
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

}  // namespace

Schema Schema::uci_heart() {
  return Schema{{"age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach", "exang",
                 "oldpeak", "slope", "ca", "thal", "target"},
                "target"};
}

std::ptrdiff_t Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

bool RawDataset::is_complete() const {
  return std::all_of(rows.begin(), rows.end(), [](const std::vector<double>& row) {
    return std::none_of(row.begin(), row.end(), is_missing);
  });
}

std::size_t LabelVector::count(std::uint8_t label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

std::string_view to_string(ImputeStrategy strategy) {
  switch (strategy) {
    case ImputeStrategy::kMedian: return "median";
    case ImputeStrategy::kMode: return "mode";
    case ImputeStrategy::kDrop: return "drop";
  }
  return "median";
}

ImputeStrategy parse_impute_strategy(std::string_view text) {
  if (text == "median") return ImputeStrategy::kMedian;
  if (text == "mode") return ImputeStrategy::kMode;
  if (text == "drop") return ImputeStrategy::kDrop;
  throw InputError("unknown imputation strategy '" + std::string(text) + "'");
}

RawDataset parse_heart_csv(std::istream& in, const Schema& schema) {
  const std::size_t width = schema.columns.size();
  const std::ptrdiff_t target = schema.index_of(schema.target);

  RawDataset data;
  data.schema = schema;

  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);

    if (first_content_line) {
      first_content_line = false;
      if (looks_like_header(cells)) {
        if (cells.size() != width) {
          throw InputError("line " + std::to_string(line_no) + ": header has " +
                           std::to_string(cells.size()) + " columns, expected " +
                           std::to_string(width));
        }
        for (std::size_t c = 0; c < width; ++c) {
          if (!iequals(cells[c], schema.columns[c])) {
            throw InputError("line " + std::to_string(line_no) + ", column " +
                             std::to_string(c + 1) + ": header '" + std::string(cells[c]) +
                             "' does not match expected '" + schema.columns[c] + "'");
          }
        }
        continue;
      }
    }

    if (cells.size() != width) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " columns, found " + std::to_string(cells.size()));
    }

    const std::size_t row_index = data.rows.size();
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (cells[c] == kMissing) {
        if (static_cast<std::ptrdiff_t>(c) == target) {
          throw InputError("line " + std::to_string(line_no) + ", column '" + schema.columns[c] +
                           "': target value is missing");
        }
        row[c] = std::numeric_limits<double>::quiet_NaN();
        data.imputed_cells.push_back({row_index, c});
        continue;
      }
      const auto value = parse_number(cells[c]);
      if (!value) {
        throw InputError("line " + std::to_string(line_no) + ", column '" + schema.columns[c] +
                         "': non-numeric value '" + std::string(cells[c]) + "'");
      }
      row[c] = *value;
      if (static_cast<std::ptrdiff_t>(c) == target) {
        const double t = *value;
        if (t != std::floor(t) || t < 0.0 || t > 4.0) {
          throw InputError("line " + std::to_string(line_no) + ", column '" + schema.columns[c] +
                           "': target must be 0 or 1 (or UCI num 0-4), got '" +
                           std::string(cells[c]) + "'");
        }
        row[c] = t > 0.0 ? 1.0 : 0.0;
      }
    }
    data.rows.push_back(std::move(row));
  }

  if (data.rows.empty()) throw InputError("malformed input: no data rows");
  return data;
}

RawDataset load_heart_csv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  try {
    return parse_heart_csv(in, schema);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_heart_csv(std::ostream& out, const RawDataset& data) {
  for (std::size_t c = 0; c < data.schema.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << data.schema.columns[c];
  }
  out << '\n';
  for (const auto& row : data.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      if (is_missing(row[c])) {
        out << kMissing;
      } else {
        out << format_number(row[c]);
      }
    }
    out << '\n';
  }
}

RawDataset impute_missing(const RawDataset& data, ImputeStrategy strategy) {
  const std::size_t width = data.schema.columns.size();

  std::vector<std::vector<double>> present(width);
  for (const auto& row : data.rows) {
    for (std::size_t c = 0; c < width; ++c) {
      if (!is_missing(row[c])) present[c].push_back(row[c]);
    }
  }
  for (std::size_t c = 0; c < width; ++c) {
    if (present[c].empty() && !data.rows.empty()) {
      throw InputError("column '" + data.schema.columns[c] + "' is entirely missing; cannot impute");
    }
  }

  RawDataset out;
  out.schema = data.schema;

  if (strategy == ImputeStrategy::kDrop) {
    for (const auto& row : data.rows) {
      if (std::none_of(row.begin(), row.end(), is_missing)) out.rows.push_back(row);
    }
    if (out.rows.empty()) throw InputError("every row has a missing value; nothing left after drop");
    return out;
  }

  out.rows = data.rows;
  out.imputed_cells = data.imputed_cells;
  std::vector<std::optional<double>> fill(width);
  for (const auto& cell : data.imputed_cells) {
    auto& value = fill[cell.column];
    if (!value) {
      value = strategy == ImputeStrategy::kMedian ? column_median(present[cell.column])
                                                  : column_mode(present[cell.column]);
    }
    out.rows[cell.row][cell.column] = *value;
  }
  return out;
}

FeatureMatrix standardize(const FeatureMatrix& features) {
  const auto n = features.values.rows();
  if (n < 2) throw ContractError("standardize: need at least two rows");

  FeatureMatrix out = features;
  out.column_means.assign(features.cols(), 0.0);
  out.column_stds.assign(features.cols(), 0.0);
  for (Eigen::Index c = 0; c < features.values.cols(); ++c) {
    const auto column = features.values.col(c);
    const double mean = column.mean();
    const double var = (column.array() - mean).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    out.column_means[c] = mean;
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      out.values.col(c).setZero();
      out.column_stds[c] = 0.0;
    } else {
      out.values.col(c) = (column.array() - mean) / sd;
      out.column_stds[c] = sd;
    }
  }
  out.standardized = true;
  return out;
}

std::pair<FeatureMatrix, LabelVector> split_features_target(const RawDataset& data) {
  const std::ptrdiff_t target = data.schema.index_of(data.schema.target);
  if (target < 0) {
    throw InputError("schema error: target column '" + data.schema.target + "' is absent");
  }
  if (!data.is_complete()) {
    throw ContractError("split_features_target: dataset still has missing cells; impute first");
  }

  const auto n = static_cast<Eigen::Index>(data.rows.size());
  const auto width = static_cast<Eigen::Index>(data.schema.columns.size());
  FeatureMatrix features;
  features.values.resize(n, width - 1);
  for (Eigen::Index c = 0; c < width; ++c) {
    if (c != target) features.column_names.push_back(data.schema.columns[c]);
  }

  LabelVector labels;
  labels.labels.reserve(data.rows.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = data.rows[r];
    Eigen::Index out_col = 0;
    for (Eigen::Index c = 0; c < width; ++c) {
      if (c == target) continue;
      features.values(r, out_col++) = row[c];
    }
    labels.labels.push_back(row[target] > 0.0 ? 1 : 0);
  }
  return {std::move(features), std::move(labels)};
}

}  // namespace hgacluster
