#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hgacluster {

struct ClusterAlignment {
  std::vector<std::uint8_t> mapped;
  bool flipped = false;  // cluster 0 -> class 1 and cluster 1 -> class 0
};

/// Picks whichever of the two cluster-to-class maps agrees with more labels;
/// a tie keeps the identity.
ClusterAlignment align_clusters_to_labels(std::span<const std::uint8_t> assignment,
                                          std::span<const std::uint8_t> labels);

/// Positive class is High risk (1).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  [[nodiscard]] std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const std::uint8_t> mapped,
                                 std::span<const std::uint8_t> labels);

/// Percentages in [0, 100]. A zero denominator yields 0.
struct Metrics {
  double accuracy = 0.0;
  double error = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

Metrics metrics(const ConfusionMatrix& cm);

/// Two decimals, halves rounded away from zero.
double round_percent(double value);
Metrics rounded(const Metrics& m);

}  // namespace hgacluster
