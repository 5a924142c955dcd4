#include "hgacluster/eval.hpp"

#include <cmath>
#include <string>

#include "hgacluster/error.hpp"

namespace hgacluster {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw ContractError(std::string(where) + ": " + std::to_string(a) + " predictions for " +
                        std::to_string(b) + " labels");
  }
}

double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClusterAlignment align_clusters_to_labels(std::span<const std::uint8_t> assignment,
                                          std::span<const std::uint8_t> labels) {
  require_same_size(assignment.size(), labels.size(), "align_clusters_to_labels");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if ((assignment[i] != 0) == (labels[i] != 0)) ++agree;
  }
  ClusterAlignment out;
  out.flipped = labels.size() - agree > agree;
  out.mapped.resize(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const bool one = assignment[i] != 0;
    out.mapped[i] = (one != out.flipped) ? 1 : 0;
  }
  return out;
}

ConfusionMatrix confusion_matrix(std::span<const std::uint8_t> mapped,
                                 std::span<const std::uint8_t> labels) {
  require_same_size(mapped.size(), labels.size(), "confusion_matrix");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const bool predicted = mapped[i] != 0;
    const bool actual = labels[i] != 0;
    if (predicted && actual) {
      ++cm.tp;
    } else if (!predicted && !actual) {
      ++cm.tn;
    } else if (predicted) {
      ++cm.fp;
    } else {
      ++cm.fn;
    }
  }
  return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
  const std::size_t n = cm.total();
  if (n == 0) throw ContractError("metrics: empty confusion matrix");
  Metrics m;
  m.accuracy = percent(cm.tp + cm.tn, n);
  m.error = percent(cm.fp + cm.fn, n);
  m.recall = percent(cm.tp, cm.tp + cm.fn);
  m.precision = percent(cm.tp, cm.tp + cm.fp);
  const double denom = m.recall + m.precision;
  m.f1 = denom > 0.0 ? 2.0 * m.recall * m.precision / denom : 0.0;
  return m;
}

double round_percent(double value) { return std::round(value * 100.0) / 100.0; }

Metrics rounded(const Metrics& m) {
  return {round_percent(m.accuracy), round_percent(m.error), round_percent(m.recall),
          round_percent(m.precision), round_percent(m.f1)};
}

}  // namespace hgacluster
