#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hgacluster/pca.hpp"

namespace hgacluster {

/// A point in the (PC1, PC2) plane.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// First two score columns of a projection. Throws ContractError if k < 2.
std::vector<Point> to_points(const ProjectedDataset& projection);

inline constexpr std::uint8_t kLowRisk = 0;
inline constexpr std::uint8_t kHighRisk = 1;

using Genes = std::vector<std::uint8_t>;

/// Binary cluster assignment over n points. The cached fitness is dropped on
/// every gene write.
class Chromosome {
 public:
  Chromosome() = default;
  explicit Chromosome(Genes genes);

  /// Parses a string of '0'/'1'; gene i is character i.
  static Chromosome from_string(std::string_view bits);

  [[nodiscard]] std::size_t size() const { return genes_.size(); }
  [[nodiscard]] std::uint8_t operator[](std::size_t i) const { return genes_[i]; }
  [[nodiscard]] const Genes& genes() const { return genes_; }

  void set(std::size_t i, std::uint8_t cluster);
  void flip(std::size_t i);

  [[nodiscard]] const std::optional<double>& cached_fitness() const { return fitness_; }
  void cache_fitness(double f) { fitness_ = f; }

  [[nodiscard]] std::string to_string() const;

  /// Gene equality; the cache is not compared.
  friend bool operator==(const Chromosome& a, const Chromosome& b) { return a.genes_ == b.genes_; }

 private:
  Genes genes_;
  std::optional<double> fitness_;
};

struct FitnessBreakdown {
  double f_p = 0.0;  // Low-risk cluster term
  double f_q = 0.0;  // High-risk cluster term
  double f = 0.0;    // +inf when either cluster is empty
  std::optional<Point> low_centroid;
  std::optional<Point> high_centroid;
};

double euclidean_distance(Point a, Point b);

/// Arithmetic mean of the members of `cluster`; nullopt when it has none.
std::optional<Point> centroid(std::span<const Point> points, std::span<const std::uint8_t> genes,
                              std::uint8_t cluster);

/// Sum over members of the distance to their centroid. Empty clusters give 0.
double cluster_fitness(std::span<const Point> points, std::span<const std::uint8_t> genes,
                       std::uint8_t cluster);

/// f = f_p + f_q, or +inf if a cluster is empty. Sums run in ascending point
/// index so the value is bitwise reproducible.
FitnessBreakdown chromosome_fitness(std::span<const Point> points, const Chromosome& chrom);

/// Computes the fitness, stores it on the chromosome and returns it.
double evaluate(std::span<const Point> points, Chromosome& chrom);

struct KMeansOptions {
  std::size_t k = 2;
  std::size_t max_iter = 300;
  /// Stop once the squared-error objective changes by less than this.
  /// 0 disables the test; unchanged assignments always stop the loop.
  double tol = 0.0;
  std::optional<std::array<Point, 2>> initial_centroids;
  std::uint64_t seed = 0;
};

struct Assignment {
  Genes genes;
  std::size_t iterations = 0;
  bool converged = false;
  std::array<Point, 2> centroids{};
  /// Sum of squared point-to-centroid distances after each Lloyd iteration.
  std::vector<double> objective_trace;
  /// Sum of unsquared distances (the chromosome fitness objective) per iteration.
  std::vector<double> distance_trace;
};

/// Lloyd's algorithm for two clusters. Without explicit centroids, two points
/// at distinct locations are drawn from `seed`. Throws ContractError when
/// k != 2 or k > n.
Assignment kmeans(std::span<const Point> points, const KMeansOptions& options = {});

}  // namespace hgacluster
