#include "hgacluster/clustering.hpp"

#include <cmath>
#include <limits>

#include "hgacluster/error.hpp"
#include "hgacluster/rng.hpp"

namespace hgacluster {
namespace {

void require_same_size(std::span<const Point> points, std::span<const std::uint8_t> genes,
                       const char* where) {
  if (points.size() != genes.size()) {
    throw ContractError(std::string(where) + ": " + std::to_string(genes.size()) +
                        " genes for " + std::to_string(points.size()) + " points");
  }
}

double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct ClusterSums {
  double sx[2] = {0.0, 0.0};
  double sy[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};

  [[nodiscard]] std::optional<Point> mean(int c) const {
    if (count[c] == 0) return std::nullopt;
    const auto m = static_cast<double>(count[c]);
    return Point{sx[c] / m, sy[c] / m};
  }
};

ClusterSums accumulate(std::span<const Point> points, std::span<const std::uint8_t> genes) {
  ClusterSums s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int c = genes[i] != 0 ? 1 : 0;
    s.sx[c] += points[i].x;
    s.sy[c] += points[i].y;
    ++s.count[c];
  }
  return s;
}

}  // namespace

std::vector<Point> to_points(const ProjectedDataset& projection) {
  if (projection.scores.cols() < 2) {
    throw ContractError("to_points: projection has fewer than two components");
  }
  std::vector<Point> points(projection.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    points[i] = {projection.scores(r, 0), projection.scores(r, 1)};
  }
  return points;
}

Chromosome::Chromosome(Genes genes) : genes_(std::move(genes)) {
  for (auto& g : genes_) g = g != 0 ? kHighRisk : kLowRisk;
}

Chromosome Chromosome::from_string(std::string_view bits) {
  Genes genes;
  genes.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw ContractError("Chromosome::from_string: unexpected character '" + std::string(1, ch) + "'");
    }
    genes.push_back(ch == '1' ? kHighRisk : kLowRisk);
  }
  return Chromosome(std::move(genes));
}

void Chromosome::set(std::size_t i, std::uint8_t cluster) {
  genes_.at(i) = cluster != 0 ? kHighRisk : kLowRisk;
  fitness_.reset();
}

void Chromosome::flip(std::size_t i) {
  genes_.at(i) ^= 1U;
  fitness_.reset();
}

std::string Chromosome::to_string() const {
  std::string bits(genes_.size(), '0');
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (genes_[i] != 0) bits[i] = '1';
  }
  return bits;
}

double euclidean_distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

std::optional<Point> centroid(std::span<const Point> points, std::span<const std::uint8_t> genes,
                              std::uint8_t cluster) {
  require_same_size(points, genes, "centroid");
  return accumulate(points, genes).mean(cluster != 0 ? 1 : 0);
}

double cluster_fitness(std::span<const Point> points, std::span<const std::uint8_t> genes,
                       std::uint8_t cluster) {
  require_same_size(points, genes, "cluster_fitness");
  const std::uint8_t c = cluster != 0 ? 1 : 0;
  const auto center = accumulate(points, genes).mean(c);
  if (!center) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if ((genes[i] != 0 ? 1 : 0) == c) sum += euclidean_distance(points[i], *center);
  }
  return sum;
}

FitnessBreakdown chromosome_fitness(std::span<const Point> points, const Chromosome& chrom) {
  const auto& genes = chrom.genes();
  require_same_size(points, genes, "chromosome_fitness");

  const ClusterSums sums = accumulate(points, genes);
  FitnessBreakdown out;
  out.low_centroid = sums.mean(0);
  out.high_centroid = sums.mean(1);

  const Point centers[2] = {out.low_centroid.value_or(Point{}), out.high_centroid.value_or(Point{})};
  double terms[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int c = genes[i] != 0 ? 1 : 0;
    terms[c] += euclidean_distance(points[i], centers[c]);
  }
  out.f_p = terms[0];
  out.f_q = terms[1];
  if (!out.low_centroid || !out.high_centroid) {
    out.f = std::numeric_limits<double>::infinity();
  } else {
    out.f = out.f_p + out.f_q;
  }
  return out;
}

double evaluate(std::span<const Point> points, Chromosome& chrom) {
  const double f = chromosome_fitness(points, chrom).f;
  chrom.cache_fitness(f);
  return f;
}

Assignment kmeans(std::span<const Point> points, const KMeansOptions& options) {
  const std::size_t n = points.size();
  if (options.k != 2) {
    throw ContractError("kmeans: only k = 2 is supported, got " + std::to_string(options.k));
  }
  if (options.k > n) {
    throw ContractError("kmeans: infeasible, k = " + std::to_string(options.k) + " exceeds n = " +
                        std::to_string(n));
  }

  std::array<Point, 2> centers{};
  if (options.initial_centroids) {
    centers = *options.initial_centroids;
  } else {
    Rng rng(options.seed);
    const auto first = static_cast<std::size_t>(rng.below(n));
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(points[i] == points[first])) others.push_back(i);
    }
    const std::size_t second =
        others.empty() ? (first + 1) % n : others[static_cast<std::size_t>(rng.below(others.size()))];
    centers = {points[first], points[second]};
  }

  Assignment out;
  out.genes.assign(n, kLowRisk);
  double previous_objective = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = squared_distance(points[i], centers[0]);
      const double d1 = squared_distance(points[i], centers[1]);
      std::uint8_t next = 0;
      if (it == 1) {
        next = d1 < d0 ? 1 : 0;
      } else {
        const std::uint8_t current = out.genes[i];
        const double here = current == 0 ? d0 : d1;
        const double there = current == 0 ? d1 : d0;
        next = there < here ? static_cast<std::uint8_t>(1 - current) : current;
      }
      if (next != out.genes[i]) changed = true;
      out.genes[i] = next;
    }

    const ClusterSums sums = accumulate(points, out.genes);
    const std::array<Point, 2> previous_centers = centers;
    for (int c = 0; c < 2; ++c) {
      if (const auto m = sums.mean(c)) centers[c] = *m;
    }

    double sse = 0.0;
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sq = squared_distance(points[i], centers[out.genes[i]]);
      sse += sq;
      dist += std::sqrt(sq);
    }
    out.objective_trace.push_back(sse);
    out.distance_trace.push_back(dist);
    out.iterations = it;

    const bool stable = (it > 1 && !changed) || centers == previous_centers;
    const bool flat = options.tol > 0.0 && std::abs(previous_objective - sse) < options.tol;
    previous_objective = sse;
    if (stable || flat) {
      out.converged = true;
      break;
    }
  }
  out.centroids = centers;
  return out;
}

}  // namespace hgacluster
