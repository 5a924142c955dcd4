#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hgacluster/clustering.hpp"
#include "hgacluster/rng.hpp"

namespace hgacluster {

struct HgaConfig {
  std::size_t population_size = 2500;
  /// Stop after doldrum_factor * population_size generations without a
  /// strict decrease of the population minimum.
  std::size_t doldrum_factor = 2;
  std::size_t max_generations = 1'000'000;
  bool improvement_enabled = true;
  bool mutation_enabled = true;
  /// Also run deterministic improvement on the initial population.
  bool improve_initial = false;
  std::uint64_t seed = 0;

  /// Throws ContractError on population_size < 2 or a zero count.
  void validate() const;
  [[nodiscard]] std::size_t doldrum_window() const { return doldrum_factor * population_size; }
};

class Population {
 public:
  Population() = default;
  explicit Population(std::vector<Chromosome> chromosomes);

  [[nodiscard]] std::size_t size() const { return chromosomes_.size(); }
  [[nodiscard]] const Chromosome& operator[](std::size_t i) const { return chromosomes_[i]; }
  [[nodiscard]] const std::vector<Chromosome>& chromosomes() const { return chromosomes_; }

  /// Lowest index among the minimum / maximum cached fitnesses.
  [[nodiscard]] std::size_t min_index() const { return min_index_; }
  [[nodiscard]] std::size_t max_index() const { return max_index_; }
  [[nodiscard]] double min_fitness() const { return *chromosomes_[min_index_].cached_fitness(); }
  [[nodiscard]] double max_fitness() const { return *chromosomes_[max_index_].cached_fitness(); }

  /// Overwrites slot i and refreshes the extrema. `c` must carry a fitness.
  void replace(std::size_t i, Chromosome c);

 private:
  void refresh_extrema();

  std::vector<Chromosome> chromosomes_;
  std::size_t min_index_ = 0;
  std::size_t max_index_ = 0;
};

/// config.population_size chromosomes of fair coin flips, all evaluated.
Population init_population(std::span<const Point> points, const HgaConfig& config, Rng& rng);

std::pair<std::size_t, std::size_t> select_parents(const Population& pop, Rng& rng);

/// offspring1 = p1[0, cut) + p2[cut, n), offspring2 = p2[0, cut) + p1[cut, n).
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& p1, const Chromosome& p2,
                                               std::size_t cut);
/// Cut drawn uniformly from 1..n-1.
std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& p1, const Chromosome& p2,
                                                      Rng& rng);

Chromosome flip_pair(Chromosome chrom, std::size_t a, std::size_t b);
/// Flips two distinct uniformly drawn positions.
Chromosome two_point_mutation(Chromosome chrom, Rng& rng);

/// One nearest-centroid reassignment sweep with the centroids of `chrom`
/// held fixed; the result is kept only if its fitness is no worse. The
/// returned chromosome always carries a cached fitness.
Chromosome deterministic_improvement(std::span<const Point> points, const Chromosome& chrom);

/// Replaces the worst chromosome when `offspring` is strictly fitter.
bool steady_state_replace(Population& pop, Chromosome offspring);

enum class Termination { kDoldrum, kCap };
std::string_view to_string(Termination t);

struct GenerationRecord {
  std::size_t generation = 0;  // 1-based
  double min_fitness = 0.0;
  double max_fitness = 0.0;
};

struct HgaResult {
  Chromosome best_chromosome;
  double best_fitness = 0.0;
  std::size_t generations_run = 0;
  std::vector<double> min_fitness_trace;
  std::vector<double> max_fitness_trace;
  Termination terminated_by = Termination::kDoldrum;
};

using GenerationObserver = std::function<void(const GenerationRecord&)>;

HgaResult run_hga(std::span<const Point> points, const HgaConfig& config,
                  const GenerationObserver& observer = {});

}  // namespace hgacluster
