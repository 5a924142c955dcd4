#include "hgacluster/hga.hpp"

#include <string>

#include "hgacluster/error.hpp"

namespace hgacluster {
namespace {

void require_fitness(const Chromosome& c, const char* where) {
  if (!c.cached_fitness()) throw ContractError(std::string(where) + ": chromosome has no fitness");
}

}  // namespace

void HgaConfig::validate() const {
  if (population_size < 2) {
    throw ContractError("population_size must be at least 2, got " + std::to_string(population_size));
  }
  if (doldrum_factor == 0) throw ContractError("doldrum_factor must be positive");
  if (max_generations == 0) throw ContractError("max_generations must be positive");
}

Population::Population(std::vector<Chromosome> chromosomes) : chromosomes_(std::move(chromosomes)) {
  if (chromosomes_.empty()) throw ContractError("Population: no chromosomes");
  for (const auto& c : chromosomes_) {
    require_fitness(c, "Population");
    if (c.size() != chromosomes_.front().size()) {
      throw ContractError("Population: chromosomes differ in length");
    }
  }
  refresh_extrema();
}

void Population::replace(std::size_t i, Chromosome c) {
  require_fitness(c, "Population::replace");
  if (c.size() != chromosomes_.at(i).size()) {
    throw ContractError("Population::replace: length " + std::to_string(c.size()) +
                        " does not match population length " + std::to_string(chromosomes_[i].size()));
  }
  chromosomes_[i] = std::move(c);
  refresh_extrema();
}

void Population::refresh_extrema() {
  min_index_ = 0;
  max_index_ = 0;
  double lo = *chromosomes_[0].cached_fitness();
  double hi = lo;
  for (std::size_t i = 1; i < chromosomes_.size(); ++i) {
    const double f = *chromosomes_[i].cached_fitness();
    if (f < lo) {
      lo = f;
      min_index_ = i;
    }
    if (f > hi) {
      hi = f;
      max_index_ = i;
    }
  }
}

Population init_population(std::span<const Point> points, const HgaConfig& config, Rng& rng) {
  config.validate();
  if (points.size() < 2) throw ContractError("init_population: need at least two points");

  std::vector<Chromosome> chromosomes;
  chromosomes.reserve(config.population_size);
  for (std::size_t k = 0; k < config.population_size; ++k) {
    Genes genes(points.size());
    for (auto& g : genes) g = rng.coin() ? kHighRisk : kLowRisk;
    Chromosome c(std::move(genes));
    if (config.improve_initial) {
      c = deterministic_improvement(points, c);
    } else {
      evaluate(points, c);
    }
    chromosomes.push_back(std::move(c));
  }
  return Population(std::move(chromosomes));
}

std::pair<std::size_t, std::size_t> select_parents(const Population& pop, Rng& rng) {
  return rng.distinct_pair(pop.size());
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& p1, const Chromosome& p2,
                                               std::size_t cut) {
  if (p1.size() != p2.size()) {
    throw ContractError("crossover: parent lengths differ (" + std::to_string(p1.size()) + " vs " +
                        std::to_string(p2.size()) + ")");
  }
  if (cut == 0 || cut >= p1.size()) {
    throw ContractError("crossover: cut " + std::to_string(cut) + " outside 1.." +
                        std::to_string(p1.size() > 0 ? p1.size() - 1 : 0));
  }
  Genes a = p1.genes();
  Genes b = p2.genes();
  for (std::size_t i = cut; i < a.size(); ++i) std::swap(a[i], b[i]);
  return {Chromosome(std::move(a)), Chromosome(std::move(b))};
}

std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& p1, const Chromosome& p2,
                                                      Rng& rng) {
  if (p1.size() != p2.size()) {
    throw ContractError("crossover: parent lengths differ (" + std::to_string(p1.size()) + " vs " +
                        std::to_string(p2.size()) + ")");
  }
  if (p1.size() < 2) throw ContractError("crossover: chromosomes need at least two genes");
  const auto cut = 1 + static_cast<std::size_t>(rng.below(p1.size() - 1));
  return crossover_at(p1, p2, cut);
}

Chromosome flip_pair(Chromosome chrom, std::size_t a, std::size_t b) {
  if (a == b) throw ContractError("mutation: positions must be distinct");
  chrom.flip(a);
  chrom.flip(b);
  return chrom;
}

Chromosome two_point_mutation(Chromosome chrom, Rng& rng) {
  if (chrom.size() < 2) throw ContractError("mutation: chromosome needs at least two genes");
  const auto [a, b] = rng.distinct_pair(chrom.size());
  return flip_pair(std::move(chrom), a, b);
}

Chromosome deterministic_improvement(std::span<const Point> points, const Chromosome& chrom) {
  Chromosome original = chrom;
  const double base = original.cached_fitness() ? *original.cached_fitness()
                                                : evaluate(points, original);

  const auto low = centroid(points, original.genes(), kLowRisk);
  const auto high = centroid(points, original.genes(), kHighRisk);
  if (!low || !high) return original;

  Chromosome candidate = original;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double to_low = euclidean_distance(points[i], *low);
    const double to_high = euclidean_distance(points[i], *high);
    if (candidate[i] == kLowRisk && to_high < to_low) {
      candidate.set(i, kHighRisk);
    } else if (candidate[i] == kHighRisk && to_low < to_high) {
      candidate.set(i, kLowRisk);
    }
  }
  const double improved = evaluate(points, candidate);
  return improved <= base ? candidate : original;
}

bool steady_state_replace(Population& pop, Chromosome offspring) {
  require_fitness(offspring, "steady_state_replace");
  if (*offspring.cached_fitness() < pop.max_fitness()) {
    pop.replace(pop.max_index(), std::move(offspring));
    return true;
  }
  return false;
}

std::string_view to_string(Termination t) {
  return t == Termination::kDoldrum ? "doldrum" : "cap";
}

HgaResult run_hga(std::span<const Point> points, const HgaConfig& config,
                  const GenerationObserver& observer) {
  config.validate();
  if (points.size() < 2) throw ContractError("run_hga: need at least two points");

  Rng rng(config.seed);
  Population pop = init_population(points, config, rng);

  HgaResult result;
  result.terminated_by = Termination::kCap;
  double best = pop.min_fitness();
  std::size_t stagnant = 0;
  const std::size_t window = config.doldrum_window();

  while (result.generations_run < config.max_generations) {
    const auto [i, j] = select_parents(pop, rng);
    auto [first, second] = one_point_crossover(pop[i], pop[j], rng);
    if (config.mutation_enabled) {
      first = two_point_mutation(std::move(first), rng);
      second = two_point_mutation(std::move(second), rng);
    }
    if (config.improvement_enabled) {
      first = deterministic_improvement(points, first);
      second = deterministic_improvement(points, second);
    } else {
      evaluate(points, first);
      evaluate(points, second);
    }
    steady_state_replace(pop, std::move(first));
    steady_state_replace(pop, std::move(second));

    ++result.generations_run;
    result.min_fitness_trace.push_back(pop.min_fitness());
    result.max_fitness_trace.push_back(pop.max_fitness());
    if (observer) observer({result.generations_run, pop.min_fitness(), pop.max_fitness()});

    if (pop.min_fitness() < best) {
      best = pop.min_fitness();
      stagnant = 0;
    } else if (++stagnant >= window) {
      result.terminated_by = Termination::kDoldrum;
      break;
    }
  }

  result.best_chromosome = pop[pop.min_index()];
  result.best_fitness = pop.min_fitness();
  return result;
}

}  // namespace hgacluster
