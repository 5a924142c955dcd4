#include "hgacluster/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "hgacluster/error.hpp"

#ifndef HGACLUSTER_VERSION
#define HGACLUSTER_VERSION "0.0.0"
#endif

namespace hgacluster {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Runs `fn`, prefixing any library error with the pipeline stage name while
// keeping its type (and therefore the CLI exit code).
template <typename Fn>
auto in_stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  const auto label = [&](const std::exception& e) { return std::string(stage) + ": " + e.what(); };
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError(label(e));
  } catch (const ContractError& e) {
    throw ContractError(label(e));
  } catch (const OutputError& e) {
    throw OutputError(label(e));
  }
}

MethodOutcome score(std::span<const Point> points, const LabelVector& labels, Genes assignment) {
  MethodOutcome out;
  out.fitness = chromosome_fitness(points, Chromosome(assignment)).f;
  out.alignment = align_clusters_to_labels(assignment, labels.labels);
  out.confusion = confusion_matrix(out.alignment.mapped, labels.labels);
  out.metrics = metrics(out.confusion);
  out.assignment = std::move(assignment);
  return out;
}

}  // namespace

std::string_view version() { return HGACLUSTER_VERSION; }

std::uint64_t replicate_seed(std::uint64_t base, std::size_t index, std::size_t replicates) {
  return replicates <= 1 ? base : derive_seed(base, index);
}

PreparedData prepare_data(const ExperimentConfig& config) {
  PreparedData out;
  const RawDataset raw = in_stage("load", [&] { return load_heart_csv(config.input); });
  const RawDataset clean = in_stage("impute", [&] { return impute_missing(raw, config.impute); });
  auto [features, labels] = in_stage("split", [&] { return split_features_target(clean); });
  if (config.standardize) {
    features = in_stage("standardize", [&] { return standardize(features); });
  }
  out.pca = in_stage("pca", [&] { return run_pca(features, 2); });
  out.points = to_points(out.pca.projection);

  out.dataset.rows = clean.size();
  out.dataset.rows_dropped = raw.size() - clean.size();
  out.dataset.missing_cells = raw.imputed_cells.size();
  out.dataset.low_risk = labels.count(kLowRisk);
  out.dataset.high_risk = labels.count(kHighRisk);
  out.features = std::move(features);
  out.labels = std::move(labels);
  return out;
}

ReplicateOutcome run_replicate(std::span<const Point> points, const LabelVector& labels,
                               const ExperimentConfig& config, std::size_t index) {
  ReplicateOutcome out;
  out.index = index;
  out.seed = replicate_seed(config.seed, index, config.replicates);

  auto start = Clock::now();
  KMeansOptions km;
  km.max_iter = config.kmeans_max_iter;
  km.seed = out.seed;
  Assignment assignment = in_stage("kmeans", [&] { return kmeans(points, km); });
  out.kmeans_ms = elapsed_ms(start);
  out.kmeans_iterations = assignment.iterations;
  out.kmeans_converged = assignment.converged;
  out.kmeans_objective_trace = std::move(assignment.objective_trace);
  out.kmeans_distance_trace = std::move(assignment.distance_trace);
  out.kmeans = in_stage("evaluate", [&] { return score(points, labels, assignment.genes); });

  start = Clock::now();
  HgaConfig hga = config.hga;
  hga.seed = out.seed;
  HgaResult result = in_stage("hga", [&] { return run_hga(points, hga); });
  out.hga_ms = elapsed_ms(start);
  out.hga_generations = result.generations_run;
  out.hga_terminated_by = result.terminated_by;
  out.hga_min_fitness_trace = std::move(result.min_fitness_trace);
  out.hga_max_fitness_trace = std::move(result.max_fitness_trace);
  out.hga = in_stage("evaluate", [&] { return score(points, labels, result.best_chromosome.genes()); });
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto start = Clock::now();
  in_stage("config", [&] {
    config.hga.validate();
    if (config.replicates == 0) throw ContractError("replicates must be positive");
    if (config.kmeans_max_iter == 0) throw ContractError("kmeans max_iter must be positive");
  });

  ExperimentReport report;
  report.config = config;

  PreparedData data = prepare_data(config);
  report.prepare_ms = elapsed_ms(start);
  report.dataset = data.dataset;
  report.pca.standardized = data.features.standardized;
  report.pca.eigenvalues.assign(data.pca.eigen.values.data(),
                                data.pca.eigen.values.data() + data.pca.eigen.values.size());
  report.pca.explained_variance_ratio = data.pca.projection.explained_variance_ratio;
  report.points = std::move(data.points);
  report.labels = std::move(data.labels);

  report.replicates.resize(config.replicates);
  const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, config.replicates);
  if (jobs == 1) {
    for (std::size_t r = 0; r < config.replicates; ++r) {
      report.replicates[r] = run_replicate(report.points, report.labels, config, r);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t r = next++; r < config.replicates; r = next++) {
          try {
            report.replicates[r] = run_replicate(report.points, report.labels, config, r);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  report.total_ms = elapsed_ms(start);
  return report;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

}  // namespace hgacluster
