#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hgacluster/clustering.hpp"
#include "hgacluster/dataset.hpp"
#include "hgacluster/eval.hpp"
#include "hgacluster/hga.hpp"
#include "hgacluster/pca.hpp"

namespace hgacluster {

std::string_view version();

inline constexpr std::string_view kReportSchemaVersion = "1.0";

struct ExperimentConfig {
  std::filesystem::path input;
  std::uint64_t seed = 42;
  ImputeStrategy impute = ImputeStrategy::kMedian;
  bool standardize = true;
  HgaConfig hga;  // hga.seed is ignored; per-replicate seeds come from `seed`
  std::size_t kmeans_max_iter = 300;
  /// Replicate r uses derive_seed(seed, r); a single replicate uses `seed`.
  std::size_t replicates = 1;
  std::size_t jobs = 1;
};

/// Seed used by replicate `index` of a run with `replicates` replicates.
std::uint64_t replicate_seed(std::uint64_t base, std::size_t index, std::size_t replicates);

struct DatasetSummary {
  std::size_t rows = 0;
  std::size_t rows_dropped = 0;
  std::size_t missing_cells = 0;
  std::size_t low_risk = 0;
  std::size_t high_risk = 0;
};

struct PcaSummary {
  bool standardized = true;
  std::vector<double> eigenvalues;
  std::vector<double> explained_variance_ratio;
};

struct MethodOutcome {
  Genes assignment;  // raw cluster ids
  double fitness = 0.0;
  ClusterAlignment alignment;
  ConfusionMatrix confusion;
  Metrics metrics;
};

struct ReplicateOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  MethodOutcome kmeans;
  std::size_t kmeans_iterations = 0;
  bool kmeans_converged = false;
  std::vector<double> kmeans_objective_trace;
  std::vector<double> kmeans_distance_trace;
  MethodOutcome hga;
  std::size_t hga_generations = 0;
  Termination hga_terminated_by = Termination::kDoldrum;
  std::vector<double> hga_min_fitness_trace;
  std::vector<double> hga_max_fitness_trace;
  double kmeans_ms = 0.0;
  double hga_ms = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  DatasetSummary dataset;
  PcaSummary pca;
  std::vector<Point> points;
  LabelVector labels;
  std::vector<ReplicateOutcome> replicates;
  double prepare_ms = 0.0;  // load through PCA
  double total_ms = 0.0;
};

/// Stages of the pipeline up to the PCA plane; shared by the subcommands.
struct PreparedData {
  DatasetSummary dataset;
  FeatureMatrix features;
  LabelVector labels;
  PcaResult pca;
  std::vector<Point> points;
};
PreparedData prepare_data(const ExperimentConfig& config);

/// Runs both clusterers for one seed and scores them against `labels`.
ReplicateOutcome run_replicate(std::span<const Point> points, const LabelVector& labels,
                               const ExperimentConfig& config, std::size_t index);

/// load -> impute -> split -> standardize -> PCA -> {k-means, HGA} -> metrics.
/// Errors are rethrown with the failing stage prefixed to the message.
ExperimentReport run_experiment(const ExperimentConfig& config);

enum class ReportFormat { kJson, kCsvSummary };
ReportFormat parse_report_format(std::string_view text);

struct EmitOptions {
  /// Write every timing as 0 so reruns compare byte-for-byte.
  bool zero_timings = false;
};

std::string report_to_json(const ExperimentReport& report, const EmitOptions& options = {});
std::string report_to_csv_summary(const ExperimentReport& report);
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path, const EmitOptions& options = {});

/// pc1,pc2,predicted,actual for one replicate's aligned HGA assignment.
void write_scatter_csv(std::ostream& out, const ExperimentReport& report, std::size_t replicate = 0);

/// Header `generation,min_fitness,max_fitness` then one line per generation.
void write_trace_csv(std::ostream& out, std::span<const double> min_trace,
                     std::span<const double> max_trace);

/// One-row summary of a bare confusion matrix.
std::string metrics_csv_summary(const ConfusionMatrix& cm);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

/// Writes `text` to `path`; OutputError if the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace hgacluster
