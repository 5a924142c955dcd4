#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "hgacluster/error.hpp"
#include "hgacluster/experiment.hpp"
#include "json.hpp"

namespace hgacluster {
namespace {

using Json = nlohmann::ordered_json;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json series(std::span<const double> values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number_or_null(v));
  return out;
}

std::string bits(const Genes& genes) { return Chromosome(genes).to_string(); }

Json metrics_json(const Metrics& m) {
  const Metrics r = rounded(m);
  return Json{{"accuracy_pct", r.accuracy},
              {"error_pct", r.error},
              {"recall_pct", r.recall},
              {"precision_pct", r.precision},
              {"f1_pct", r.f1},
              {"exact",
               {{"accuracy_pct", m.accuracy},
                {"error_pct", m.error},
                {"recall_pct", m.recall},
                {"precision_pct", m.precision},
                {"f1_pct", m.f1}}}};
}

Json confusion_json(const ConfusionMatrix& cm) {
  return Json{{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}};
}

Json outcome_json(const MethodOutcome& o) {
  return Json{{"fitness", number_or_null(o.fitness)},
              {"alignment_flipped", o.alignment.flipped},
              {"assignment", bits(o.assignment)},
              {"confusion_matrix", confusion_json(o.confusion)},
              {"metrics", metrics_json(o.metrics)}};
}

// The per-generation minimum is non-increasing, so it is stored as the
// generations where it strictly dropped: [[generation, min_fitness], ...].
Json steps(std::span<const double> trace) {
  Json out = Json::array();
  for (std::size_t g = 0; g < trace.size(); ++g) {
    if (g == 0 || trace[g] < trace[g - 1]) {
      out.push_back(Json::array({g + 1, number_or_null(trace[g])}));
    }
  }
  return out;
}

Metrics median_metrics(const std::vector<ReplicateOutcome>& runs, bool hga) {
  std::vector<double> acc, err, rec, pre, f1;
  for (const auto& r : runs) {
    const Metrics& m = hga ? r.hga.metrics : r.kmeans.metrics;
    acc.push_back(m.accuracy);
    err.push_back(m.error);
    rec.push_back(m.recall);
    pre.push_back(m.precision);
    f1.push_back(m.f1);
  }
  return {median(acc), median(err), median(rec), median(pre), median(f1)};
}

double median_fitness(const std::vector<ReplicateOutcome>& runs, bool hga) {
  std::vector<double> f;
  for (const auto& r : runs) f.push_back(hga ? r.hga.fitness : r.kmeans.fitness);
  return median(std::move(f));
}

std::string shortest(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string two_decimals(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", round_percent(v));
  return buf.data();
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv-summary") return ReportFormat::kCsvSummary;
  throw InputError("unknown report format '" + std::string(text) + "'");
}

std::string report_to_json(const ExperimentReport& report, const EmitOptions& options) {
  const auto& cfg = report.config;
  const auto timing = [&](double ms) { return options.zero_timings ? 0.0 : ms; };

  Json j;
  j["schema_version"] = std::string(kReportSchemaVersion);
  j["artifact_version"] = std::string(version());
  j["config"] = {{"input", cfg.input.string()},
                 {"seed", cfg.seed},
                 {"impute", std::string(to_string(cfg.impute))},
                 {"standardize", cfg.standardize},
                 {"population_size", cfg.hga.population_size},
                 {"doldrum_factor", cfg.hga.doldrum_factor},
                 {"max_generations", cfg.hga.max_generations},
                 {"improvement_enabled", cfg.hga.improvement_enabled},
                 {"mutation_enabled", cfg.hga.mutation_enabled},
                 {"improve_initial", cfg.hga.improve_initial},
                 {"kmeans_max_iter", cfg.kmeans_max_iter},
                 {"replicates", cfg.replicates},
                 {"rng", "mt19937_64"}};
  j["dataset"] = {{"rows", report.dataset.rows},
                  {"rows_dropped", report.dataset.rows_dropped},
                  {"missing_cells", report.dataset.missing_cells},
                  {"class_counts",
                   {{"low_risk", report.dataset.low_risk}, {"high_risk", report.dataset.high_risk}}}};
  j["pca"] = {{"standardized", report.pca.standardized},
              {"eigenvalues", series(report.pca.eigenvalues)},
              {"explained_variance_ratio", series(report.pca.explained_variance_ratio)}};

  Json runs = Json::array();
  Json run_timings = Json::array();
  for (const auto& r : report.replicates) {
    Json km = outcome_json(r.kmeans);
    km["iterations"] = r.kmeans_iterations;
    km["converged"] = r.kmeans_converged;
    km["objective_trace"] = series(r.kmeans_objective_trace);
    km["distance_trace"] = series(r.kmeans_distance_trace);

    Json hga = outcome_json(r.hga);
    hga["generations_run"] = r.hga_generations;
    hga["terminated_by"] = std::string(to_string(r.hga_terminated_by));
    hga["min_fitness_steps"] = steps(r.hga_min_fitness_trace);
    hga["final_max_fitness"] =
        number_or_null(r.hga_max_fitness_trace.empty() ? r.hga.fitness : r.hga_max_fitness_trace.back());

    runs.push_back({{"replicate", r.index}, {"seed", r.seed}, {"kmeans", km}, {"hga", hga}});
    run_timings.push_back({{"kmeans", timing(r.kmeans_ms)}, {"hga", timing(r.hga_ms)}});
  }
  j["runs"] = runs;

  if (!report.replicates.empty()) {
    std::size_t hga_at_least = 0;
    for (const auto& r : report.replicates) {
      if (r.hga.metrics.accuracy >= r.kmeans.metrics.accuracy) ++hga_at_least;
    }
    Json hga = metrics_json(median_metrics(report.replicates, true));
    hga["fitness"] = number_or_null(median_fitness(report.replicates, true));
    Json km = metrics_json(median_metrics(report.replicates, false));
    km["fitness"] = number_or_null(median_fitness(report.replicates, false));
    j["summary"] = {{"median", {{"hga", hga}, {"kmeans", km}}},
                    {"hga_accuracy_at_least_kmeans", hga_at_least}};
  }

  j["timings_ms"] = {{"prepare", timing(report.prepare_ms)},
                     {"total", timing(report.total_ms)},
                     {"runs", run_timings}};
  return j.dump(2) + "\n";
}

std::string report_to_csv_summary(const ExperimentReport& report) {
  const auto& runs = report.replicates;
  if (runs.empty()) throw ContractError("csv summary: report has no runs");
  const Metrics hga = median_metrics(runs, true);
  const Metrics km = median_metrics(runs, false);

  std::ostringstream out;
  out << "replicates,seed,"
         "hga_fitness,hga_accuracy_pct,hga_error_pct,hga_recall_pct,hga_precision_pct,hga_f1_pct,"
         "kmeans_fitness,kmeans_accuracy_pct,kmeans_error_pct,kmeans_recall_pct,"
         "kmeans_precision_pct,kmeans_f1_pct\n";
  out << runs.size() << ',' << report.config.seed << ',' << shortest(median_fitness(runs, true))
      << ',' << two_decimals(hga.accuracy) << ',' << two_decimals(hga.error) << ','
      << two_decimals(hga.recall) << ',' << two_decimals(hga.precision) << ','
      << two_decimals(hga.f1) << ',' << shortest(median_fitness(runs, false)) << ','
      << two_decimals(km.accuracy) << ',' << two_decimals(km.error) << ','
      << two_decimals(km.recall) << ',' << two_decimals(km.precision) << ','
      << two_decimals(km.f1) << '\n';
  return out.str();
}

std::string metrics_csv_summary(const ConfusionMatrix& cm) {
  const Metrics m = metrics(cm);
  std::ostringstream out;
  out << "accuracy_pct,error_pct,recall_pct,precision_pct,f1_pct,tp,tn,fp,fn\n"
      << two_decimals(m.accuracy) << ',' << two_decimals(m.error) << ',' << two_decimals(m.recall)
      << ',' << two_decimals(m.precision) << ',' << two_decimals(m.f1) << ',' << cm.tp << ','
      << cm.tn << ',' << cm.fp << ',' << cm.fn << '\n';
  return out.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw OutputError("failed writing '" + path.string() + "'");
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path, const EmitOptions& options) {
  write_text_file(path, format == ReportFormat::kJson ? report_to_json(report, options)
                                                      : report_to_csv_summary(report));
}

void write_scatter_csv(std::ostream& out, const ExperimentReport& report, std::size_t replicate) {
  if (replicate >= report.replicates.size()) {
    throw ContractError("scatter: replicate " + std::to_string(replicate) + " does not exist");
  }
  const auto& mapped = report.replicates[replicate].hga.alignment.mapped;
  out << "pc1,pc2,predicted,actual\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    out << shortest(report.points[i].x) << ',' << shortest(report.points[i].y) << ','
        << static_cast<int>(mapped[i]) << ',' << static_cast<int>(report.labels.labels[i]) << '\n';
  }
}

void write_trace_csv(std::ostream& out, std::span<const double> min_trace,
                     std::span<const double> max_trace) {
  if (min_trace.size() != max_trace.size()) throw ContractError("trace: series lengths differ");
  out << "generation,min_fitness,max_fitness\n";
  for (std::size_t g = 0; g < min_trace.size(); ++g) {
    out << (g + 1) << ',' << shortest(min_trace[g]) << ',' << shortest(max_trace[g]) << '\n';
  }
}

}  // namespace hgacluster
