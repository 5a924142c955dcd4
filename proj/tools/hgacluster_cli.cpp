#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hgacluster/error.hpp"
#include "hgacluster/experiment.hpp"
#include "json.hpp"

using namespace hgacluster;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kInput = 2, kContract = 3, kOutput = 4 };

struct Options {
  ExperimentConfig cfg;
  std::string impute = "median";
  std::string format = "json";
  std::string output;
  std::string trace;
  std::string scatter;
  std::string counts;
  std::string predictions;
  bool no_improvement = false;
  bool no_mutation = false;
  bool zero_timings = false;
};

void add_data_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.cfg.input, "Heart-disease CSV file")->required();
  cmd->add_option("--impute", o.impute, "Missing-value strategy")
      ->check(CLI::IsMember({"median", "mode", "drop"}))
      ->capture_default_str();
  cmd->add_flag("--standardize,!--no-standardize", o.cfg.standardize,
                "Z-score features before PCA (default on)");
}

void add_output_option(CLI::App* cmd, Options& o) {
  cmd->add_option("--output,-o", o.output, "Write the result here instead of stdout");
}

void add_seed_option(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.cfg.seed, "Random seed")->capture_default_str();
}

void add_hga_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--population-size", o.cfg.hga.population_size)->capture_default_str();
  cmd->add_option("--doldrum-factor", o.cfg.hga.doldrum_factor,
                  "Stop after factor * population generations without a new minimum")
      ->capture_default_str();
  cmd->add_option("--max-generations", o.cfg.hga.max_generations)->capture_default_str();
  cmd->add_flag("--no-improvement", o.no_improvement, "Skip the deterministic improvement step");
  cmd->add_flag("--no-mutation", o.no_mutation, "Skip two-point mutation");
  cmd->add_flag("--improve-initial", o.cfg.hga.improve_initial, "Also improve the initial population");
  cmd->add_option("--trace", o.trace, "Write generation,min_fitness,max_fitness to this file");
}

void finish(Options& o) {
  o.cfg.impute = parse_impute_strategy(o.impute);
  o.cfg.hga.improvement_enabled = !o.no_improvement;
  o.cfg.hga.mutation_enabled = !o.no_mutation;
}

void write_out(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.output, text);
  }
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json metrics_json(const Metrics& m) {
  const Metrics r = rounded(m);
  return {{"accuracy_pct", r.accuracy}, {"error_pct", r.error}, {"recall_pct", r.recall},
          {"precision_pct", r.precision}, {"f1_pct", r.f1}};
}

json confusion_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}};
}

std::string genes_string(const Genes& g) { return Chromosome(g).to_string(); }

json scored(const std::vector<Point>& points, const LabelVector& labels, const Genes& genes) {
  const auto alignment = align_clusters_to_labels(genes, labels.labels);
  const auto cm = confusion_matrix(alignment.mapped, labels.labels);
  return {{"fitness", num(chromosome_fitness(points, Chromosome(genes)).f)},
          {"alignment_flipped", alignment.flipped},
          {"assignment", genes_string(genes)},
          {"confusion_matrix", confusion_json(cm)},
          {"metrics", metrics_json(metrics(cm))}};
}

void write_trace_file(const std::string& path, const std::vector<double>& mins, const std::vector<double>& maxs) {
  std::ostringstream out;
  write_trace_csv(out, mins, maxs);
  write_text_file(path, out.str());
}

int cmd_pca(Options& o) {
  finish(o);
  const PreparedData data = prepare_data(o.cfg);
  json j;
  j["rows"] = data.dataset.rows;
  j["standardized"] = data.features.standardized;
  j["eigenvalues"] = std::vector<double>(data.pca.eigen.values.data(),
                                         data.pca.eigen.values.data() + data.pca.eigen.values.size());
  j["explained_variance_ratio"] = data.pca.projection.explained_variance_ratio;
  write_out(o, j.dump(2) + "\n");
  if (!o.scatter.empty()) {
    std::ostringstream out;
    out.precision(17);
    out << "pc1,pc2,actual\n";
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      out << data.points[i].x << ',' << data.points[i].y << ',' << int(data.labels.labels[i]) << '\n';
    }
    write_text_file(o.scatter, out.str());
  }
  return kOk;
}

int cmd_kmeans(Options& o) {
  finish(o);
  const PreparedData data = prepare_data(o.cfg);
  KMeansOptions km;
  km.seed = o.cfg.seed;
  km.max_iter = o.cfg.kmeans_max_iter;
  const Assignment a = kmeans(data.points, km);
  json j = scored(data.points, data.labels, a.genes);
  j["iterations"] = a.iterations;
  j["converged"] = a.converged;
  j["objective_trace"] = a.objective_trace;
  write_out(o, j.dump(2) + "\n");
  return kOk;
}

int cmd_hga(Options& o) {
  finish(o);
  const PreparedData data = prepare_data(o.cfg);
  HgaConfig hga = o.cfg.hga;
  hga.seed = o.cfg.seed;
  const HgaResult r = run_hga(data.points, hga);
  json j = scored(data.points, data.labels, r.best_chromosome.genes());
  j["generations_run"] = r.generations_run;
  j["terminated_by"] = std::string(to_string(r.terminated_by));
  write_out(o, j.dump(2) + "\n");
  if (!o.trace.empty()) write_trace_file(o.trace, r.min_fitness_trace, r.max_fitness_trace);
  return kOk;
}

ConfusionMatrix parse_counts(const std::string& text) {
  std::vector<std::size_t> v;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      const long long x = std::stoll(part, &used);
      if (used != part.size() || x < 0) throw std::invalid_argument(part);
      v.push_back(static_cast<std::size_t>(x));
    } catch (const std::logic_error&) {
      throw InputError("--counts: '" + part + "' is not a non-negative integer");
    }
  }
  if (v.size() != 4) throw InputError("--counts expects tn,fp,fn,tp");
  return ConfusionMatrix{.tp = v[3], .tn = v[0], .fp = v[1], .fn = v[2]};
}

// Reads a CSV with `predicted` and `actual` columns (e.g. a scatter export).
ConfusionMatrix read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  const auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError(path + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t pi = col("predicted");
  const std::size_t ai = col("actual");
  Genes predicted, actual;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const auto bit = [&](std::size_t i) -> std::uint8_t {
      if (i >= cells.size() || (cells[i] != "0" && cells[i] != "1")) {
        throw InputError(path + ":" + std::to_string(lineno) + ": expected 0 or 1 in column " + header[i]);
      }
      return cells[i] == "1" ? 1 : 0;
    };
    predicted.push_back(bit(pi));
    actual.push_back(bit(ai));
  }
  return confusion_matrix(predicted, actual);
}

int cmd_evaluate(Options& o) {
  const ReportFormat format = parse_report_format(o.format);
  const ConfusionMatrix cm = o.counts.empty() ? read_predictions(o.predictions) : parse_counts(o.counts);
  if (format == ReportFormat::kCsvSummary) {
    write_out(o, metrics_csv_summary(cm));
    return kOk;
  }
  json j;
  j["confusion_matrix"] = confusion_json(cm);
  j["metrics"] = metrics_json(metrics(cm));
  write_out(o, j.dump(2) + "\n");
  return kOk;
}

int cmd_experiment(Options& o) {
  finish(o);
  const ReportFormat format = parse_report_format(o.format);
  const ExperimentReport report = run_experiment(o.cfg);
  const EmitOptions emit{.zero_timings = o.zero_timings};
  if (o.output.empty()) {
    std::cout << (format == ReportFormat::kJson ? report_to_json(report, emit) : report_to_csv_summary(report));
  } else {
    emit_report(report, format, o.output, emit);
  }
  if (!o.trace.empty()) {
    const auto& r = report.replicates.front();
    write_trace_file(o.trace, r.hga_min_fitness_trace, r.hga_max_fitness_trace);
  }
  if (!o.scatter.empty()) {
    std::ostringstream out;
    write_scatter_csv(out, report);
    write_text_file(o.scatter, out.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-way clustering of heart-disease records with a hybrid genetic algorithm"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Options o;

  auto* pca = app.add_subcommand("pca", "Project the dataset onto its first two principal components");
  add_data_options(pca, o);
  add_output_option(pca, o);
  pca->add_option("--scatter", o.scatter, "Write pc1,pc2,actual for every row");

  auto* km = app.add_subcommand("kmeans", "Run the two-cluster k-means baseline on the PCA plane");
  add_data_options(km, o);
  add_seed_option(km, o);
  add_output_option(km, o);
  km->add_option("--max-iter", o.cfg.kmeans_max_iter)->capture_default_str();

  auto* hga = app.add_subcommand("hga", "Run the hybrid genetic algorithm on the PCA plane");
  add_data_options(hga, o);
  add_seed_option(hga, o);
  add_output_option(hga, o);
  add_hga_options(hga, o);

  auto* ev = app.add_subcommand("evaluate", "Metrics for a confusion matrix or a predictions file");
  auto* counts = ev->add_option("--counts", o.counts, "tn,fp,fn,tp");
  auto* preds = ev->add_option("--predictions", o.predictions, "CSV with predicted and actual columns");
  counts->excludes(preds);
  ev->add_option("--format", o.format, "json or csv-summary")->capture_default_str();
  add_output_option(ev, o);

  auto* ex = app.add_subcommand("experiment", "Full pipeline: PCA, k-means baseline, HGA and metrics");
  add_data_options(ex, o);
  add_seed_option(ex, o);
  add_output_option(ex, o);
  add_hga_options(ex, o);
  ex->add_option("--format", o.format, "json or csv-summary")->capture_default_str();
  ex->add_option("--replicates", o.cfg.replicates, "Number of seeds derived from --seed")->capture_default_str();
  ex->add_option("--jobs", o.cfg.jobs, "Replicates run in parallel")->capture_default_str();
  ex->add_option("--kmeans-max-iter", o.cfg.kmeans_max_iter)->capture_default_str();
  ex->add_option("--scatter", o.scatter, "Write pc1,pc2,predicted,actual for the first replicate");
  ex->add_flag("--zero-timings", o.zero_timings, "Report every timing as 0 for byte-exact comparisons");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*pca) return cmd_pca(o);
    if (*km) return cmd_kmeans(o);
    if (*hga) return cmd_hga(o);
    if (*ev) {
      if (o.counts.empty() && o.predictions.empty()) throw InputError("evaluate needs --counts or --predictions");
      return cmd_evaluate(o);
    }
    return cmd_experiment(o);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const ContractError& e) {
    std::cerr << "contract error: " << e.what() << '\n';
    return kContract;
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kOutput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
