#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hgacluster/error.hpp"
#include "hgacluster/experiment.hpp"

namespace py = pybind11;
using namespace hgacluster;

namespace {

std::vector<Point> points_from(const Eigen::MatrixX2d& xy) {
  std::vector<Point> out(static_cast<std::size_t>(xy.rows()));
  for (Eigen::Index i = 0; i < xy.rows(); ++i) out[static_cast<std::size_t>(i)] = {xy(i, 0), xy(i, 1)};
  return out;
}

Eigen::MatrixX2d points_to(const std::vector<Point>& pts) {
  Eigen::MatrixX2d out(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = pts[i].x;
    out(static_cast<Eigen::Index>(i), 1) = pts[i].y;
  }
  return out;
}

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["error"] = m.error;
  d["recall"] = m.recall;
  d["precision"] = m.precision;
  d["f1"] = m.f1;
  return d;
}

ExperimentConfig make_config(const std::string& input, std::uint64_t seed, const std::string& impute,
                             bool standardize, std::size_t population_size, std::size_t doldrum_factor,
                             std::size_t max_generations, bool improvement, std::size_t replicates,
                             std::size_t jobs) {
  ExperimentConfig cfg;
  cfg.input = input;
  cfg.seed = seed;
  cfg.impute = parse_impute_strategy(impute);
  cfg.standardize = standardize;
  cfg.hga.population_size = population_size;
  cfg.hga.doldrum_factor = doldrum_factor;
  cfg.hga.max_generations = max_generations;
  cfg.hga.improvement_enabled = improvement;
  cfg.replicates = replicates;
  cfg.jobs = jobs;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "PCA + hybrid genetic algorithm clustering of heart-disease records";
  m.attr("__version__") = std::string(version());

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ContractError>(m, "ContractError", base.ptr());
  py::register_exception<OutputError>(m, "OutputError", base.ptr());

  m.def(
      "load_points",
      [](const std::string& input, const std::string& impute, bool standardize) {
        ExperimentConfig cfg;
        cfg.input = input;
        cfg.impute = parse_impute_strategy(impute);
        cfg.standardize = standardize;
        const PreparedData data = prepare_data(cfg);
        return py::make_tuple(points_to(data.points), data.labels.labels,
                              data.pca.projection.explained_variance_ratio);
      },
      py::arg("input"), py::arg("impute") = "median", py::arg("standardize") = true,
      "Load, impute, standardize and project a CSV. Returns (points n x 2, labels, explained variance ratios).");

  m.def(
      "pca",
      [](const Eigen::MatrixXd& x, std::size_t k) {
        FeatureMatrix f;
        f.values = x;
        const PcaResult r = run_pca(f, k);
        return py::make_tuple(r.eigen.values, r.eigen.vectors, r.projection.scores,
                              r.projection.explained_variance_ratio);
      },
      py::arg("x"), py::arg("k") = 2,
      "PCA of a sample matrix. Returns (eigenvalues, eigenvectors, scores, explained variance ratios).");

  m.def(
      "fitness",
      [](const Eigen::MatrixX2d& xy, const Genes& genes) {
        return chromosome_fitness(points_from(xy), Chromosome(genes)).f;
      },
      py::arg("points"), py::arg("genes"), "Sum over both clusters of point-to-centroid distances.");

  m.def(
      "kmeans",
      [](const Eigen::MatrixX2d& xy, std::uint64_t seed, std::size_t max_iter) {
        KMeansOptions opt;
        opt.seed = seed;
        opt.max_iter = max_iter;
        const Assignment a = kmeans(points_from(xy), opt);
        return py::make_tuple(a.genes, a.iterations, a.converged);
      },
      py::arg("points"), py::arg("seed") = 0, py::arg("max_iter") = 300,
      "Two-cluster Lloyd k-means. Returns (genes, iterations, converged).");

  m.def(
      "hga",
      [](const Eigen::MatrixX2d& xy, std::uint64_t seed, std::size_t population_size, std::size_t doldrum_factor,
         std::size_t max_generations, bool improvement, bool mutation) {
        HgaConfig cfg;
        cfg.seed = seed;
        cfg.population_size = population_size;
        cfg.doldrum_factor = doldrum_factor;
        cfg.max_generations = max_generations;
        cfg.improvement_enabled = improvement;
        cfg.mutation_enabled = mutation;
        const auto pts = points_from(xy);
        HgaResult r;
        {
          py::gil_scoped_release release;
          r = run_hga(pts, cfg);
        }
        py::dict d;
        d["genes"] = r.best_chromosome.genes();
        d["fitness"] = r.best_fitness;
        d["generations"] = r.generations_run;
        d["terminated_by"] = std::string(to_string(r.terminated_by));
        d["min_fitness_trace"] = r.min_fitness_trace;
        d["max_fitness_trace"] = r.max_fitness_trace;
        return d;
      },
      py::arg("points"), py::arg("seed") = 0, py::arg("population_size") = 2500, py::arg("doldrum_factor") = 2,
      py::arg("max_generations") = 1000000, py::arg("improvement") = true, py::arg("mutation") = true,
      "Run the hybrid genetic algorithm on 2-D points.");

  m.def(
      "evaluate",
      [](const Genes& assignment, const Genes& labels) {
        const auto a = align_clusters_to_labels(assignment, labels);
        const auto cm = confusion_matrix(a.mapped, labels);
        py::dict d;
        d["flipped"] = a.flipped;
        d["tp"] = cm.tp;
        d["tn"] = cm.tn;
        d["fp"] = cm.fp;
        d["fn"] = cm.fn;
        d["metrics"] = metrics_dict(metrics(cm));
        return d;
      },
      py::arg("assignment"), py::arg("labels"), "Align clusters to labels and score them.");

  m.def(
      "metrics_from_counts",
      [](std::size_t tn, std::size_t fp, std::size_t fn, std::size_t tp) {
        return metrics_dict(metrics(ConfusionMatrix{.tp = tp, .tn = tn, .fp = fp, .fn = fn}));
      },
      py::arg("tn"), py::arg("fp"), py::arg("fn"), py::arg("tp"), "Percent metrics of a confusion matrix.");

  m.def(
      "run_experiment",
      [](const std::string& input, std::uint64_t seed, const std::string& impute, bool standardize,
         std::size_t population_size, std::size_t doldrum_factor, std::size_t max_generations, bool improvement,
         std::size_t replicates, std::size_t jobs, bool zero_timings) {
        const ExperimentConfig cfg = make_config(input, seed, impute, standardize, population_size,
                                                 doldrum_factor, max_generations, improvement, replicates, jobs);
        py::gil_scoped_release release;
        return report_to_json(run_experiment(cfg), {.zero_timings = zero_timings});
      },
      py::arg("input"), py::arg("seed") = 42, py::arg("impute") = "median", py::arg("standardize") = true,
      py::arg("population_size") = 2500, py::arg("doldrum_factor") = 2, py::arg("max_generations") = 1000000,
      py::arg("improvement") = true, py::arg("replicates") = 1, py::arg("jobs") = 1,
      py::arg("zero_timings") = false, "Full pipeline; returns the JSON report text.");
}
