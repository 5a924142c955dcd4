#include "hgacluster/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hgacluster/error.hpp"

namespace hgacluster {
namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_sq(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return sum;
}

// Rotates rows/columns p and q of `a` so that a(p, q) becomes zero, and
// accumulates the rotation into `v`.
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Eigen::Index d = a.rows();
  for (Eigen::Index k = 0; k < d; ++k) {
    const double x = a(k, p);
    const double y = a(k, q);
    a(k, p) = c * x - s * y;
    a(k, q) = s * x + c * y;
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    const double x = a(p, k);
    const double y = a(q, k);
    a(p, k) = c * x - s * y;
    a(q, k) = s * x + c * y;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double x = v(k, p);
    const double y = v(k, q);
    v(k, p) = c * x - s * y;
    v(k, q) = s * x + c * y;
  }
}

void orient(Eigen::Ref<Eigen::VectorXd> vec) {
  Eigen::Index lead = 0;
  for (Eigen::Index i = 1; i < vec.size(); ++i) {
    if (std::abs(vec(i)) > std::abs(vec(lead))) lead = i;
  }
  if (vec(lead) < 0.0) vec = -vec;
}

}  // namespace

Eigen::MatrixXd covariance_matrix(const Eigen::MatrixXd& values) {
  const Eigen::Index n = values.rows();
  if (n < 2) {
    throw ContractError("covariance_matrix: need at least two rows, got " + std::to_string(n));
  }
  const Eigen::RowVectorXd mean = values.colwise().mean();
  const Eigen::MatrixXd centered = values.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  return sym;
}

Eigen::MatrixXd covariance_matrix(const FeatureMatrix& features) {
  return covariance_matrix(features.values);
}

EigenPairs symmetric_eigendecomposition(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) {
    throw ContractError("symmetric_eigendecomposition: matrix is " + std::to_string(cov.rows()) +
                        "x" + std::to_string(cov.cols()) + ", not square");
  }
  if (!cov.allFinite()) throw ContractError("symmetric_eigendecomposition: non-finite entry");
  const Eigen::Index d = cov.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-9) {
        throw ContractError("symmetric_eigendecomposition: input not symmetric at (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }

  Eigen::MatrixXd a = 0.5 * (cov + cov.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(d, d);
  const double scale = a.squaredNorm();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = off_diagonal_sq(a);
    if (off == 0.0 || off <= 1e-32 * scale) break;
    for (Eigen::Index p = 0; p < d - 1; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        if (a(p, q) != 0.0) rotate(a, v, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

  EigenPairs out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src);
    out.vectors.col(i) = v.col(src).normalized();
    orient(out.vectors.col(i));
  }
  return out;
}

ProjectedDataset project(const FeatureMatrix& features, const EigenPairs& eig, std::size_t k) {
  const auto d = static_cast<std::size_t>(features.values.cols());
  if (k == 0 || k > d) {
    throw ContractError("project: k = " + std::to_string(k) + " must be in 1.." + std::to_string(d));
  }
  if (static_cast<std::size_t>(eig.vectors.rows()) != d) {
    throw ContractError("project: eigenvectors have dimension " +
                        std::to_string(eig.vectors.rows()) + ", features have " + std::to_string(d));
  }

  const Eigen::RowVectorXd mean = features.values.colwise().mean();
  const Eigen::MatrixXd centered = features.values.rowwise() - mean;
  const auto kk = static_cast<Eigen::Index>(k);

  ProjectedDataset out;
  out.scores = centered * eig.vectors.leftCols(kk);

  const double trace = eig.values.sum();
  for (Eigen::Index i = 0; i < kk; ++i) {
    out.explained_variance_ratio.push_back(trace > 0.0 ? std::max(0.0, eig.values(i) / trace) : 0.0);
  }
  return out;
}

PcaResult run_pca(const FeatureMatrix& features, std::size_t k) {
  PcaResult result;
  result.eigen = symmetric_eigendecomposition(covariance_matrix(features));
  result.projection = project(features, result.eigen, k);
  return result;
}

}  // namespace hgacluster
