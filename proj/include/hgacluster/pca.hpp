#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hgacluster/dataset.hpp"

namespace hgacluster {

/// Eigenvalues in non-increasing order; column i of `vectors` is the unit
/// eigenvector for values[i], oriented so its largest-magnitude coordinate is
/// positive (lowest index wins ties).
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Scores of every row on the leading principal directions.
struct ProjectedDataset {
  Eigen::MatrixXd scores;  // n x k; column 0 is PC1
  std::vector<double> explained_variance_ratio;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(scores.rows()); }
};

/// Sample covariance (divisor n - 1). Throws ContractError when n < 2.
Eigen::MatrixXd covariance_matrix(const FeatureMatrix& features);
Eigen::MatrixXd covariance_matrix(const Eigen::MatrixXd& values);

/// Cyclic Jacobi rotations on a symmetric matrix. Throws ContractError if the
/// input is not square or not symmetric to within 1e-9.
EigenPairs symmetric_eigendecomposition(const Eigen::MatrixXd& cov);

/// Centers `features` by its column means and projects onto the first k
/// eigenvectors. explained_variance_ratio[i] = values[i] / trace.
ProjectedDataset project(const FeatureMatrix& features, const EigenPairs& eig, std::size_t k = 2);

/// covariance -> eigendecomposition -> project.
struct PcaResult {
  EigenPairs eigen;
  ProjectedDataset projection;
};
PcaResult run_pca(const FeatureMatrix& features, std::size_t k = 2);

}  // namespace hgacluster
