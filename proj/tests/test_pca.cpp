#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "hgacluster/error.hpp"
#include "hgacluster/pca.hpp"
#include "hgacluster/rng.hpp"
#include "support.hpp"

using namespace hgacluster;

namespace {

FeatureMatrix features_of(Eigen::MatrixXd values) {
  FeatureMatrix f;
  f.values = std::move(values);
  return f;
}

Eigen::MatrixXd random_symmetric(Rng& rng, Eigen::Index d) {
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = 4.0 * rng.uniform01() - 2.0;
  }
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd random_sample(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = (j + 1) * (rng.uniform01() - 0.3) + 0.5 * j;
  }
  return x;
}

double sample_variance(const Eigen::VectorXd& v) {
  return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}

FeatureMatrix uci_features(bool standardized) {
  auto [f, labels] = split_features_target(
      impute_missing(load_heart_csv(testing::uci_csv()), ImputeStrategy::kMedian));
  return standardized ? standardize(f) : f;
}

}  // namespace

TEST_SUITE("pca") {
  TEST_CASE("covariance of identical columns is the common variance everywhere") {
    const Eigen::MatrixXd c = covariance_matrix(Eigen::MatrixXd{{1, 1}, {2, 2}, {4, 4}});
    const double var = 7.0 / 3.0;  // values 1,2,4: mean 7/3, sum sq dev 14/3, / 2
    CHECK(c(0, 0) == doctest::Approx(var));
    CHECK(c(0, 1) == doctest::Approx(var));
    CHECK(c(1, 0) == doctest::Approx(var));
    CHECK(c(1, 1) == doctest::Approx(var));
  }

  TEST_CASE("covariance of a centered cross uses divisor n - 1") {
    const Eigen::MatrixXd c = covariance_matrix(Eigen::MatrixXd{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    CHECK(c(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c(0, 1) == 0.0);
    CHECK(c(1, 0) == 0.0);
  }

  TEST_CASE("covariance edge cases") {
    CHECK(covariance_matrix(Eigen::MatrixXd{{3}, {3}, {3}}).isZero(0.0));
    CHECK_THROWS_AS(covariance_matrix(Eigen::MatrixXd{{1, 2}}), ContractError);
    Rng rng(7);
    const Eigen::MatrixXd c = covariance_matrix(random_sample(rng, 50, 13));
    CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("identity matrix") {
    const EigenPairs e = symmetric_eigendecomposition(Eigen::MatrixXd::Identity(3, 3));
    CHECK(e.values.isApprox(Eigen::Vector3d::Ones()));
    CHECK((e.vectors.transpose() * e.vectors).isIdentity(1e-12));
  }

  TEST_CASE("diagonal matrix gives positive axis vectors") {
    const EigenPairs e = symmetric_eigendecomposition(Eigen::MatrixXd{{1, 0}, {0, 4}});
    CHECK(e.values(0) == 4.0);
    CHECK(e.values(1) == 1.0);
    CHECK(e.vectors.col(0).isApprox(Eigen::Vector2d(0, 1)));
    CHECK(e.vectors.col(1).isApprox(Eigen::Vector2d(1, 0)));
  }

  TEST_CASE("2x2 closed form") {
    // [[a, b], [b, a]] has eigenvalues a +- b with directions (1, +-1)/sqrt(2).
    const EigenPairs e = symmetric_eigendecomposition(Eigen::MatrixXd{{2, 1}, {1, 2}});
    CHECK(e.values(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-14));
    const double h = 1.0 / std::sqrt(2.0);
    CHECK((e.vectors.col(0) - Eigen::Vector2d(h, h)).norm() <= 1e-12);
    CHECK((e.vectors.col(1) - Eigen::Vector2d(h, -h)).norm() <= 1e-12);
  }

  TEST_CASE("contract violations") {
    CHECK_THROWS_AS(symmetric_eigendecomposition(Eigen::MatrixXd{{1, 2}, {0, 1}}), ContractError);
    CHECK_THROWS_AS(symmetric_eigendecomposition(Eigen::MatrixXd::Zero(2, 3)), ContractError);
  }

  TEST_CASE("random symmetric matrices satisfy the residual contract") {
    Rng rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
      const auto d = static_cast<Eigen::Index>(1 + rng.below(13));
      const Eigen::MatrixXd c = random_symmetric(rng, d);
      const EigenPairs e = symmetric_eigendecomposition(c);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double lambda = e.values(i);
        const Eigen::VectorXd v = e.vectors.col(i);
        CHECK((c * v - lambda * v).norm() <= 1e-8 * std::max(1.0, std::abs(lambda)));
        CHECK(std::abs(v.norm() - 1.0) <= 1e-9);
        if (i > 0) CHECK(e.values(i - 1) >= e.values(i));
        Eigen::Index lead = 0;
        for (Eigen::Index k = 1; k < d; ++k) {
          if (std::abs(v(k)) > std::abs(v(lead))) lead = k;
        }
        CHECK(v(lead) > 0.0);
      }
      const Eigen::MatrixXd gram = e.vectors.transpose() * e.vectors;
      CHECK((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-8);

      // Second route: Eigen's own solver must agree on the spectrum.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(c);
      Eigen::VectorXd expected = ref.eigenvalues().reverse();
      CHECK((expected - e.values).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, c.norm()));
    }
  }

  TEST_CASE("rank-one data has no second component") {
    const auto f = features_of(Eigen::MatrixXd{{0, 0}, {1, 1}, {2, 2}, {5, 5}});
    const PcaResult r = run_pca(f);
    CHECK(r.projection.scores.col(1).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(r.projection.explained_variance_ratio[0] == doctest::Approx(1.0));
  }

  TEST_CASE("full-rank projection round-trips the centered data") {
    Rng rng(11);
    for (Eigen::Index d : {2, 5, 13}) {
      const auto f = features_of(random_sample(rng, 40, d));
      const EigenPairs e = symmetric_eigendecomposition(covariance_matrix(f));
      const ProjectedDataset p = project(f, e, static_cast<std::size_t>(d));
      const Eigen::MatrixXd centered = f.values.rowwise() - f.values.colwise().mean();
      CHECK((p.scores * e.vectors.transpose() - centered).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }

  TEST_CASE("projected variances match eigenvalues") {
    Rng rng(5);
    const auto f = features_of(random_sample(rng, 120, 9));
    const Eigen::MatrixXd cov = covariance_matrix(f);
    const EigenPairs e = symmetric_eigendecomposition(cov);
    const ProjectedDataset p = project(f, e, 9);
    CHECK(std::abs(sample_variance(p.scores.col(0)) - e.values(0)) <= 1e-6 * e.values(0));
    double total = 0.0;
    for (Eigen::Index i = 0; i < 9; ++i) total += sample_variance(p.scores.col(i));
    CHECK(std::abs(total - cov.trace()) <= 1e-6 * cov.trace());
  }

  TEST_CASE("explained variance ratios are ordered and bounded") {
    const PcaResult r = run_pca(uci_features(true));
    const auto& ratio = r.projection.explained_variance_ratio;
    REQUIRE(ratio.size() == 2);
    CHECK(ratio[0] >= ratio[1]);
    CHECK(ratio[1] >= 0.0);
    CHECK(ratio[0] + ratio[1] <= 1.0 + 1e-9);
  }

  TEST_CASE("row order carries through the projection") {
    Rng rng(3);
    const auto f = features_of(random_sample(rng, 30, 4));
    const PcaResult a = run_pca(f, 2);
    Eigen::MatrixXd reversed = f.values.colwise().reverse();
    const PcaResult b = run_pca(features_of(reversed), 2);
    for (Eigen::Index i = 0; i < 30; ++i) {
      CHECK((a.projection.scores.row(i) - b.projection.scores.row(29 - i)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("k larger than d is rejected") {
    const auto f = features_of(Eigen::MatrixXd{{0, 1}, {1, 0}, {2, 2}});
    const EigenPairs e = symmetric_eigendecomposition(covariance_matrix(f));
    CHECK_THROWS_AS(project(f, e, 3), ContractError);
  }

  // Frozen from an independent numpy run (np.cov + np.linalg.eigh on the
  // median-imputed Cleveland table).
  TEST_CASE("Cleveland projection regression") {
    SUBCASE("standardized") {
      const PcaResult r = run_pca(uci_features(true));
      CHECK(r.projection.size() == 303);
      CHECK(r.projection.explained_variance_ratio[0] == doctest::Approx(0.2368727927816149).epsilon(1e-10));
      CHECK(r.projection.explained_variance_ratio[1] == doctest::Approx(0.1230713789365437).epsilon(1e-10));
      CHECK(r.eigen.values(0) == doctest::Approx(3.079346306160993).epsilon(1e-10));
      CHECK(r.projection.scores(0, 0) == doctest::Approx(1.160801991724042).epsilon(1e-9));
      CHECK(r.projection.scores(0, 1) == doctest::Approx(-0.928086533517918).epsilon(1e-9));
    }
    SUBCASE("raw attributes") {
      const PcaResult r = run_pca(uci_features(false));
      CHECK(r.projection.explained_variance_ratio[0] == doctest::Approx(0.7465007149588527).epsilon(1e-10));
      CHECK(r.projection.explained_variance_ratio[1] == doctest::Approx(0.15007769715709085).epsilon(1e-10));
      CHECK(r.projection.scores(0, 0) == doctest::Approx(-12.665421777050401).epsilon(1e-9));
      CHECK(r.projection.scores(0, 1) == doctest::Approx(-2.8162790437851712).epsilon(1e-9));
    }
  }
}
