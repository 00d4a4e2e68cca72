#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "lvke/error.hpp"
#include "lvke/robust_center.hpp"
#include "oracles.hpp"

using namespace lvke;

namespace {

Eigen::MatrixXd gaussian(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(rng);
  return x;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("sample mean") {
  Eigen::MatrixXd rows(2, 2);
  rows << 0, 0, 2, 2;
  CHECK(sample_mean(rows).mean.isApprox(Eigen::Vector2d(1, 1)));
  CHECK(sample_mean(rows).kind == CenterKind::SampleMean);

  Eigen::MatrixXd one(1, 3);
  one << 4, -1, 7;
  CHECK(sample_mean(one).mean == one.row(0).transpose());

  Eigen::MatrixXd sym(4, 2);
  sym << 1, 2, -1, -2, 3, -5, -3, 5;
  CHECK(sample_mean(sym).mean.isZero());
}

TEST_CASE("covariance denominators") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 2;
  CHECK(covariance(x, CovarianceKind::Sample)(0, 0) == doctest::Approx(2.0));
  CHECK(covariance(x, CovarianceKind::MaxLikelihood)(0, 0) == doctest::Approx(1.0));

  const Eigen::MatrixXd same = Eigen::MatrixXd::Constant(5, 3, 1.5);
  CHECK(covariance(same, CovarianceKind::Sample).isZero());

  const auto g = gaussian(30, 4, 3);
  CHECK(covariance(g, CovarianceKind::Sample)
            .isApprox(covariance(g, CovarianceKind::MaxLikelihood) * 30.0 / 29.0));

  CHECK(code_of([] { covariance(Eigen::MatrixXd::Ones(1, 2), CovarianceKind::Sample); }) ==
        ErrorCode::InsufficientSamples);
  CHECK(code_of([&] { covariance(g, CovarianceKind::Robust); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("PCA of points on a line") {
  Eigen::MatrixXd x(5, 2);
  x << 0, 0, 1, 1, 2, 2, 3, 3, -1, -1;
  const auto pca = pca_fit(x, 2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(pca.basis.col(0).isApprox(Eigen::Vector2d(r, r)));
  CHECK(std::abs(pca.explained_variance(1)) < 1e-12);
  CHECK(pca.explained_variance(0) == doctest::Approx(2.5 * 2.0));
}

TEST_CASE("PCA round trip and orthonormal basis") {
  const auto x = gaussian(40, 6, 5);
  const auto pca = pca_fit(x, 6);
  CHECK((pca_inverse_transform(pca_transform(x, pca), pca) - x).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((pca.basis.transpose() * pca.basis - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
  for (Eigen::Index i = 1; i < pca.explained_variance.size(); ++i)
    CHECK(pca.explained_variance(i) <= pca.explained_variance(i - 1));
  // manual reconstruction: scores times basis transposed plus the means
  const Eigen::MatrixXd back = (pca_transform(x, pca) * pca.basis.transpose()).rowwise() +
                               pca.column_means.transpose();
  CHECK(back.isApprox(x, 1e-10));
}

TEST_CASE("PCA ignores a constant column") {
  auto x = gaussian(20, 3, 9);
  x.col(1).setConstant(4.0);
  const auto pca = pca_fit(x, 3);
  CHECK(std::abs(pca.basis(1, 0)) < 1e-12);
  CHECK(std::abs(pca.basis(1, 1)) < 1e-12);
}

TEST_CASE("PCA component count is validated") {
  const auto x = gaussian(5, 3, 1);
  CHECK(code_of([&] { pca_fit(x, 0); }) == ErrorCode::InvalidComponentCount);
  CHECK(code_of([&] { pca_fit(x, 4); }) == ErrorCode::InvalidComponentCount);
  const auto pca = pca_fit(x, 2);
  CHECK(code_of([&] { pca_transform(gaussian(3, 2, 1), pca); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("PCA sign convention is deterministic") {
  const auto x = gaussian(25, 4, 17);
  const auto a = pca_fit(x, 3);
  const auto b = pca_fit(-x, 3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    Eigen::Index at;
    a.basis.col(c).cwiseAbs().maxCoeff(&at);
    CHECK(a.basis(at, c) > 0.0);
  }
  CHECK(a.basis.cwiseAbs().isApprox(b.basis.cwiseAbs(), 1e-9));
}

TEST_CASE("default support size") {
  CHECK(default_support_size(200, 2) == 101);
  CHECK(default_support_size(5, 2) == 4);
  CHECK(default_support_size(10, 10) == 10);
}

TEST_CASE("C-steps never increase the determinant") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = gaussian(40, 3, 100 + static_cast<std::uint64_t>(trial));
    for (Eigen::Index i = 0; i < 8; ++i) x.row(i).array() += 6.0;
    std::vector<std::size_t> idx(40);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(22);
    auto fit = fit_subset(x, idx);
    for (int s = 0; s < 10; ++s) {
      const auto next = c_step(x, fit, 22);
      CHECK(next.determinant <= fit.determinant * (1.0 + 1e-12));
      CHECK(next.subset.size() == 22);
      fit = next;
    }
  }
}

TEST_CASE("fast_mcd finds the exhaustive optimum on tiny samples") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 5 + seed % 6;
    auto x = gaussian(n, 2, 1000 + seed);
    x.row(0) << 8.0, -7.0;
    const std::size_t h = default_support_size(n, 2);
    const auto best = oracle::exhaustive_mcd(x, h);
    McdOptions opt;
    opt.seed = seed;
    const auto est = fast_mcd(x, opt);
    CAPTURE(seed);
    CHECK(est.support_size == h);
    CHECK(est.determinant == doctest::Approx(best.determinant).epsilon(1e-9));
    CHECK(est.support == best.subset);
  }
}

TEST_CASE("fast_mcd resists contamination") {
  const auto clean = gaussian(200, 2, 2024);
  const auto plain = fast_mcd(clean);
  CHECK((plain.mean - sample_mean(clean).mean).norm() < 0.3);

  auto dirty = clean;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> jitter(0.0, 0.2);
  for (Eigen::Index i = 0; i < 40; ++i) dirty.row(i) << 10.0 + jitter(rng), 10.0 + jitter(rng);
  const auto robust = fast_mcd(dirty);
  CHECK(robust.mean.norm() < 0.5);
  CHECK(sample_mean(dirty).mean.norm() > 1.5);
  CHECK(robust.kind == CenterKind::RobustMcd);
  CHECK(robust.covariance_kind == CovarianceKind::Robust);
  for (const auto i : robust.support) CHECK(i >= 40);
}

TEST_CASE("fast_mcd is reproducible for a seed and uses the support size") {
  const auto x = gaussian(60, 3, 77);
  McdOptions opt;
  opt.seed = 9;
  const auto a = fast_mcd(x, opt);
  const auto b = fast_mcd(x, opt);
  CHECK(a.support == b.support);
  CHECK(a.mean == b.mean);
  opt.workers = 3;
  CHECK(fast_mcd(x, opt).support == a.support);
  opt.support_size = 60;
  const auto all = fast_mcd(x, opt);
  CHECK(all.mean.isApprox(sample_mean(x).mean));
  CHECK(all.covariance->isApprox(covariance(x, CovarianceKind::MaxLikelihood)));
}

TEST_CASE("fast_mcd argument checks") {
  CHECK(code_of([] { fast_mcd(gaussian(3, 3, 1)); }) == ErrorCode::InsufficientSamples);
  McdOptions opt;
  opt.support_size = 4;
  CHECK(code_of([&] { fast_mcd(gaussian(10, 2, 1), opt); }) == ErrorCode::InvalidArgument);
  opt.support_size = 11;
  CHECK(code_of([&] { fast_mcd(gaussian(10, 2, 1), opt); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("singular data gets a regularized covariance") {
  Eigen::MatrixXd x(30, 3);
  const auto g = gaussian(30, 2, 4);
  x << g, g.col(0) * 2.0 - g.col(1);
  const auto est = fast_mcd(x);
  CHECK(est.regularized);
  CHECK(est.covariance->llt().info() == Eigen::Success);
}

TEST_CASE("reweighting keeps the outliers out") {
  auto x = gaussian(100, 2, 31);
  for (Eigen::Index i = 0; i < 15; ++i) x.row(i) << 12.0 + 0.1 * static_cast<double>(i), -9.0;
  McdOptions opt;
  opt.reweight = true;
  const auto est = fast_mcd(x, opt);
  CHECK(est.mean.norm() < 0.5);
  CHECK(est.support.size() >= 50);
  for (const auto i : est.support) CHECK(i >= 15);
}

TEST_CASE("center text format") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0, 2, 4;
  auto c = sample_mean(x);
  std::ostringstream plain;
  write_center(plain, c);
  CHECK(plain.str() == "mean 1.000000 2.000000\n");
  c.covariance = Eigen::Matrix2d::Identity();
  std::ostringstream with_cov;
  write_center(with_cov, c);
  CHECK(with_cov.str() == "mean 1.000000 2.000000\ncov 1.000000 0.000000\ncov 0.000000 1.000000\n");
}
