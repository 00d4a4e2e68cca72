#include "lvke/robust_center.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "lvke/error.hpp"

namespace lvke {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Relative eigenvalue floor below which a covariance counts as singular.
constexpr double kSingularRatio = 1e-12;

bool is_singular(const Eigen::VectorXd& eigenvalues) {
  const double top = eigenvalues.maxCoeff();
  return !(top > 0.0) || eigenvalues.minCoeff() <= kSingularRatio * top;
}

Eigen::VectorXd row_mean(const Eigen::MatrixXd& rows) {
  return rows.colwise().mean().transpose();
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  char buf[64];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, i == 0 ? "%.6f" : " %.6f", v(i));
    out << buf;
  }
  out << '\n';
}

}  // namespace

void write_center(std::ostream& out, const CenterEstimate& center) {
  out << "mean ";
  write_vector(out, center.mean);
  if (center.covariance) {
    for (Eigen::Index r = 0; r < center.covariance->rows(); ++r) {
      out << "cov ";
      write_vector(out, center.covariance->row(r).transpose());
    }
  }
}

CenterEstimate sample_mean(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 1) throw Error(ErrorCode::InsufficientSamples, "mean of zero rows");
  CenterEstimate c;
  c.mean = row_mean(rows);
  c.kind = CenterKind::SampleMean;
  return c;
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& rows, CovarianceKind kind) {
  const Eigen::Index n = rows.rows();
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "covariance needs at least two rows");
  const Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  const Eigen::MatrixXd scatter = centered.transpose() * centered;
  switch (kind) {
    case CovarianceKind::Sample: return scatter / static_cast<double>(n - 1);
    case CovarianceKind::MaxLikelihood: return scatter / static_cast<double>(n);
    case CovarianceKind::Robust: break;
  }
  throw Error(ErrorCode::InvalidArgument, "robust covariance comes from fast_mcd");
}

PcaProjection pca_fit(const Eigen::MatrixXd& rows, std::size_t m) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto dim = static_cast<std::size_t>(rows.cols());
  if (m < 1 || m > std::min(n, dim))
    throw Error(ErrorCode::InvalidComponentCount,
                "requested " + std::to_string(m) + " components from " + std::to_string(n) + "x" +
                    std::to_string(dim) + " data");

  PcaProjection pca;
  pca.components = m;
  pca.column_means = row_mean(rows);
  const Eigen::MatrixXd centered = rows.rowwise() - pca.column_means.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto mi = static_cast<Eigen::Index>(m);
  pca.basis = svd.matrixV().leftCols(mi);
  for (Eigen::Index j = 0; j < mi; ++j) {
    Eigen::Index arg = 0;
    pca.basis.col(j).cwiseAbs().maxCoeff(&arg);
    if (pca.basis(arg, j) < 0.0) pca.basis.col(j) *= -1.0;
  }
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  pca.explained_variance = svd.singularValues().head(mi).array().square() / denom;
  return pca;
}

Eigen::MatrixXd pca_transform(const Eigen::MatrixXd& rows, const PcaProjection& pca) {
  if (rows.cols() != pca.column_means.size())
    throw Error(ErrorCode::DimensionMismatch, "PCA was fit on " +
                                                  std::to_string(pca.column_means.size()) +
                                                  " columns, got " + std::to_string(rows.cols()));
  return (rows.rowwise() - pca.column_means.transpose()) * pca.basis;
}

Eigen::MatrixXd pca_inverse_transform(const Eigen::MatrixXd& reduced, const PcaProjection& pca) {
  if (reduced.cols() != pca.basis.cols())
    throw Error(ErrorCode::DimensionMismatch, "reduced data has wrong component count");
  return (reduced * pca.basis.transpose()).rowwise() + pca.column_means.transpose();
}

EmbeddingMatrix pca_transform(const EmbeddingMatrix& e, const PcaProjection& pca) {
  return EmbeddingMatrix{e.stems, pca_transform(e.vectors, pca), EmbeddingKind::PcaReduced};
}

SubsetFit fit_subset(const Eigen::MatrixXd& rows, std::vector<std::size_t> subset) {
  std::sort(subset.begin(), subset.end());
  SubsetFit fit;
  Eigen::MatrixXd sel(static_cast<Eigen::Index>(subset.size()), rows.cols());
  for (std::size_t i = 0; i < subset.size(); ++i)
    sel.row(static_cast<Eigen::Index>(i)) = rows.row(static_cast<Eigen::Index>(subset[i]));
  fit.mean = row_mean(sel);
  const Eigen::MatrixXd centered = sel.rowwise() - fit.mean.transpose();
  fit.covariance = centered.transpose() * centered / static_cast<double>(subset.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.covariance, Eigen::EigenvaluesOnly);
  fit.determinant = is_singular(eig.eigenvalues()) ? 0.0 : eig.eigenvalues().prod();
  fit.subset = std::move(subset);
  return fit;
}

namespace {

std::vector<double> squared_mahalanobis(const Eigen::MatrixXd& rows, const Eigen::VectorXd& mean,
                                        const Eigen::MatrixXd& cov) {
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::MatrixXd centered = (rows.rowwise() - mean.transpose()).transpose();
  const Eigen::MatrixXd whitened = llt.matrixL().solve(centered);
  std::vector<double> d(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) d[static_cast<std::size_t>(i)] = whitened.col(i).squaredNorm();
  return d;
}

struct Candidate {
  SubsetFit fit;
  std::size_t trial = 0;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.fit.determinant != b.fit.determinant) return a.fit.determinant < b.fit.determinant;
  return a.trial < b.trial;
}

// Iterates C-steps from `fit` until the subset repeats, the determinant
// stops decreasing by more than `tolerance` (relative), it hits zero, or
// `steps` is exhausted.
SubsetFit concentrate(const Eigen::MatrixXd& rows, SubsetFit fit, std::size_t h, std::size_t steps,
                      double tolerance) {
  for (std::size_t s = 0; s < steps && fit.determinant > 0.0; ++s) {
    SubsetFit next = c_step(rows, fit, h);
    const bool same = next.subset == fit.subset;
    const bool stalled = fit.determinant - next.determinant <= tolerance * fit.determinant;
    if (next.determinant <= fit.determinant) fit = std::move(next);
    if (same || stalled) break;
  }
  return fit;
}

Candidate run_trial(const Eigen::MatrixXd& rows, std::size_t h, const McdOptions& opt,
                    std::size_t trial) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto p = static_cast<std::size_t>(rows.cols());
  std::mt19937_64 rng(splitmix64(opt.seed ^ splitmix64(trial)));

  // Partial Fisher-Yates: the first `taken` entries of `order` are the subset.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t taken = 0;
  const auto draw = [&] {
    std::uniform_int_distribution<std::size_t> pick(taken, n - 1);
    std::swap(order[taken], order[pick(rng)]);
    ++taken;
  };
  for (std::size_t i = 0; i <= p; ++i) draw();
  SubsetFit fit = fit_subset(rows, {order.begin(), order.begin() + static_cast<long>(taken)});
  while (fit.determinant == 0.0 && taken < h) {
    draw();
    fit = fit_subset(rows, {order.begin(), order.begin() + static_cast<long>(taken)});
  }
  if (fit.determinant > 0.0) fit = concentrate(rows, std::move(fit), h, opt.warm_steps, 0.0);
  return Candidate{std::move(fit), trial};
}

void reweight(const Eigen::MatrixXd& rows, CenterEstimate& est) {
  const auto p = static_cast<double>(rows.cols());
  std::vector<double> d = squared_mahalanobis(rows, est.mean, *est.covariance);
  std::vector<double> sorted = d;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const boost::math::chi_squared chi2(p);
  const double consistency = sorted[sorted.size() / 2] / boost::math::quantile(chi2, 0.5);
  const double cutoff = boost::math::quantile(chi2, 0.975);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (consistency > 0.0 && d[i] / consistency <= cutoff) kept.push_back(i);
  if (kept.size() <= static_cast<std::size_t>(p)) return;
  SubsetFit fit = fit_subset(rows, kept);
  est.mean = fit.mean;
  est.covariance = fit.covariance;
  est.support = fit.subset;
  est.determinant = fit.determinant;
}

}  // namespace

SubsetFit c_step(const Eigen::MatrixXd& rows, const SubsetFit& current, std::size_t h) {
  const std::vector<double> d = squared_mahalanobis(rows, current.mean, current.covariance);
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  idx.resize(h);
  return fit_subset(rows, std::move(idx));
}

std::size_t default_support_size(std::size_t n, std::size_t dim) { return (n + dim + 1) / 2; }

CenterEstimate fast_mcd(const Eigen::MatrixXd& rows, const McdOptions& opt) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto p = static_cast<std::size_t>(rows.cols());
  if (p == 0) throw Error(ErrorCode::DimensionMismatch, "MCD on zero-dimensional data");
  if (n <= p)
    throw Error(ErrorCode::InsufficientSamples,
                "MCD needs more rows (" + std::to_string(n) + ") than dimensions (" +
                    std::to_string(p) + ")");
  const std::size_t h = opt.support_size.value_or(default_support_size(n, p));
  if (h > n || 2 * h <= n || h <= p)
    throw Error(ErrorCode::InvalidArgument, "support size " + std::to_string(h) +
                                                " must lie in (n/2, n] and exceed the dimension");

  SubsetFit best;
  if (h == n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    best = fit_subset(rows, std::move(all));
  } else {
    std::vector<Candidate> candidates(opt.trials);
    if (opt.workers <= 1) {
      for (std::size_t t = 0; t < opt.trials; ++t) candidates[t] = run_trial(rows, h, opt, t);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < opt.workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t t; (t = next.fetch_add(1)) < opt.trials;) candidates[t] = run_trial(rows, h, opt, t);
        });
      for (auto& th : pool) th.join();
    }
    if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "MCD needs at least one trial");

    std::sort(candidates.begin(), candidates.end(), better);
    std::vector<Candidate> finalists;
    for (auto& c : candidates) {
      if (finalists.size() == opt.finalists) break;
      const bool seen = std::any_of(finalists.begin(), finalists.end(),
                                    [&](const Candidate& f) { return f.fit.subset == c.fit.subset; });
      if (!seen) finalists.push_back(std::move(c));
    }
    for (auto& f : finalists) {
      // Trials that stopped early with fewer than h rows are grown first.
      if (f.fit.subset.size() != h && f.fit.determinant > 0.0) f.fit = c_step(rows, f.fit, h);
      f.fit = concentrate(rows, std::move(f.fit), h, opt.max_steps, opt.tolerance);
    }
    best = std::min_element(finalists.begin(), finalists.end(), better)->fit;
  }

  CenterEstimate est;
  est.kind = CenterKind::RobustMcd;
  est.covariance_kind = CovarianceKind::Robust;
  est.support_size = h;
  est.mean = best.mean;
  est.covariance = best.covariance;
  est.support = best.subset;
  est.determinant = best.determinant;

  if (best.determinant == 0.0 || best.subset.size() != h) {
    const double trace = best.covariance.trace();
    const double load = trace > 0.0 ? 1e-8 * trace / static_cast<double>(p) : 1e-8;
    est.covariance->diagonal().array() += load;
    est.regularized = true;
  } else if (opt.reweight) {
    reweight(rows, est);
  }
  return est;
}

}  // namespace lvke
