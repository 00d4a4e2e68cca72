#include "lvke/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "lvke/error.hpp"

namespace lvke {

namespace {
constexpr std::size_t kDefaultPcaComponents = 10;
constexpr double kMaxConditionNumber = 1e12;
}  // namespace

ScoringConfig ScoringConfig::normalized() const {
  ScoringConfig cfg = *this;
  if (cfg.metric == Metric::Mahalanobis && !cfg.covariance_kind) {
    cfg.covariance_kind =
        cfg.center == CenterKind::RobustMcd ? CovarianceKind::Robust : CovarianceKind::Sample;
  }
  if (cfg.metric != Metric::Mahalanobis && cfg.covariance_kind)
    throw Error(ErrorCode::InvalidArgument, "a covariance kind only applies to the Mahalanobis metric");
  const bool robust = cfg.center == CenterKind::RobustMcd ||
                      cfg.covariance_kind == CovarianceKind::Robust;
  if (robust && !cfg.pca_components) cfg.pca_components = kDefaultPcaComponents;
  if (cfg.pca_components && *cfg.pca_components == 0)
    throw Error(ErrorCode::InvalidComponentCount, "PCA component count must be positive");
  if (cfg.window == 0) throw Error(ErrorCode::InvalidArgument, "window must be at least 1");
  cfg.glove.window = cfg.window;
  cfg.glove.seed = cfg.seed;
  return cfg;
}

DistanceEvaluator::DistanceEvaluator(const CenterEstimate& center, Metric metric)
    : mean_(center.mean), metric_(metric) {
  switch (metric) {
    case Metric::Euclidean:
      break;
    case Metric::Cosine:
      mean_norm_ = mean_.norm();
      break;
    case Metric::Mahalanobis: {
      if (!center.covariance)
        throw Error(ErrorCode::InvalidArgument, "Mahalanobis distance needs a covariance");
      const Eigen::MatrixXd& cov = *center.covariance;
      if (cov.rows() != mean_.size() || cov.cols() != mean_.size())
        throw Error(ErrorCode::DimensionMismatch, "covariance does not match the center");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
      const Eigen::VectorXd& lambda = eig.eigenvalues();
      const double top = lambda.maxCoeff();
      const double bottom = lambda.minCoeff();
      Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
      pseudo_inverse_ = !(top > 0.0) || !(bottom > 0.0) || top / bottom > kMaxConditionNumber;
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (!pseudo_inverse_ || lambda(i) > top / kMaxConditionNumber) inv(i) = 1.0 / lambda(i);
      }
      precision_ = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
      break;
    }
  }
}

double DistanceEvaluator::operator()(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != mean_.size())
    throw Error(ErrorCode::DimensionMismatch, "vector has " + std::to_string(v.size()) +
                                                  " dimensions, center has " +
                                                  std::to_string(mean_.size()));
  switch (metric_) {
    case Metric::Euclidean:
      return (v - mean_).norm();
    case Metric::Cosine: {
      const double vn = v.norm();
      if (vn == 0.0 || mean_norm_ == 0.0) {
        ++degenerate_cosine_;
        return 1.0;
      }
      return std::max(0.0, 1.0 - v.dot(mean_) / (vn * mean_norm_));
    }
    case Metric::Mahalanobis: {
      const Eigen::VectorXd diff = v - mean_;
      return std::sqrt(std::max(0.0, diff.dot(precision_ * diff)));
    }
  }
  return 0.0;
}

double distance(const Eigen::VectorXd& v, const CenterEstimate& center, Metric metric) {
  return DistanceEvaluator(center, metric)(v);
}

std::vector<ScoredKeyword> score_words(const CandidateVocab& vocab, const EmbeddingMatrix& vectors,
                                       const CenterEstimate& center, const ScoringConfig& cfg) {
  return score_words(vocab, vectors, DistanceEvaluator(center, cfg.metric), cfg.use_position);
}

std::vector<ScoredKeyword> score_words(const CandidateVocab& vocab, const EmbeddingMatrix& vectors,
                                       const DistanceEvaluator& measure, bool use_position) {
  std::vector<ScoredKeyword> out;
  out.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto row = vectors.stems.size() > i && vectors.stems[i] == vocab.stems[i]
                         ? std::optional<std::size_t>(i)
                         : vectors.row_of(vocab.stems[i]);
    if (!row) throw Error(ErrorCode::InvalidArgument, "no vector for stem '" + vocab.stems[i] + "'");
    ScoredKeyword kw;
    kw.stem = vocab.stems[i];
    kw.z = vocab.first_sentence[i];
    kw.first_position = vocab.first_position[i];
    kw.distance = measure(vectors.vectors.row(static_cast<Eigen::Index>(*row)).transpose());
    kw.score = use_position ? kw.distance / static_cast<double>(kw.z) : kw.distance;
    out.push_back(std::move(kw));
  }
  return out;
}

std::vector<ScoredKeyword> rank(std::vector<ScoredKeyword> scored, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  const auto order = [](const ScoredKeyword& a, const ScoredKeyword& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.z != b.z) return a.z < b.z;
    if (a.first_position != b.first_position) return a.first_position < b.first_position;
    return a.stem < b.stem;
  };
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(keep), scored.end(), order);
  scored.resize(keep);
  return scored;
}

EmbeddingMatrix local_vectors_for(const CandidateVocab& vocab, const ScoringConfig& cfg) {
  if (cfg.representation == Representation::TermTerm) {
    return rows_as_vectors(build_cooccurrence_matrix(vocab, cfg.window, CooccurrenceWeighting::Unit,
                                                     cfg.reset_window_at_sentences));
  }
  const auto x = build_cooccurrence_matrix(vocab, cfg.glove.window,
                                           CooccurrenceWeighting::InverseOffset,
                                           cfg.reset_window_at_sentences);
  return train_local_glove(x, cfg.glove).embedding;
}

Extraction extract(const Document& doc, const FilterLists& lists, const ScoringConfig& config) {
  const ScoringConfig cfg = config.normalized();
  Extraction ex;
  ex.vocab = build_candidate_index(doc, lists);
  ex.diagnostics.candidates = ex.vocab.size();
  ex.vectors = local_vectors_for(ex.vocab, cfg);

  if (cfg.pca_components) {
    const std::size_t n = ex.vectors.rows();
    const std::size_t limit = std::min({*cfg.pca_components, ex.vectors.dim(), n > 1 ? n - 1 : n});
    if (limit == 0)
      throw Error(ErrorCode::InsufficientSamples, "too few candidates for dimensionality reduction");
    ex.vectors = pca_transform(ex.vectors, pca_fit(ex.vectors.vectors, limit));
    ex.diagnostics.pca_components = limit;
  }

  const Eigen::MatrixXd& data = ex.vectors.vectors;
  const bool need_mcd = cfg.center == CenterKind::RobustMcd ||
                        cfg.covariance_kind == CovarianceKind::Robust;
  std::optional<CenterEstimate> robust;
  if (need_mcd) {
    McdOptions opt;
    opt.seed = cfg.seed;
    opt.reweight = cfg.mcd_reweight;
    robust = fast_mcd(data, opt);
    ex.diagnostics.covariance_regularized = robust->regularized;
  }

  ex.center = cfg.center == CenterKind::RobustMcd ? *robust : sample_mean(data);
  if (cfg.metric == Metric::Mahalanobis) {
    switch (*cfg.covariance_kind) {
      case CovarianceKind::Robust:
        ex.center.covariance = robust->covariance;
        break;
      case CovarianceKind::Sample:
      case CovarianceKind::MaxLikelihood:
        ex.center.covariance = covariance(data, *cfg.covariance_kind);
        break;
    }
    ex.center.covariance_kind = cfg.covariance_kind;
  } else if (cfg.center == CenterKind::SampleMean) {
    ex.center.covariance.reset();
    ex.center.covariance_kind.reset();
  }

  const DistanceEvaluator measure(ex.center, cfg.metric);
  ex.scored = score_words(ex.vocab, ex.vectors, measure, cfg.use_position);
  ex.diagnostics.pseudo_inverse = measure.used_pseudo_inverse();
  ex.diagnostics.degenerate_cosine = measure.degenerate_cosine();
  return ex;
}

std::vector<ScoredKeyword> extract_keywords(const Document& doc, const FilterLists& lists,
                                            const ScoringConfig& cfg, std::size_t k) {
  return rank(extract(doc, lists, cfg).scored, k);
}

}  // namespace lvke
