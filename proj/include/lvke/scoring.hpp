#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lvke/local_vectors.hpp"
#include "lvke/robust_center.hpp"
#include "lvke/text_pipeline.hpp"

namespace lvke {

enum class Representation { TermTerm, Glove };
enum class Metric { Euclidean, Cosine, Mahalanobis };

struct ScoringConfig {
  Representation representation = Representation::TermTerm;
  Metric metric = Metric::Euclidean;
  CenterKind center = CenterKind::SampleMean;
  std::optional<CovarianceKind> covariance_kind;  // only with Mahalanobis
  bool use_position = true;                       // LV when true, LV_b otherwise
  std::optional<std::size_t> pca_components;      // required for robust paths
  std::size_t window = 10;
  bool reset_window_at_sentences = false;
  GloVeConfig glove;
  std::uint64_t seed = 42;
  bool mcd_reweight = false;

  // Fills the defaults implied by other fields and rejects inconsistent
  // combinations (a covariance kind without Mahalanobis, and vice versa).
  ScoringConfig normalized() const;
};

struct ScoredKeyword {
  std::string stem;
  double distance = 0.0;
  std::size_t z = 1;
  double score = 0.0;
  std::size_t first_position = 0;
};

// Precomputes what a metric needs from a center (the inverse covariance for
// Mahalanobis) so that many vectors can be measured against it.
class DistanceEvaluator {
 public:
  DistanceEvaluator(const CenterEstimate& center, Metric metric);

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& v) const;

  // Mahalanobis fell back to a pseudo-inverse (condition number > 1e12).
  bool used_pseudo_inverse() const { return pseudo_inverse_; }
  // Cosine met a zero vector or zero mean and returned 1.0.
  std::size_t degenerate_cosine() const { return degenerate_cosine_; }

 private:
  Eigen::VectorXd mean_;
  Metric metric_;
  Eigen::MatrixXd precision_;
  double mean_norm_ = 0.0;
  bool pseudo_inverse_ = false;
  mutable std::size_t degenerate_cosine_ = 0;
};

double distance(const Eigen::VectorXd& v, const CenterEstimate& center, Metric metric);

std::vector<ScoredKeyword> score_words(const CandidateVocab& vocab, const EmbeddingMatrix& vectors,
                                       const CenterEstimate& center, const ScoringConfig& cfg);
std::vector<ScoredKeyword> score_words(const CandidateVocab& vocab, const EmbeddingMatrix& vectors,
                                       const DistanceEvaluator& measure, bool use_position);

// Descending score; ties go to smaller z, then earlier first position, then
// the lexicographically smaller stem. Returns min(k, n) entries.
std::vector<ScoredKeyword> rank(std::vector<ScoredKeyword> scored, std::size_t k);

struct ExtractionDiagnostics {
  std::size_t candidates = 0;
  std::size_t pca_components = 0;  // 0 when no reduction was applied
  bool pseudo_inverse = false;
  bool covariance_regularized = false;
  std::size_t degenerate_cosine = 0;
};

struct Extraction {
  CandidateVocab vocab;
  EmbeddingMatrix vectors;  // the space distances were measured in
  CenterEstimate center;
  std::vector<ScoredKeyword> scored;  // every candidate, vocabulary order
  ExtractionDiagnostics diagnostics;
};

Extraction extract(const Document& doc, const FilterLists& lists, const ScoringConfig& cfg);

std::vector<ScoredKeyword> extract_keywords(const Document& doc, const FilterLists& lists,
                                            const ScoringConfig& cfg, std::size_t k);

// Builds the raw local vectors (t-t rows or trained GloVe) for a vocabulary.
EmbeddingMatrix local_vectors_for(const CandidateVocab& vocab, const ScoringConfig& cfg);

}  // namespace lvke
