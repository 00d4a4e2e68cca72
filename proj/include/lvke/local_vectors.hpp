#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "lvke/text_pipeline.hpp"

namespace lvke {

enum class CooccurrenceWeighting { Unit, InverseOffset };

struct CooccurrenceMatrix {
  std::vector<std::string> stems;  // row/column labels
  Eigen::MatrixXd counts;          // symmetric, zero diagonal
  std::size_t window = 10;
  CooccurrenceWeighting weighting = CooccurrenceWeighting::Unit;

  std::size_t size() const { return static_cast<std::size_t>(counts.rows()); }
};

// Slides a window of `window` following positions over the stream and adds
// 1 (Unit) or 1/offset (InverseOffset) to both (a,b) and (b,a) for every
// pair of distinct stems. With reset_at_sentences the window never crosses a
// sentence boundary.
CooccurrenceMatrix build_cooccurrence_matrix(const CandidateVocab& vocab, std::size_t window,
                                             CooccurrenceWeighting weighting,
                                             bool reset_at_sentences = false);

// Same counting over a bare stream of ids in [0, n). `sentence_of` may be
// empty; otherwise it is parallel to `stream` and only consulted when
// reset_at_sentences is set.
Eigen::MatrixXd count_cooccurrences(std::span<const std::size_t> stream, std::size_t n,
                                    std::size_t window, CooccurrenceWeighting weighting,
                                    std::span<const std::size_t> sentence_of = {},
                                    bool reset_at_sentences = false);

enum class EmbeddingKind { Glove, TermTerm, PcaReduced };

struct EmbeddingMatrix {
  std::vector<std::string> stems;
  Eigen::MatrixXd vectors;  // one row per stem
  EmbeddingKind kind = EmbeddingKind::TermTerm;

  std::size_t rows() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  std::optional<std::size_t> row_of(const std::string& stem) const;
};

EmbeddingMatrix rows_as_vectors(const CooccurrenceMatrix& cooc);

// `stem v1 v2 ... vdim`, six decimals, one line per row.
void write_embeddings(std::ostream& out, const EmbeddingMatrix& embedding);

enum class GloVeOutput { Sum, Word, Context };

struct GloVeConfig {
  std::size_t dim = 50;
  double x_max = 100.0;
  double alpha = 0.75;
  std::size_t window = 10;
  std::size_t epochs = 100;
  double learning_rate = 0.05;
  std::uint64_t seed = 42;
  GloVeOutput output = GloVeOutput::Sum;
  // Values above 1 switch to lock-free parallel updates, which are not
  // reproducible run to run.
  std::size_t threads = 1;

  void validate() const;
};

struct GloVeModel {
  Eigen::MatrixXd word;      // w_i
  Eigen::MatrixXd context;   // w~_k
  Eigen::VectorXd word_bias;
  Eigen::VectorXd context_bias;
};

struct GloVeTraining {
  EmbeddingMatrix embedding;
  GloVeModel model;
  double initial_objective = 0.0;
  std::vector<double> objective_per_epoch;
};

double glove_weight(double x, double x_max, double alpha);

// J = sum over nonzero cells of f(X_ik) (w_i . w~_k + b_i + b~_k - log X_ik)^2.
double glove_objective(const GloVeModel& model, const Eigen::MatrixXd& x, double x_max,
                       double alpha);

// sqrt(J / sum of f(X_ik)) over nonzero cells.
double glove_weighted_rmse(const GloVeModel& model, const Eigen::MatrixXd& x, double x_max,
                           double alpha);

// AdaGrad over the nonzero cells of `x`, visited in a freshly shuffled order
// every epoch.
GloVeTraining train_local_glove(const CooccurrenceMatrix& x, const GloVeConfig& cfg);

}  // namespace lvke
