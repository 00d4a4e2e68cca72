#include "lvke/local_vectors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <thread>

#include "lvke/error.hpp"

namespace lvke {

Eigen::MatrixXd count_cooccurrences(std::span<const std::size_t> stream, std::size_t n,
                                    std::size_t window, CooccurrenceWeighting weighting,
                                    std::span<const std::size_t> sentence_of,
                                    bool reset_at_sentences) {
  if (window == 0) throw Error(ErrorCode::InvalidArgument, "window must be at least 1");
  if (reset_at_sentences && sentence_of.size() != stream.size())
    throw Error(ErrorCode::InvalidArgument, "sentence ids must be parallel to the stream");

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const std::size_t last = std::min(stream.size() - 1, t + window);
    for (std::size_t u = t + 1; u <= last; ++u) {
      if (reset_at_sentences && sentence_of[u] != sentence_of[t]) break;
      const auto a = static_cast<Eigen::Index>(stream[t]);
      const auto b = static_cast<Eigen::Index>(stream[u]);
      if (a == b) continue;
      const double w =
          weighting == CooccurrenceWeighting::Unit ? 1.0 : 1.0 / static_cast<double>(u - t);
      counts(a, b) += w;
      counts(b, a) += w;
    }
  }
  return counts;
}

CooccurrenceMatrix build_cooccurrence_matrix(const CandidateVocab& vocab, std::size_t window,
                                             CooccurrenceWeighting weighting,
                                             bool reset_at_sentences) {
  CooccurrenceMatrix m;
  m.stems = vocab.stems;
  m.window = window;
  m.weighting = weighting;
  m.counts = count_cooccurrences(vocab.stream, vocab.size(), window, weighting,
                                 vocab.stream_sentence, reset_at_sentences);
  return m;
}

std::optional<std::size_t> EmbeddingMatrix::row_of(const std::string& stem) const {
  const auto it = std::find(stems.begin(), stems.end(), stem);
  if (it == stems.end()) return std::nullopt;
  return static_cast<std::size_t>(it - stems.begin());
}

EmbeddingMatrix rows_as_vectors(const CooccurrenceMatrix& cooc) {
  return EmbeddingMatrix{cooc.stems, cooc.counts, EmbeddingKind::TermTerm};
}

void write_embeddings(std::ostream& out, const EmbeddingMatrix& embedding) {
  char buf[64];
  for (std::size_t i = 0; i < embedding.rows(); ++i) {
    out << embedding.stems[i];
    for (std::size_t j = 0; j < embedding.dim(); ++j) {
      std::snprintf(buf, sizeof buf, " %.6f",
                    embedding.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out << buf;
    }
    out << '\n';
  }
}

void GloVeConfig::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "GloVe dimension must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "GloVe alpha must be in (0, 1]");
  if (!(x_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "GloVe x_max must be positive");
  if (window < 1) throw Error(ErrorCode::InvalidArgument, "GloVe window must be >= 1");
  if (epochs < 1) throw Error(ErrorCode::InvalidArgument, "GloVe epochs must be >= 1");
  if (!(learning_rate > 0.0))
    throw Error(ErrorCode::InvalidArgument, "GloVe learning rate must be positive");
  if (threads < 1) throw Error(ErrorCode::InvalidArgument, "GloVe threads must be >= 1");
}

double glove_weight(double x, double x_max, double alpha) {
  return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

namespace {

struct Cell {
  Eigen::Index i;
  Eigen::Index k;
  double log_x;
  double weight;
};

std::vector<Cell> nonzero_cells(const Eigen::MatrixXd& x, double x_max, double alpha) {
  std::vector<Cell> cells;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k)
      if (x(i, k) > 0.0) cells.push_back({i, k, std::log(x(i, k)), glove_weight(x(i, k), x_max, alpha)});
  return cells;
}

double residual(const GloVeModel& m, const Cell& c) {
  return m.word.row(c.i).dot(m.context.row(c.k)) + m.word_bias(c.i) + m.context_bias(c.k) - c.log_x;
}

// Parameters plus AdaGrad accumulators, stored row-major so a word's vector
// and its bias are contiguous.
struct Parameters {
  std::size_t dim;
  std::vector<double> word, context;          // n * (dim + 1), bias last
  std::vector<double> word_sq, context_sq;

  double* w(Eigen::Index i) { return word.data() + i * static_cast<Eigen::Index>(dim + 1); }
  double* c(Eigen::Index k) { return context.data() + k * static_cast<Eigen::Index>(dim + 1); }
  double* wsq(Eigen::Index i) { return word_sq.data() + i * static_cast<Eigen::Index>(dim + 1); }
  double* csq(Eigen::Index k) { return context_sq.data() + k * static_cast<Eigen::Index>(dim + 1); }
};

constexpr double kGradientClip = 100.0;

// Shared == true goes through relaxed atomic loads/stores so concurrent
// workers may lose updates but never tear a value.
template <bool Shared>
struct Access {
  static double load(double& v) {
    if constexpr (Shared) return std::atomic_ref<double>(v).load(std::memory_order_relaxed);
    else return v;
  }
  static void store(double& v, double x) {
    if constexpr (Shared) std::atomic_ref<double>(v).store(x, std::memory_order_relaxed);
    else v = x;
  }
};

template <bool Shared>
void update_cell(Parameters& p, const Cell& cell, double lr) {
  using A = Access<Shared>;
  const std::size_t d = p.dim;
  double* w = p.w(cell.i);
  double* c = p.c(cell.k);
  double* wsq = p.wsq(cell.i);
  double* csq = p.csq(cell.k);

  double pred = A::load(w[d]) + A::load(c[d]);
  for (std::size_t j = 0; j < d; ++j) pred += A::load(w[j]) * A::load(c[j]);
  const double fdiff = cell.weight * (pred - cell.log_x);

  for (std::size_t j = 0; j < d; ++j) {
    const double wj = A::load(w[j]);
    const double cj = A::load(c[j]);
    const double gw = std::clamp(fdiff * cj, -kGradientClip, kGradientClip);
    const double gc = std::clamp(fdiff * wj, -kGradientClip, kGradientClip);
    const double sw = A::load(wsq[j]);
    const double sc = A::load(csq[j]);
    A::store(w[j], wj - lr * gw / std::sqrt(sw));
    A::store(c[j], cj - lr * gc / std::sqrt(sc));
    A::store(wsq[j], sw + gw * gw);
    A::store(csq[j], sc + gc * gc);
  }
  const double gb = std::clamp(fdiff, -kGradientClip, kGradientClip);
  A::store(w[d], A::load(w[d]) - lr * gb / std::sqrt(A::load(wsq[d])));
  A::store(c[d], A::load(c[d]) - lr * gb / std::sqrt(A::load(csq[d])));
  A::store(wsq[d], A::load(wsq[d]) + gb * gb);
  A::store(csq[d], A::load(csq[d]) + gb * gb);
}

GloVeModel to_model(Parameters& p, Eigen::Index n) {
  const auto d = static_cast<Eigen::Index>(p.dim);
  GloVeModel m;
  m.word.resize(n, d);
  m.context.resize(n, d);
  m.word_bias.resize(n);
  m.context_bias.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m.word(i, j) = p.w(i)[j];
      m.context(i, j) = p.c(i)[j];
    }
    m.word_bias(i) = p.w(i)[d];
    m.context_bias(i) = p.c(i)[d];
  }
  return m;
}

}  // namespace

double glove_objective(const GloVeModel& model, const Eigen::MatrixXd& x, double x_max,
                       double alpha) {
  double j = 0.0;
  for (const auto& cell : nonzero_cells(x, x_max, alpha)) {
    const double r = residual(model, cell);
    j += cell.weight * r * r;
  }
  return j;
}

double glove_weighted_rmse(const GloVeModel& model, const Eigen::MatrixXd& x, double x_max,
                           double alpha) {
  double j = 0.0;
  double total_weight = 0.0;
  for (const auto& cell : nonzero_cells(x, x_max, alpha)) {
    const double r = residual(model, cell);
    j += cell.weight * r * r;
    total_weight += cell.weight;
  }
  return total_weight > 0.0 ? std::sqrt(j / total_weight) : 0.0;
}

GloVeTraining train_local_glove(const CooccurrenceMatrix& x, const GloVeConfig& cfg) {
  cfg.validate();
  std::vector<Cell> cells = nonzero_cells(x.counts, cfg.x_max, cfg.alpha);
  if (cells.empty())
    throw Error(ErrorCode::DegenerateCooccurrence, "co-occurrence matrix has no nonzero entries");

  const auto n = static_cast<Eigen::Index>(x.size());
  const std::size_t width = cfg.dim + 1;
  std::mt19937_64 rng(cfg.seed);
  const double bound = 0.5 / static_cast<double>(cfg.dim);
  std::uniform_real_distribution<double> init(-bound, bound);

  Parameters p;
  p.dim = cfg.dim;
  p.word.resize(static_cast<std::size_t>(n) * width);
  p.context.resize(static_cast<std::size_t>(n) * width);
  for (auto& v : p.word) v = init(rng);
  for (auto& v : p.context) v = init(rng);
  p.word_sq.assign(p.word.size(), 1.0);
  p.context_sq.assign(p.context.size(), 1.0);

  GloVeTraining result;
  result.initial_objective = glove_objective(to_model(p, n), x.counts, cfg.x_max, cfg.alpha);
  result.objective_per_epoch.reserve(cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(cells.begin(), cells.end(), rng);
    if (cfg.threads == 1) {
      for (const auto& cell : cells) update_cell<false>(p, cell, cfg.learning_rate);
    } else {
      std::vector<std::thread> workers;
      const std::size_t chunk = (cells.size() + cfg.threads - 1) / cfg.threads;
      for (std::size_t t = 0; t < cfg.threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(cells.size(), begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
          for (std::size_t c = begin; c < end; ++c) update_cell<true>(p, cells[c], cfg.learning_rate);
        });
      }
      for (auto& w : workers) w.join();
    }
    result.objective_per_epoch.push_back(
        glove_objective(to_model(p, n), x.counts, cfg.x_max, cfg.alpha));
  }

  result.model = to_model(p, n);
  result.embedding.stems = x.stems;
  result.embedding.kind = EmbeddingKind::Glove;
  switch (cfg.output) {
    case GloVeOutput::Sum: result.embedding.vectors = result.model.word + result.model.context; break;
    case GloVeOutput::Word: result.embedding.vectors = result.model.word; break;
    case GloVeOutput::Context: result.embedding.vectors = result.model.context; break;
  }
  return result;
}

}  // namespace lvke
