#include <doctest.h>

#include <random>
#include <sstream>

#include "lvke/error.hpp"
#include "lvke/local_vectors.hpp"
#include "oracles.hpp"

using namespace lvke;

namespace {

CandidateVocab vocab_from(const std::vector<std::string>& words) {
  CandidateVocab v;
  for (const auto& w : words) {
    auto [it, fresh] = v.index.emplace(w, v.stems.size());
    if (fresh) {
      v.stems.push_back(w);
      v.first_sentence.push_back(1);
      v.first_position.push_back(v.stream.size());
      v.term_frequency.push_back(0);
    }
    ++v.term_frequency[it->second];
    v.stream.push_back(it->second);
    v.stream_sentence.push_back(1);
  }
  v.sentence_count = 1;
  return v;
}

}  // namespace

TEST_CASE("one window covering every pair") {
  const auto c = build_cooccurrence_matrix(vocab_from({"a", "b", "c"}), 10, CooccurrenceWeighting::Unit);
  CHECK(c.counts(0, 1) == 1.0);
  CHECK(c.counts(0, 2) == 1.0);
  CHECK(c.counts(1, 2) == 1.0);
  CHECK(c.counts(2, 1) == 1.0);
}

TEST_CASE("repeated stems never pair with themselves") {
  const auto c = build_cooccurrence_matrix(vocab_from({"a", "b", "a"}), 10, CooccurrenceWeighting::Unit);
  CHECK(c.counts(0, 1) == 2.0);
  CHECK(c.counts(0, 0) == 0.0);
}

TEST_CASE("inverse offset weighting") {
  const auto x = build_cooccurrence_matrix(vocab_from({"a", "b", "c"}), 10,
                                           CooccurrenceWeighting::InverseOffset);
  CHECK(x.counts(0, 1) == doctest::Approx(1.0));
  CHECK(x.counts(0, 2) == doctest::Approx(0.5));
}

TEST_CASE("window limits the reach") {
  const auto c = build_cooccurrence_matrix(vocab_from({"a", "b", "c", "d"}), 2, CooccurrenceWeighting::Unit);
  CHECK(c.counts(0, 2) == 1.0);
  CHECK(c.counts(0, 3) == 0.0);
  CHECK_THROWS_AS(build_cooccurrence_matrix(vocab_from({"a", "b"}), 0, CooccurrenceWeighting::Unit), Error);
}

TEST_CASE("sentence reset keeps pairs inside one sentence") {
  auto v = vocab_from({"a", "b", "c", "d"});
  v.stream_sentence = {1, 1, 2, 2};
  v.sentence_count = 2;
  const auto joined = build_cooccurrence_matrix(v, 10, CooccurrenceWeighting::Unit, false);
  const auto reset = build_cooccurrence_matrix(v, 10, CooccurrenceWeighting::Unit, true);
  CHECK(joined.counts(1, 2) == 1.0);
  CHECK(reset.counts(1, 2) == 0.0);
  CHECK(reset.counts(0, 1) == 1.0);
  CHECK(reset.counts(2, 3) == 1.0);
}

TEST_CASE("counts match the double loop on random streams") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8, len = rng() % 60, window = 1 + rng() % 12;
    std::vector<std::size_t> stream(len);
    for (auto& s : stream) s = rng() % n;
    for (const bool inverse : {false, true}) {
      const auto got = count_cooccurrences(stream, n, window,
                                           inverse ? CooccurrenceWeighting::InverseOffset
                                                   : CooccurrenceWeighting::Unit);
      const auto want = oracle::pair_counts(stream, n, window, inverse);
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(got.isApprox(got.transpose()));
      CHECK(got.diagonal().isZero());
    }
  }
}

TEST_CASE("term-term rows are copies of the matrix rows") {
  const auto c = build_cooccurrence_matrix(vocab_from({"a", "b", "c"}), 10, CooccurrenceWeighting::Unit);
  const auto e = rows_as_vectors(c);
  CHECK(e.kind == EmbeddingKind::TermTerm);
  CHECK(e.vectors.row(0).transpose() == Eigen::Vector3d(0, 1, 1));
  CHECK(e.vectors(0, 1) == e.vectors(1, 0));
  CHECK(e.row_of("c") == std::optional<std::size_t>(2));
  CHECK_FALSE(e.row_of("z").has_value());

  const auto lone = rows_as_vectors(build_cooccurrence_matrix(vocab_from({"a"}), 10, CooccurrenceWeighting::Unit));
  CHECK(lone.vectors.isZero());
}

TEST_CASE("embedding text format") {
  const auto e = rows_as_vectors(build_cooccurrence_matrix(vocab_from({"a", "b"}), 10, CooccurrenceWeighting::Unit));
  std::ostringstream out;
  write_embeddings(out, e);
  CHECK(out.str() == "a 0.000000 1.000000\nb 1.000000 0.000000\n");
}

TEST_CASE("GloVe defaults") {
  const GloVeConfig cfg;
  CHECK(cfg.dim == 50);
  CHECK(cfg.x_max == 100.0);
  CHECK(cfg.alpha == 0.75);
  CHECK(cfg.window == 10);
  CHECK(glove_weight(100.0, 100.0, 0.75) == 1.0);
  CHECK(glove_weight(250.0, 100.0, 0.75) == 1.0);
  CHECK(glove_weight(1.0, 100.0, 0.75) == doctest::Approx(std::pow(0.01, 0.75)));
}

TEST_CASE("GloVe fits a single pair") {
  std::vector<std::string> words;
  for (int i = 0; i < 50; ++i) {
    words.push_back("a");
    words.push_back("b");
  }
  const auto x = build_cooccurrence_matrix(vocab_from(words), 10, CooccurrenceWeighting::InverseOffset);
  GloVeConfig cfg;
  cfg.dim = 2;
  // log X_ab is about 5; the default 100 epochs of AdaGrad only cover ~4 of it.
  cfg.epochs = 1000;
  const auto t = train_local_glove(x, cfg);
  const auto& m = t.model;
  const double fit = m.word.row(0).dot(m.context.row(1)) + m.word_bias(0) + m.context_bias(1);
  CHECK(std::abs(fit - std::log(x.counts(0, 1))) < 0.1);
  CHECK(t.objective_per_epoch.back() < t.initial_objective);
  CHECK(t.embedding.kind == EmbeddingKind::Glove);
  CHECK(t.embedding.dim() == 2);
}

TEST_CASE("GloVe training is reproducible and outputs are selectable") {
  const auto x = build_cooccurrence_matrix(
      vocab_from({"cloud", "server", "data", "cloud", "storage", "data", "server", "migration"}), 10,
      CooccurrenceWeighting::InverseOffset);
  GloVeConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 20;
  const auto a = train_local_glove(x, cfg);
  const auto b = train_local_glove(x, cfg);
  CHECK(a.embedding.vectors == b.embedding.vectors);
  CHECK(a.embedding.vectors.isApprox(a.model.word + a.model.context));
  cfg.output = GloVeOutput::Word;
  CHECK(train_local_glove(x, cfg).embedding.vectors == a.model.word);
  cfg.seed = 43;
  cfg.output = GloVeOutput::Sum;
  CHECK(train_local_glove(x, cfg).embedding.vectors != a.embedding.vectors);
}

TEST_CASE("GloVe rejects an all-zero matrix and bad settings") {
  const auto x = build_cooccurrence_matrix(vocab_from({"a"}), 10, CooccurrenceWeighting::InverseOffset);
  try {
    train_local_glove(x, GloVeConfig{});
    FAIL("expected DegenerateCooccurrence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateCooccurrence);
  }
  GloVeConfig bad;
  bad.dim = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("objective and weighted RMSE agree") {
  const auto x = build_cooccurrence_matrix(vocab_from({"a", "b", "c", "a", "c"}), 10,
                                           CooccurrenceWeighting::InverseOffset);
  GloVeModel m;
  m.word = Eigen::MatrixXd::Constant(3, 2, 0.1);
  m.context = Eigen::MatrixXd::Constant(3, 2, -0.2);
  m.word_bias = Eigen::VectorXd::Zero(3);
  m.context_bias = Eigen::VectorXd::Constant(3, 0.3);
  double j = 0.0, f = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const double v = x.counts(i, k);
      if (v <= 0.0) continue;
      const double wf = glove_weight(v, 100.0, 0.75);
      const double diff = m.word.row(i).dot(m.context.row(k)) + m.context_bias(k) - std::log(v);
      j += wf * diff * diff;
      f += wf;
    }
  CHECK(glove_objective(m, x.counts, 100.0, 0.75) == doctest::Approx(j));
  CHECK(glove_weighted_rmse(m, x.counts, 100.0, 0.75) == doctest::Approx(std::sqrt(j / f)));
}
