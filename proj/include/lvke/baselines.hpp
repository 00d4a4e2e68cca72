#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lvke/scoring.hpp"
#include "lvke/text_pipeline.hpp"

namespace lvke {

// Undirected weighted graph; node i is vocabulary stem i.
struct GraphOfWords {
  std::vector<std::string> nodes;
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
  std::size_t window = 10;

  std::size_t size() const { return nodes.size(); }
  std::size_t edge_count() const;
  double strength(std::size_t v) const;
};

GraphOfWords build_graph(const CandidateVocab& vocab, std::size_t window);

// Nonzero off-diagonal entries of a symmetric weight matrix become edges.
GraphOfWords graph_from_weights(const Eigen::MatrixXd& weights, std::vector<std::string> names = {});

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-6;
  std::size_t max_iterations = 100;
  std::optional<std::vector<double>> bias;  // teleport weights, normalized internally
};

// Weighted PageRank. A walker follows an edge with probability proportional
// to its weight; dangling nodes teleport with the full mass.
std::vector<double> pagerank(const GraphOfWords& g, const PageRankOptions& options = {});

// Sum over occurrences of 1 / (1-based position in the filtered stream),
// before and after normalization.
std::vector<double> raw_position_bias(const CandidateVocab& vocab);
std::vector<double> position_bias(const CandidateVocab& vocab);

// Brandes betweenness with edge length 1 / weight, normalized by
// (N - 1)(N - 2) / 2.
std::vector<double> betweenness(const GraphOfWords& g);

// Core number per vertex. Weighted mode uses vertex strength and peels the
// vertex of minimum remaining strength at every step.
std::vector<double> core_numbers(const GraphOfWords& g, bool weighted);

// Vertices of maximum core number (sorted). Empty graph -> empty.
std::vector<std::size_t> k_core(const GraphOfWords& g, bool weighted);

struct DfTable {
  std::unordered_map<std::string, std::size_t> df;
  std::size_t total_documents = 0;
  std::string collection_id;

  std::size_t frequency(const std::string& stem) const;
  void add_document(const CandidateVocab& vocab);
  void merge(const DfTable& other);

  // `#docs=<N>` header, then `stem<TAB>df` rows sorted by stem.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static DfTable load(std::istream& in);
  static DfTable load(const std::filesystem::path& path);
};

// score = tf * ln(N / (1 + df)).
std::vector<ScoredKeyword> tfidf_rank(const CandidateVocab& vocab, const DfTable& df, std::size_t k);

// Earliest first occurrence first; the score is -position.
std::vector<ScoredKeyword> fnw_rank(const CandidateVocab& vocab, std::size_t k);

enum class BaselineMethod { TfIdf, Fnw, PageRank, SingleRank, PositionRank, Betweenness, KCore, LvBaseline };

struct BaselineOptions {
  std::size_t window = 10;
  const DfTable* df = nullptr;            // required by TfIdf
  const PosAnnotation* pos = nullptr;     // noun/adjective filter for SR, PosR, BT
  bool weighted_core = true;
  ScoringConfig lv;                       // used by LvBaseline (use_position forced off)
};

std::vector<ScoredKeyword> run_baseline(BaselineMethod method, const Document& doc,
                                        const FilterLists& lists, std::size_t k,
                                        const BaselineOptions& options = {});

}  // namespace lvke
