#include "lvke/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "lvke/error.hpp"
#include "lvke/local_vectors.hpp"

namespace lvke {

std::size_t GraphOfWords::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency) twice += nbrs.size();
  return twice / 2;
}

double GraphOfWords::strength(std::size_t v) const {
  double s = 0.0;
  for (const auto& [u, w] : adjacency[v]) s += w;
  return s;
}

GraphOfWords graph_from_weights(const Eigen::MatrixXd& weights, std::vector<std::string> names) {
  const auto n = static_cast<std::size_t>(weights.rows());
  if (weights.cols() != weights.rows())
    throw Error(ErrorCode::DimensionMismatch, "weight matrix must be square");
  GraphOfWords g;
  if (names.empty())
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  if (names.size() != n) throw Error(ErrorCode::DimensionMismatch, "one name per node required");
  g.nodes = std::move(names);
  g.adjacency.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (i != j && w > 0.0) g.adjacency[i].emplace_back(j, w);
    }
  return g;
}

GraphOfWords build_graph(const CandidateVocab& vocab, std::size_t window) {
  const auto cooc = build_cooccurrence_matrix(vocab, window, CooccurrenceWeighting::Unit);
  GraphOfWords g = graph_from_weights(cooc.counts, vocab.stems);
  g.window = window;
  return g;
}

std::vector<double> pagerank(const GraphOfWords& g, const PageRankOptions& opt) {
  const std::size_t n = g.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "PageRank on an empty graph");

  std::vector<double> teleport(n, 1.0 / static_cast<double>(n));
  if (opt.bias) {
    if (opt.bias->size() != n) throw Error(ErrorCode::DimensionMismatch, "bias needs one weight per node");
    const double total = std::accumulate(opt.bias->begin(), opt.bias->end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "bias weights sum to zero");
    for (std::size_t i = 0; i < n; ++i) teleport[i] = (*opt.bias)[i] / total;
  }

  std::vector<double> strength(n);
  for (std::size_t v = 0; v < n; ++v) strength[v] = g.strength(v);

  std::vector<double> rank = teleport;
  std::vector<double> next(n);
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    double dangling = 0.0;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      if (strength[u] == 0.0) {
        dangling += rank[u];
        continue;
      }
      for (const auto& [x, w] : g.adjacency[u]) next[x] += rank[u] * w / strength[u];
    }
    double change = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      next[x] = (1.0 - opt.damping) * teleport[x] + opt.damping * (next[x] + dangling * teleport[x]);
      change += std::abs(next[x] - rank[x]);
    }
    rank.swap(next);
    if (change < opt.tolerance) break;
  }
  const double total = std::accumulate(rank.begin(), rank.end(), 0.0);
  for (auto& r : rank) r /= total;
  return rank;
}

std::vector<double> raw_position_bias(const CandidateVocab& vocab) {
  std::vector<double> bias(vocab.size(), 0.0);
  for (std::size_t t = 0; t < vocab.stream.size(); ++t)
    bias[vocab.stream[t]] += 1.0 / static_cast<double>(t + 1);
  return bias;
}

std::vector<double> position_bias(const CandidateVocab& vocab) {
  std::vector<double> bias = raw_position_bias(vocab);
  const double total = std::accumulate(bias.begin(), bias.end(), 0.0);
  if (total > 0.0)
    for (auto& b : bias) b /= total;
  return bias;
}

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<double> betweenness(const GraphOfWords& g) {
  const std::size_t n = g.size();
  std::vector<double> centrality(n, 0.0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> dist(n), sigma(n), delta(n);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> settled;
  using Entry = std::pair<double, std::size_t>;

  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    settled.clear();
    std::vector<bool> done(n, false);

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[s] = 0.0;
    sigma[s] = 1.0;
    queue.emplace(0.0, s);
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (done[v] || d > dist[v]) continue;
      done[v] = true;
      settled.push_back(v);
      for (const auto& [u, w] : g.adjacency[v]) {
        if (done[u]) continue;
        const double alt = dist[v] + 1.0 / w;
        if (dist[u] == kInf || (alt < dist[u] && !nearly_equal(alt, dist[u]))) {
          dist[u] = alt;
          sigma[u] = sigma[v];
          preds[u].assign(1, v);
          queue.emplace(alt, u);
        } else if (nearly_equal(alt, dist[u])) {
          sigma[u] += sigma[v];
          preds[u].push_back(v);
        }
      }
    }
    for (auto it = settled.rbegin(); it != settled.rend(); ++it) {
      const std::size_t w = *it;
      for (const std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) centrality[w] += delta[w];
    }
  }

  // Every unordered pair was counted from both endpoints.
  const double pairs = n > 2 ? static_cast<double>((n - 1) * (n - 2)) / 2.0 : 0.0;
  for (auto& c : centrality) c = pairs > 0.0 ? c / 2.0 / pairs : 0.0;
  return centrality;
}

std::vector<double> core_numbers(const GraphOfWords& g, bool weighted) {
  const std::size_t n = g.size();
  std::vector<double> load(n);
  for (std::size_t v = 0; v < n; ++v)
    load[v] = weighted ? g.strength(v) : static_cast<double>(g.adjacency[v].size());

  std::set<std::pair<double, std::size_t>> remaining;
  for (std::size_t v = 0; v < n; ++v) remaining.emplace(load[v], v);
  std::vector<bool> removed(n, false);
  std::vector<double> core(n, 0.0);
  double level = 0.0;
  while (!remaining.empty()) {
    const auto [value, v] = *remaining.begin();
    remaining.erase(remaining.begin());
    removed[v] = true;
    level = std::max(level, value);
    core[v] = level;
    for (const auto& [u, w] : g.adjacency[v]) {
      if (removed[u]) continue;
      remaining.erase({load[u], u});
      load[u] -= weighted ? w : 1.0;
      remaining.emplace(load[u], u);
    }
  }
  return core;
}

std::vector<std::size_t> k_core(const GraphOfWords& g, bool weighted) {
  std::vector<std::size_t> members;
  if (g.size() == 0) return members;
  const auto core = core_numbers(g, weighted);
  const double top = *std::max_element(core.begin(), core.end());
  for (std::size_t v = 0; v < core.size(); ++v)
    if (core[v] == top) members.push_back(v);
  return members;
}

std::size_t DfTable::frequency(const std::string& stem) const {
  const auto it = df.find(stem);
  return it == df.end() ? 0 : it->second;
}

void DfTable::add_document(const CandidateVocab& vocab) {
  for (const auto& s : vocab.stems) ++df[s];
  ++total_documents;
}

void DfTable::merge(const DfTable& other) {
  for (const auto& [s, c] : other.df) df[s] += c;
  total_documents += other.total_documents;
}

void DfTable::save(std::ostream& out) const {
  std::vector<std::pair<std::string, std::size_t>> rows(df.begin(), df.end());
  std::sort(rows.begin(), rows.end());
  out << "#docs=" << total_documents << '\n';
  for (const auto& [s, c] : rows) out << s << '\t' << c << '\n';
}

void DfTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write df table " + path.string());
  save(out);
}

DfTable DfTable::load(std::istream& in) {
  DfTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#docs=", 0) != 0)
    throw Error(ErrorCode::Io, "df table must start with '#docs=<N>'");
  try {
    table.total_documents = std::stoul(line.substr(6));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "bad document count in df header: " + line);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::Io, "df table line " + std::to_string(line_no) + " lacks a tab");
    std::size_t count = 0;
    try {
      count = std::stoul(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Io, "df table line " + std::to_string(line_no) + " has a bad count");
    }
    if (count == 0 || count > table.total_documents)
      throw Error(ErrorCode::Io, "df table line " + std::to_string(line_no) + " is out of range");
    table.df[line.substr(0, tab)] = count;
  }
  return table;
}

DfTable DfTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read df table " + path.string());
  DfTable t = load(in);
  t.collection_id = path.stem().string();
  return t;
}

namespace {

ScoredKeyword keyword(const CandidateVocab& vocab, std::size_t i, double score) {
  ScoredKeyword kw;
  kw.stem = vocab.stems[i];
  kw.z = vocab.first_sentence[i];
  kw.first_position = vocab.first_position[i];
  kw.score = score;
  return kw;
}

std::vector<ScoredKeyword> rank_scores(const CandidateVocab& vocab, const std::vector<double>& scores,
                                       std::size_t k) {
  std::vector<ScoredKeyword> out;
  out.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) out.push_back(keyword(vocab, i, scores[i]));
  return rank(std::move(out), k);
}

}  // namespace

std::vector<ScoredKeyword> tfidf_rank(const CandidateVocab& vocab, const DfTable& df, std::size_t k) {
  if (df.total_documents < 1) throw Error(ErrorCode::InvalidArgument, "df table is empty");
  const auto n = static_cast<double>(df.total_documents);
  std::vector<double> scores(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto d = static_cast<double>(df.frequency(vocab.stems[i]));
    scores[i] = static_cast<double>(vocab.term_frequency[i]) * std::log(n / (1.0 + d));
  }
  return rank_scores(vocab, scores, k);
}

std::vector<ScoredKeyword> fnw_rank(const CandidateVocab& vocab, std::size_t k) {
  std::vector<double> scores(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) scores[i] = 0.0 - static_cast<double>(vocab.first_position[i]);
  return rank_scores(vocab, scores, k);
}

std::vector<ScoredKeyword> run_baseline(BaselineMethod method, const Document& doc,
                                        const FilterLists& lists, std::size_t k,
                                        const BaselineOptions& options) {
  if (method == BaselineMethod::LvBaseline) {
    ScoringConfig cfg = options.lv;
    cfg.use_position = false;
    return extract_keywords(doc, lists, cfg, k);
  }
  const bool pos_filtered = method == BaselineMethod::SingleRank ||
                            method == BaselineMethod::PositionRank ||
                            method == BaselineMethod::Betweenness;
  const CandidateVocab vocab =
      build_candidate_index(doc, lists, pos_filtered ? options.pos : nullptr);

  switch (method) {
    case BaselineMethod::TfIdf:
      if (options.df == nullptr) throw Error(ErrorCode::InvalidArgument, "Tf-Idf needs a df table");
      return tfidf_rank(vocab, *options.df, k);
    case BaselineMethod::Fnw:
      return fnw_rank(vocab, k);
    case BaselineMethod::PageRank:
    case BaselineMethod::SingleRank:
      return rank_scores(vocab, pagerank(build_graph(vocab, options.window)), k);
    case BaselineMethod::PositionRank: {
      PageRankOptions opt;
      opt.bias = position_bias(vocab);
      return rank_scores(vocab, pagerank(build_graph(vocab, options.window), opt), k);
    }
    case BaselineMethod::Betweenness:
      return rank_scores(vocab, betweenness(build_graph(vocab, options.window)), k);
    case BaselineMethod::KCore:
      return rank_scores(vocab, core_numbers(build_graph(vocab, options.window), options.weighted_core), k);
    case BaselineMethod::LvBaseline:
      break;
  }
  return {};
}

}  // namespace lvke
