#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "lvke/baselines.hpp"
#include "lvke/datasets_io.hpp"
#include "lvke/error.hpp"
#include "lvke/evaluation.hpp"
#include "lvke/robust_center.hpp"
#include "lvke/scoring.hpp"
#include "lvke/text_pipeline.hpp"

namespace lvke::cli {
namespace {

enum class Method { Lv, Lvb, TfIdf, Fnw, Pr, Sr, PosR, Bt, KCore };
enum class Format { Text, Csv, Jsonl };

const std::map<std::string, Method> kMethods{
    {"lv", Method::Lv},   {"lvb", Method::Lvb}, {"tfidf", Method::TfIdf},
    {"fnw", Method::Fnw}, {"pr", Method::Pr},   {"sr", Method::Sr},
    {"posr", Method::PosR}, {"bt", Method::Bt}, {"kcore", Method::KCore}};

std::string label(Method m) {
  switch (m) {
    case Method::Lv: return "LV";
    case Method::Lvb: return "LV_b";
    case Method::TfIdf: return "Tf-Idf";
    case Method::Fnw: return "FNW";
    case Method::Pr: return "PR";
    case Method::Sr: return "SR";
    case Method::PosR: return "PosR";
    case Method::Bt: return "BT";
    case Method::KCore: return "kCore";
  }
  return "?";
}

struct MethodFlags {
  std::string method = "lv";
  std::string representation = "tt";
  std::string metric = "euclidean";
  std::string center = "sample";
  std::string covariance;
  std::size_t pca_dims = 0;
  std::size_t window = 10;
  std::size_t glove_dim = 50;
  std::size_t epochs = 100;
  std::uint64_t seed = 42;
  bool reset_window = false;
  bool mcd_reweight = false;
  std::string df_table;
  std::string filters;
  std::string format = "text";
};

void add_scoring_flags(CLI::App& cmd, MethodFlags& f) {
  cmd.add_option("--representation", f.representation, "Local vectors")
      ->check(CLI::IsMember({"tt", "glove"}));
  cmd.add_option("--metric", f.metric, "Distance to the center")
      ->check(CLI::IsMember({"euclidean", "cosine", "mahalanobis"}));
  cmd.add_option("--center", f.center, "Center estimator")->check(CLI::IsMember({"sample", "mcd"}));
  cmd.add_option("--covariance", f.covariance, "Covariance for the Mahalanobis metric")
      ->check(CLI::IsMember({"sample", "ml", "robust"}));
  cmd.add_option("--pca-dims", f.pca_dims, "Principal components kept (robust paths default to 10)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--window", f.window, "Co-occurrence window")->check(CLI::PositiveNumber);
  cmd.add_option("--glove-dim", f.glove_dim, "GloVe vector size")->check(CLI::PositiveNumber);
  cmd.add_option("--epochs", f.epochs, "GloVe training epochs")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", f.seed, "Seed for GloVe and MCD");
  cmd.add_flag("--reset-window", f.reset_window, "Do not let windows cross sentence boundaries");
  cmd.add_flag("--mcd-reweight", f.mcd_reweight, "Apply the reweighting step after raw MCD");
  cmd.add_option("--df-table", f.df_table, "Document-frequency table for tfidf");
  cmd.add_option("--filters", f.filters, std::string("Filter-list directory (default $") + kFilterDirEnv + ")");
  cmd.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "csv", "jsonl"}));
}

void validate_flags(const MethodFlags& f) {
  if (!f.covariance.empty() && f.metric != "mahalanobis")
    throw CLI::ValidationError("--covariance", "requires --metric mahalanobis");
}

ScoringConfig scoring_config(const MethodFlags& f, bool use_position) {
  ScoringConfig cfg;
  cfg.representation = f.representation == "glove" ? Representation::Glove : Representation::TermTerm;
  cfg.metric = f.metric == "cosine"        ? Metric::Cosine
               : f.metric == "mahalanobis" ? Metric::Mahalanobis
                                           : Metric::Euclidean;
  cfg.center = f.center == "mcd" ? CenterKind::RobustMcd : CenterKind::SampleMean;
  if (f.covariance == "sample") cfg.covariance_kind = CovarianceKind::Sample;
  if (f.covariance == "ml") cfg.covariance_kind = CovarianceKind::MaxLikelihood;
  if (f.covariance == "robust") cfg.covariance_kind = CovarianceKind::Robust;
  if (f.pca_dims > 0) cfg.pca_components = f.pca_dims;
  cfg.use_position = use_position;
  cfg.window = f.window;
  cfg.reset_window_at_sentences = f.reset_window;
  cfg.glove.dim = f.glove_dim;
  cfg.glove.epochs = f.epochs;
  cfg.seed = f.seed;
  cfg.mcd_reweight = f.mcd_reweight;
  return cfg.normalized();
}

FilterLists filter_lists(const MethodFlags& f) {
  if (!f.filters.empty()) return FilterLists::load_directory(f.filters);
  if (const char* dir = std::getenv(kFilterDirEnv); dir != nullptr && *dir != '\0')
    return FilterLists::load_directory(dir);
  return FilterLists::defaults();
}

Format format_of(const MethodFlags& f) {
  return f.format == "csv" ? Format::Csv : f.format == "jsonl" ? Format::Jsonl : Format::Text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

DatasetKind dataset_of(const std::string& name) {
  if (name == "nus") return DatasetKind::Nus;
  if (name == "semeval") return DatasetKind::Semeval;
  if (name == "krapivin") return DatasetKind::Krapivin;
  return DatasetKind::Custom;
}

// Runs one method on one document.
class MethodRunner {
 public:
  MethodRunner(Method method, const MethodFlags& flags, FilterLists lists, const DfTable* df)
      : method_(method), lists_(std::move(lists)), df_(df) {
    lv_ = scoring_config(flags, method == Method::Lv);
    baseline_.window = flags.window;
    baseline_.df = df;
    baseline_.lv = lv_;
  }

  std::vector<ScoredKeyword> run(const Document& doc, std::size_t k,
                                 const PosAnnotation* pos = nullptr) const {
    switch (method_) {
      case Method::Lv: return extract_keywords(doc, lists_, lv_, k);
      case Method::Lvb: return run_baseline(BaselineMethod::LvBaseline, doc, lists_, k, baseline_);
      default: break;
    }
    BaselineOptions opt = baseline_;
    opt.pos = pos;
    return run_baseline(baseline_method(), doc, lists_, k, opt);
  }

  const ScoringConfig& lv_config() const { return lv_; }
  const FilterLists& lists() const { return lists_; }

 private:
  BaselineMethod baseline_method() const {
    switch (method_) {
      case Method::TfIdf: return BaselineMethod::TfIdf;
      case Method::Fnw: return BaselineMethod::Fnw;
      case Method::Pr: return BaselineMethod::PageRank;
      case Method::Sr: return BaselineMethod::SingleRank;
      case Method::PosR: return BaselineMethod::PositionRank;
      case Method::Bt: return BaselineMethod::Betweenness;
      case Method::KCore: return BaselineMethod::KCore;
      default: return BaselineMethod::LvBaseline;
    }
  }

  Method method_;
  FilterLists lists_;
  const DfTable* df_;
  ScoringConfig lv_;
  BaselineOptions baseline_;
};

void print_keywords(std::ostream& out, const std::vector<ScoredKeyword>& ranked, Format fmt) {
  switch (fmt) {
    case Format::Csv:
      out << "rank,stem,score,distance,z\n";
      for (std::size_t i = 0; i < ranked.size(); ++i)
        out << i + 1 << ',' << ranked[i].stem << ',' << fixed3(ranked[i].score) << ','
            << fixed3(ranked[i].distance) << ',' << ranked[i].z << '\n';
      break;
    case Format::Jsonl:
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        nlohmann::ordered_json row{{"rank", i + 1},
                           {"stem", ranked[i].stem},
                           {"score", ranked[i].score},
                           {"distance", ranked[i].distance},
                           {"z", ranked[i].z}};
        out << row.dump() << '\n';
      }
      break;
    case Format::Text: {
      std::size_t width = 4;
      for (const auto& kw : ranked) width = std::max(width, kw.stem.size());
      char buf[256];
      std::snprintf(buf, sizeof buf, "%4s  %-*s  %10s  %10s  %4s\n", "rank", static_cast<int>(width),
                    "stem", "score", "distance", "z");
      out << buf;
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%4zu  %-*s  %10.3f  %10.3f  %4zu\n", i + 1,
                      static_cast<int>(width), ranked[i].stem.c_str(), ranked[i].score,
                      ranked[i].distance, ranked[i].z);
        out << buf;
      }
      break;
    }
  }
}

struct CorpusFlags {
  std::string corpus;
  std::string dataset = "custom";
  std::string part = "test";
  std::string manifest;
  std::string out_dir;
  std::vector<std::size_t> ks{5, 10, 15};
  std::size_t workers = 1;
};

void add_corpus_flags(CLI::App& cmd, CorpusFlags& c) {
  cmd.add_option("corpus", c.corpus, "Directory of <id>.txt / <id>.key pairs")->required();
  cmd.add_option("--dataset", c.dataset, "Collection layout and split rule")
      ->check(CLI::IsMember({"nus", "semeval", "krapivin", "custom"}));
  cmd.add_option("--part", c.part, "Split part")->check(CLI::IsMember({"train", "test", "all"}));
  cmd.add_option("--manifest", c.manifest, "Split manifest for --dataset custom");
  cmd.add_option("-k", c.ks, "Cut-offs, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
  cmd.add_option("--workers", c.workers, "Documents processed in parallel")->check(CLI::PositiveNumber);
}

std::vector<LabeledDocument> load_part(const CorpusFlags& c, std::vector<LabeledDocument>& all,
                                       std::ostream& err) {
  std::vector<std::string> warnings;
  all = load_collection(c.corpus, dataset_of(c.dataset), &warnings, c.workers);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (c.part == "all") return all;
  const DatasetKind kind = dataset_of(c.dataset);
  if (kind == DatasetKind::Custom && c.manifest.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--part " + c.part + " with --dataset custom needs --manifest");
  }
  Split split = make_split(all, kind, c.manifest.empty() ? std::nullopt
                                                         : std::optional<std::filesystem::path>(c.manifest));
  return c.part == "train" ? std::move(split.train) : std::move(split.test);
}

std::optional<DfTable> df_for(const MethodFlags& f, const std::vector<LabeledDocument>& collection,
                              const FilterLists& lists, bool needed) {
  if (!f.df_table.empty()) return DfTable::load(std::filesystem::path(f.df_table));
  if (!needed) return std::nullopt;
  DfTable df;
  df.collection_id = "collection";
  for (const auto& d : collection) {
    try {
      df.add_document(build_candidate_index(d.document, lists));
    } catch (const Error&) {
      ++df.total_documents;
    }
  }
  return df;
}

EvaluationReport evaluate_method(Method m, const MethodFlags& flags, const FilterLists& lists,
                                 const DfTable* df, const std::vector<LabeledDocument>& docs,
                                 const CorpusFlags& c) {
  const MethodRunner runner(m, flags, lists, df);
  const std::size_t kmax = *std::max_element(c.ks.begin(), c.ks.end());
  const Extractor extractor = [&](const LabeledDocument& d) {
    std::vector<std::string> stems;
    for (auto& kw : runner.run(d.document, kmax, d.pos ? &*d.pos : nullptr)) stems.push_back(kw.stem);
    return stems;
  };
  return evaluate_corpus(docs, extractor, label(m), c.ks, c.workers);
}

void print_summary(std::ostream& out, const std::vector<EvaluationReport>& reports, Format fmt,
                   bool mark_best) {
  switch (fmt) {
    case Format::Text:
      write_summary_table(out, reports, mark_best);
      break;
    case Format::Csv:
      out << "method,k,precision,recall,f1\n";
      for (const auto& r : reports)
        for (const auto& [k, m] : r.macro) {
          char buf[128];
          std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f,%.6f\n", k, m.precision, m.recall, m.f1);
          out << r.method_label << buf;
        }
      break;
    case Format::Jsonl:
      for (const auto& r : reports)
        for (const auto& [k, m] : r.macro)
          out << nlohmann::ordered_json{{"method", r.method_label}, {"k", k},         {"precision", m.precision},
                                {"recall", m.recall},       {"f1", m.f1},     {"documents", r.evaluated}}
                     .dump()
              << '\n';
      break;
  }
}

void report_problems(std::ostream& err, const EvaluationReport& r) {
  for (const auto& id : r.skipped_empty_gold) err << "warning: " << id << ": empty gold set, skipped\n";
  for (const auto& [id, msg] : r.failures) err << "warning: " << r.method_label << " failed on " << id << ": " << msg << '\n';
}

// ---- project --------------------------------------------------------------

struct ProjectedPoint {
  std::string word;
  double x = 0.0;
  double y = 0.0;
  std::string role;
};

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_svg(std::ostream& out, const std::vector<ProjectedPoint>& pts) {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
  }
  const double size = 640.0, pad = 40.0;
  const double sx = (size - 2 * pad) / std::max(1e-12, xmax - xmin);
  const double sy = (size - 2 * pad) / std::max(1e-12, ymax - ymin);
  const auto px = [&](double x) { return pad + (x - xmin) * sx; };
  const auto py = [&](double y) { return size - pad - (y - ymin) * sy; };
  char buf[512];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n"
      << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& p : pts) {
      const bool front = p.role != "word";
      if (front != (pass == 1)) continue;
      if (p.role == "word") {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#999999\"/>\n", px(p.x), py(p.y));
      } else if (p.role == "gold") {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"#d62728\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">%s</text>\n",
                      px(p.x), py(p.y), px(p.x) + 5, py(p.y) - 5, svg_escape(p.word).c_str());
      } else if (p.role == "mean") {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"16\" fill=\"#1f77b4\" text-anchor=\"middle\">x</text>"
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" fill=\"#1f77b4\">M</text>\n",
                      px(p.x), py(p.y) + 5, px(p.x) + 7, py(p.y) - 7);
      } else {
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"7\" height=\"7\" fill=\"black\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">RM</text>\n",
                      px(p.x) - 3.5, py(p.y) - 3.5, px(p.x) + 7, py(p.y) + 12);
      }
      out << buf;
    }
  }
  out << "</svg>\n";
}

struct ProjectFlags {
  std::string doc;
  std::string gold;
  std::string svg;
  bool normalize = false;
};

int cmd_project(const MethodFlags& flags, const ProjectFlags& pf, std::ostream& out, std::ostream& err) {
  const FilterLists lists = filter_lists(flags);
  ScoringConfig cfg = scoring_config(flags, true);
  const Document doc = make_document(pf.doc, read_text(pf.doc));
  const CandidateVocab vocab = build_candidate_index(doc, lists);
  const EmbeddingMatrix e = local_vectors_for(vocab, cfg);
  const std::size_t n = e.rows();
  if (n < 3) throw Error(ErrorCode::InsufficientSamples, "projection needs at least three candidates");

  const std::size_t m = std::min({cfg.pca_components.value_or(10), e.dim(), n - 1});
  Eigen::MatrixXd reduced = pca_transform(e.vectors, pca_fit(e.vectors, m));
  if (pf.normalize) {
    for (Eigen::Index j = 0; j < reduced.cols(); ++j) {
      const double sd = std::sqrt((reduced.col(j).array() - reduced.col(j).mean()).square().sum() /
                                  static_cast<double>(n - 1));
      if (sd > 0.0) reduced.col(j) /= sd;
      else err << "warning: principal component " << j + 1 << " has zero variance; left unscaled\n";
    }
  }
  const PcaProjection plane = pca_fit(reduced, std::min<std::size_t>(2, static_cast<std::size_t>(reduced.cols())));
  const Eigen::MatrixXd xy = pca_transform(reduced, plane);

  std::unordered_set<std::string> gold;
  if (!pf.gold.empty()) {
    std::istringstream lines(read_text(pf.gold));
    std::vector<std::string> phrases;
    for (std::string line; std::getline(lines, line);) phrases.push_back(line);
    for (auto& s : gold_stems_from(phrases)) gold.insert(std::move(s));
  }

  const auto coord = [&](const Eigen::MatrixXd& m2, Eigen::Index i, Eigen::Index j) {
    return j < m2.cols() ? m2(i, j) : 0.0;
  };
  std::vector<ProjectedPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    pts.push_back({e.stems[i], coord(xy, r, 0), coord(xy, r, 1), gold.count(e.stems[i]) ? "gold" : "word"});
  }
  const Eigen::MatrixXd mean = pca_transform(Eigen::MatrixXd(reduced.colwise().mean()), plane);
  pts.push_back({"M", coord(mean, 0, 0), coord(mean, 0, 1), "mean"});
  try {
    McdOptions opt;
    opt.seed = cfg.seed;
    const CenterEstimate robust = fast_mcd(reduced, opt);
    const Eigen::MatrixXd rm = pca_transform(Eigen::MatrixXd(robust.mean.transpose()), plane);
    pts.push_back({"RM", coord(rm, 0, 0), coord(rm, 0, 1), "robust_mean"});
  } catch (const Error& e2) {
    err << "warning: no robust mean: " << e2.what() << '\n';
  }

  char buf[256];
  out << "word,x,y,role\n";
  for (const auto& p : pts) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,", p.x, p.y);
    out << p.word << buf << p.role << '\n';
  }
  if (!pf.svg.empty()) {
    std::ofstream svg(pf.svg);
    if (!svg) throw Error(ErrorCode::Io, "cannot write " + pf.svg);
    write_svg(svg, pts);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keyword extraction from local word vectors"};
  app.name(args.empty() ? "lvke" : args.front());
  app.require_subcommand(1);

  MethodFlags flags;
  CorpusFlags corpus;
  ProjectFlags project;
  std::string doc_path;
  std::size_t k = 15;
  std::string export_vectors, center_out;
  std::vector<std::string> methods;
  std::string df_output;

  auto* extract = app.add_subcommand("extract", "Rank the keywords of one document");
  extract->add_option("document", doc_path, "UTF-8 text file")->required();
  extract->add_option("--method", flags.method, "Extraction method")
      ->check(CLI::IsMember({"lv", "lvb", "tfidf", "fnw", "pr", "sr", "posr", "bt", "kcore"}));
  extract->add_option("-k", k, "Number of keywords")->check(CLI::PositiveNumber);
  extract->add_option("--export-vectors", export_vectors, "Write the local vectors as text");
  extract->add_option("--center-out", center_out, "Write the estimated center as text");
  add_scoring_flags(*extract, flags);

  auto* evaluate = app.add_subcommand("evaluate", "F1@k of one method over a collection");
  add_corpus_flags(*evaluate, corpus);
  evaluate->add_option("--method", flags.method, "Extraction method")
      ->check(CLI::IsMember({"lv", "lvb", "tfidf", "fnw", "pr", "sr", "posr", "bt", "kcore"}));
  evaluate->add_option("--out", corpus.out_dir, "Directory for the per-document CSV and summary");
  add_scoring_flags(*evaluate, flags);

  auto* compare = app.add_subcommand("compare", "Side-by-side F1@k of several methods");
  add_corpus_flags(*compare, corpus);
  compare->add_option("--methods", methods, "Methods, comma separated")
      ->delimiter(',')
      ->required()
      ->check(CLI::IsMember({"lv", "lvb", "tfidf", "fnw", "pr", "sr", "posr", "bt", "kcore"}));
  compare->add_option("--out", corpus.out_dir, "Directory for per-method CSV files");
  add_scoring_flags(*compare, flags);

  auto* build_df = app.add_subcommand("build-df", "Document frequencies of a collection");
  build_df->add_option("corpus", corpus.corpus, "Directory of <id>.txt / <id>.key pairs")->required();
  build_df->add_option("--dataset", corpus.dataset, "Collection layout")
      ->check(CLI::IsMember({"nus", "semeval", "krapivin", "custom"}));
  build_df->add_option("--output,-o", df_output, "Output file (default standard output)");
  build_df->add_option("--filters", flags.filters, "Filter-list directory");
  build_df->add_option("--workers", corpus.workers, "Documents processed in parallel")->check(CLI::PositiveNumber);

  auto* proj = app.add_subcommand("project", "2-D PCA projection of a document's local vectors");
  proj->add_option("document", project.doc, "UTF-8 text file")->required();
  proj->add_option("--gold", project.gold, "Keyphrase file; matching stems get role=gold");
  proj->add_flag("--normalize", project.normalize, "Scale retained components to unit variance");
  proj->add_option("--svg", project.svg, "Also render an SVG scatter plot");
  add_scoring_flags(*proj, flags);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("lvke");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    validate_flags(flags);
    if (compare->parsed() && methods.empty()) throw CLI::ValidationError("--methods", "needs at least one method");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (extract->parsed()) {
      const Method method = kMethods.at(flags.method);
      const FilterLists lists = filter_lists(flags);
      std::optional<DfTable> df;
      if (method == Method::TfIdf) {
        if (flags.df_table.empty()) throw Error(ErrorCode::InvalidArgument, "tfidf needs --df-table");
        df = DfTable::load(std::filesystem::path(flags.df_table));
      }
      const Document doc = make_document(doc_path, read_text(doc_path));
      const MethodRunner runner(method, flags, lists, df ? &*df : nullptr);
      if ((method == Method::Lv || method == Method::Lvb) &&
          (!export_vectors.empty() || !center_out.empty())) {
        ScoringConfig cfg = runner.lv_config();
        cfg.use_position = method == Method::Lv;
        const Extraction ex = lvke::extract(doc, lists, cfg);
        if (!export_vectors.empty()) {
          std::ofstream f(export_vectors);
          if (!f) throw Error(ErrorCode::Io, "cannot write " + export_vectors);
          write_embeddings(f, ex.vectors);
        }
        if (!center_out.empty()) {
          std::ofstream f(center_out);
          if (!f) throw Error(ErrorCode::Io, "cannot write " + center_out);
          write_center(f, ex.center);
        }
        if (ex.diagnostics.pseudo_inverse) err << "note: covariance inverted with a pseudo-inverse\n";
        if (ex.diagnostics.covariance_regularized) err << "note: MCD covariance was regularized\n";
        print_keywords(out, rank(ex.scored, k), format_of(flags));
      } else {
        print_keywords(out, runner.run(doc, k), format_of(flags));
      }
      return kExitOk;
    }

    if (evaluate->parsed() || compare->parsed()) {
      if (evaluate->parsed()) methods = {flags.method};
      const FilterLists lists = filter_lists(flags);
      std::vector<LabeledDocument> all;
      const std::vector<LabeledDocument> docs = load_part(corpus, all, err);
      const bool wants_tfidf = std::find(methods.begin(), methods.end(), "tfidf") != methods.end();
      const std::optional<DfTable> df = df_for(flags, all, lists, wants_tfidf);

      std::vector<EvaluationReport> reports;
      for (const auto& name : methods) {
        reports.push_back(evaluate_method(kMethods.at(name), flags, lists, df ? &*df : nullptr, docs, corpus));
        report_problems(err, reports.back());
      }
      if (!corpus.out_dir.empty()) {
        std::filesystem::create_directories(corpus.out_dir);
        for (const auto& r : reports) {
          const auto path = std::filesystem::path(corpus.out_dir) / (r.method_label + "_per_document.csv");
          std::ofstream f(path);
          if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
          write_report_csv(f, r);
        }
        std::ofstream summary(std::filesystem::path(corpus.out_dir) / "summary.txt");
        write_summary_table(summary, reports, false);
      }
      print_summary(out, reports, format_of(flags), compare->parsed());
      return kExitOk;
    }

    if (build_df->parsed()) {
      const FilterLists lists = filter_lists(flags);
      std::vector<std::string> warnings;
      const auto docs = load_collection(corpus.corpus, dataset_of(corpus.dataset), &warnings, corpus.workers);
      for (const auto& w : warnings) err << "warning: " << w << '\n';
      const auto df = df_for(MethodFlags{}, docs, lists, true);
      if (df_output.empty()) df->save(out);
      else df->save(std::filesystem::path(df_output));
      return kExitOk;
    }

    if (proj->parsed()) return cmd_project(flags, project, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace lvke::cli
