#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lvke/datasets_io.hpp"

namespace lvke {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Exact string match of the first k predictions against the gold set.
// Precision divides by the number of predictions actually returned.
PrecisionRecall match_at_k(const std::vector<std::string>& predicted,
                           const std::unordered_set<std::string>& gold, std::size_t k);

struct DocumentScore {
  std::string doc_id;
  std::size_t k = 0;
  PrecisionRecall metrics;
};

struct EvaluationReport {
  std::string method_label;
  std::vector<std::size_t> ks;
  std::vector<DocumentScore> per_document;  // document id order, then k
  std::map<std::size_t, PrecisionRecall> macro;
  std::size_t evaluated = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // id, message
  std::vector<std::string> skipped_empty_gold;
};

// Maps a document to its ranked, de-duplicated stems.
using Extractor = std::function<std::vector<std::string>(const LabeledDocument&)>;

EvaluationReport evaluate_corpus(std::span<const LabeledDocument> docs, const Extractor& extractor,
                                 std::string method_label, std::vector<std::size_t> ks = {5, 10, 15},
                                 std::size_t workers = 1);

// doc_id,k,precision,recall,f1
void write_report_csv(std::ostream& out, const EvaluationReport& report);

// One row per report with an F1@k column per k. With `mark_best` the best
// value of each column is wrapped in asterisks.
void write_summary_table(std::ostream& out, const std::vector<EvaluationReport>& reports,
                         bool mark_best = false);

}  // namespace lvke
