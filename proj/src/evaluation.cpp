#include "lvke/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <optional>
#include <ostream>
#include <thread>

#include "lvke/error.hpp"

namespace lvke {

PrecisionRecall match_at_k(const std::vector<std::string>& predicted,
                           const std::unordered_set<std::string>& gold, std::size_t k) {
  if (gold.empty()) throw Error(ErrorCode::EmptyGold, "gold set is empty");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  const std::size_t returned = std::min(k, predicted.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < returned; ++i) correct += gold.count(predicted[i]);

  PrecisionRecall m;
  if (returned == 0) return m;
  m.precision = static_cast<double>(correct) / static_cast<double>(returned);
  m.recall = static_cast<double>(correct) / static_cast<double>(gold.size());
  if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

EvaluationReport evaluate_corpus(std::span<const LabeledDocument> docs, const Extractor& extractor,
                                 std::string method_label, std::vector<std::size_t> ks,
                                 std::size_t workers) {
  if (ks.empty()) throw Error(ErrorCode::InvalidArgument, "no k values to evaluate");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  struct Outcome {
    std::vector<std::string> predicted;
    std::optional<std::string> error;
  };
  std::vector<Outcome> outcomes(docs.size());
  const auto run_one = [&](std::size_t i) {
    if (docs[i].gold_stems.empty()) return;
    try {
      outcomes[i].predicted = extractor(docs[i]);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < docs.size();) run_one(i);
      });
    for (auto& t : pool) t.join();
  }

  EvaluationReport report;
  report.method_label = std::move(method_label);
  report.ks = ks;
  std::map<std::size_t, PrecisionRecall> sums;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& id = docs[i].document.id;
    if (docs[i].gold_stems.empty()) {
      report.skipped_empty_gold.push_back(id);
      continue;
    }
    if (outcomes[i].error) {
      report.failures.emplace_back(id, *outcomes[i].error);
      continue;
    }
    const std::unordered_set<std::string> gold(docs[i].gold_stems.begin(), docs[i].gold_stems.end());
    for (const std::size_t k : ks) {
      const auto m = match_at_k(outcomes[i].predicted, gold, k);
      report.per_document.push_back({id, k, m});
      sums[k].precision += m.precision;
      sums[k].recall += m.recall;
      sums[k].f1 += m.f1;
    }
    ++report.evaluated;
  }
  for (const std::size_t k : ks) {
    PrecisionRecall mean;
    if (report.evaluated > 0) {
      const auto n = static_cast<double>(report.evaluated);
      mean = {sums[k].precision / n, sums[k].recall / n, sums[k].f1 / n};
    }
    report.macro[k] = mean;
  }
  return report;
}

void write_report_csv(std::ostream& out, const EvaluationReport& report) {
  char buf[128];
  out << "doc_id,k,precision,recall,f1\n";
  for (const auto& row : report.per_document) {
    std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f,%.6f\n", row.k, row.metrics.precision,
                  row.metrics.recall, row.metrics.f1);
    out << row.doc_id << buf;
  }
}

void write_summary_table(std::ostream& out, const std::vector<EvaluationReport>& reports,
                         bool mark_best) {
  if (reports.empty()) return;
  const auto& ks = reports.front().ks;
  std::size_t label_width = 6;
  for (const auto& r : reports) label_width = std::max(label_width, r.method_label.size());

  std::map<std::size_t, double> best;
  for (const auto& r : reports)
    for (const std::size_t k : ks)
      if (const auto it = r.macro.find(k); it != r.macro.end())
        best[k] = std::max(best[k], it->second.f1);

  char buf[64];
  out << std::string(label_width, ' ');
  for (const std::size_t k : ks) {
    std::snprintf(buf, sizeof buf, "  %9s", ("F1@" + std::to_string(k)).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& r : reports) {
    out << r.method_label << std::string(label_width - r.method_label.size(), ' ');
    for (const std::size_t k : ks) {
      const auto it = r.macro.find(k);
      const double f1 = it == r.macro.end() ? 0.0 : it->second.f1;
      std::string cell(16, '\0');
      cell.resize(static_cast<std::size_t>(std::snprintf(cell.data(), cell.size(), "%.3f", f1)));
      if (mark_best && reports.size() > 1 && f1 == best[k]) cell = "*" + cell + "*";
      std::snprintf(buf, sizeof buf, "  %9s", cell.c_str());
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace lvke
