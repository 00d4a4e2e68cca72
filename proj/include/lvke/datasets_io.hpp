#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lvke/text_pipeline.hpp"

namespace lvke {

enum class DatasetKind { Nus, Semeval, Krapivin, Custom };

struct LabeledDocument {
  Document document;
  std::vector<std::string> gold_keyphrases;
  std::vector<std::string> gold_stems;  // sorted, unique
  std::string origin;                   // "train"/"test" for pre-split layouts
  std::optional<PosAnnotation> pos;     // from an optional `<id>.pos`
};

// Each phrase is tokenized; tokens of at least two characters are stemmed.
std::vector<std::string> gold_stems_from(const std::vector<std::string>& keyphrases);

// Reads `<id>.txt` / `<id>.key` pairs from `dir`, sorted by id. For Semeval a
// `train/` + `test/` layout is read and documents are tagged with their
// origin. A `.txt` without `.key` is skipped with a warning.
std::vector<LabeledDocument> load_collection(const std::filesystem::path& dir, DatasetKind dataset,
                                             std::vector<std::string>* warnings = nullptr,
                                             std::size_t workers = 1);

struct Split {
  std::vector<LabeledDocument> train;
  std::vector<LabeledDocument> test;
  DatasetKind dataset = DatasetKind::Custom;
};

// Krapivin: first 400 ids are test. NUS: last 100 ids are test. Semeval:
// origin tags. Custom: `manifest` with `[train]` / `[test]` sections.
Split make_split(std::vector<LabeledDocument> docs, DatasetKind dataset,
                 const std::optional<std::filesystem::path>& manifest = std::nullopt);

}  // namespace lvke
