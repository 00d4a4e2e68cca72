#include "lvke/datasets_io.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "lvke/error.hpp"
#include "unicode.hpp"

namespace lvke {
namespace {

constexpr std::size_t kKrapivinTest = 400;
constexpr std::size_t kNusTest = 100;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    lines.push_back(line.substr(first, last - first + 1));
  }
  return lines;
}

struct Entry {
  std::filesystem::path txt;
  std::string origin;
};

void scan(const std::filesystem::path& dir, const std::string& origin, std::vector<Entry>& out) {
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".txt") out.push_back({e.path(), origin});
}

}  // namespace

std::vector<std::string> gold_stems_from(const std::vector<std::string>& keyphrases) {
  std::set<std::string> stems;
  for (const auto& phrase : keyphrases)
    for (const auto& token : tokenize(phrase))
      if (unicode::length(token) >= 2) stems.insert(stem(token));
  return {stems.begin(), stems.end()};
}

std::vector<LabeledDocument> load_collection(const std::filesystem::path& dir, DatasetKind dataset,
                                             std::vector<std::string>* warnings,
                                             std::size_t workers) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorCode::Io, "collection directory not found: " + dir.string());

  std::vector<Entry> entries;
  if (dataset == DatasetKind::Semeval && std::filesystem::is_directory(dir / "train") &&
      std::filesystem::is_directory(dir / "test")) {
    scan(dir / "train", "train", entries);
    scan(dir / "test", "test", entries);
  } else {
    scan(dir, "", entries);
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.txt.stem().string() < b.txt.stem().string();
  });

  std::vector<Entry> usable;
  for (auto& e : entries) {
    auto key = e.txt;
    key.replace_extension(".key");
    if (!std::filesystem::exists(key)) {
      if (warnings) warnings->push_back("skipping " + e.txt.string() + ": no matching .key file");
      continue;
    }
    usable.push_back(std::move(e));
  }
  if (usable.empty()) throw Error(ErrorCode::EmptyCollection, "no .txt/.key pairs in " + dir.string());

  std::vector<std::optional<LabeledDocument>> loaded(usable.size());
  std::vector<std::string> failures(usable.size());
  const auto load_one = [&](std::size_t i) {
    const Entry& e = usable[i];
    try {
      LabeledDocument doc;
      doc.document = make_document(e.txt.stem().string(), read_file(e.txt));
      auto key = e.txt;
      doc.gold_keyphrases = read_lines(key.replace_extension(".key"));
      doc.gold_stems = gold_stems_from(doc.gold_keyphrases);
      doc.origin = e.origin;
      auto pos = e.txt;
      if (std::filesystem::exists(pos.replace_extension(".pos"))) doc.pos = read_pos_annotation(pos);
      loaded[i] = std::move(doc);
    } catch (const Error& err) {
      failures[i] = "skipping " + e.txt.string() + ": " + err.what();
    }
  };

  if (workers <= 1) {
    for (std::size_t i = 0; i < usable.size(); ++i) load_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < usable.size();) load_one(i);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<LabeledDocument> docs;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    if (loaded[i]) docs.push_back(std::move(*loaded[i]));
    else if (warnings) warnings->push_back(failures[i]);
  }
  if (docs.empty()) throw Error(ErrorCode::EmptyCollection, "no readable documents in " + dir.string());
  return docs;
}

Split make_split(std::vector<LabeledDocument> docs, DatasetKind dataset,
                 const std::optional<std::filesystem::path>& manifest) {
  Split split;
  split.dataset = dataset;
  std::sort(docs.begin(), docs.end(), [](const LabeledDocument& a, const LabeledDocument& b) {
    return a.document.id < b.document.id;
  });

  switch (dataset) {
    case DatasetKind::Krapivin: {
      if (docs.size() < kKrapivinTest)
        throw Error(ErrorCode::InsufficientDocuments,
                    "Krapivin split needs at least 400 documents, got " + std::to_string(docs.size()));
      const auto cut = docs.begin() + static_cast<long>(kKrapivinTest);
      split.test.assign(std::make_move_iterator(docs.begin()), std::make_move_iterator(cut));
      split.train.assign(std::make_move_iterator(cut), std::make_move_iterator(docs.end()));
      break;
    }
    case DatasetKind::Nus: {
      if (docs.size() < kNusTest)
        throw Error(ErrorCode::InsufficientDocuments,
                    "NUS split needs at least 100 documents, got " + std::to_string(docs.size()));
      const auto cut = docs.end() - static_cast<long>(kNusTest);
      split.train.assign(std::make_move_iterator(docs.begin()), std::make_move_iterator(cut));
      split.test.assign(std::make_move_iterator(cut), std::make_move_iterator(docs.end()));
      break;
    }
    case DatasetKind::Semeval: {
      for (auto& d : docs) {
        if (d.origin == "train") split.train.push_back(std::move(d));
        else if (d.origin == "test") split.test.push_back(std::move(d));
      }
      if (split.train.empty() || split.test.empty())
        throw Error(ErrorCode::InsufficientDocuments,
                    "Semeval split needs documents under both train/ and test/");
      break;
    }
    case DatasetKind::Custom: {
      if (!manifest) throw Error(ErrorCode::InvalidArgument, "custom split needs a manifest file");
      std::unordered_map<std::string, std::string> section_of;
      std::string section;
      for (const auto& line : read_lines(*manifest)) {
        if (line == "[train]" || line == "[test]") {
          section = line.substr(1, line.size() - 2);
        } else if (!line.empty() && line[0] != '#') {
          if (section.empty())
            throw Error(ErrorCode::InvalidArgument, "manifest id '" + line + "' precedes any section");
          if (!section_of.emplace(line, section).second)
            throw Error(ErrorCode::InvalidArgument, "manifest lists '" + line + "' twice");
        }
      }
      std::size_t matched = 0;
      for (auto& d : docs) {
        const auto it = section_of.find(d.document.id);
        if (it == section_of.end()) continue;
        ++matched;
        (it->second == "train" ? split.train : split.test).push_back(std::move(d));
      }
      if (matched < section_of.size())
        throw Error(ErrorCode::InsufficientDocuments,
                    "manifest names " + std::to_string(section_of.size() - matched) +
                        " documents missing from the collection");
      break;
    }
  }
  return split;
}

}  // namespace lvke
