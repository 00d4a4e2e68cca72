#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "lvke/datasets_io.hpp"
#include "lvke/error.hpp"

using namespace lvke;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lvke_ds_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void put(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

void make_pairs(const fs::path& dir, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "d%04zu", i);
    put(dir / (std::string(id) + ".txt"), "Cloud storage replication.");
    put(dir / (std::string(id) + ".key"), "storage\n");
  }
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("gold stems") {
  CHECK(gold_stems_from({"data center"}) == std::vector<std::string>{"center", "data"});
  CHECK(gold_stems_from({"privacy"}) == std::vector<std::string>{"privaci"});
  CHECK(gold_stems_from({"Data centers", "data", "x"}) == std::vector<std::string>{"center", "data"});
}

TEST_CASE("collections load sorted, with keys and optional POS") {
  const auto dir = scratch("basic");
  put(dir / "b.txt", "Data centers.");
  put(dir / "b.key", "data center\r\n\n");
  put(dir / "a.txt", "Virtual servers migrate.");
  put(dir / "a.key", "virtual server\nmigration\n");
  put(dir / "a.pos", "virtual\tJJ\nservers\tNNS\nmigrate\tVBP\n");
  put(dir / "orphan.txt", "No key here.");
  std::vector<std::string> warnings;
  const auto docs = load_collection(dir, DatasetKind::Custom, &warnings);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].document.id == "a");
  CHECK(docs[0].pos.has_value());
  CHECK(docs[0].gold_stems == std::vector<std::string>{"migrat", "server", "virtual"});
  CHECK(docs[1].gold_keyphrases == std::vector<std::string>{"data center"});
  CHECK(docs[1].gold_stems == std::vector<std::string>{"center", "data"});
  CHECK_FALSE(docs[1].pos.has_value());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("orphan") != std::string::npos);

  const auto parallel = load_collection(dir, DatasetKind::Custom, nullptr, 3);
  REQUIRE(parallel.size() == 2);
  CHECK(parallel[1].document.id == "b");
}

TEST_CASE("collection errors") {
  CHECK(code_of([] { load_collection("/nonexistent/lvke", DatasetKind::Custom); }) == ErrorCode::Io);
  const auto empty = scratch("empty");
  CHECK(code_of([&] { load_collection(empty, DatasetKind::Custom); }) == ErrorCode::EmptyCollection);
}

TEST_CASE("semeval layout keeps its own split") {
  const auto dir = scratch("semeval");
  fs::create_directories(dir / "train");
  fs::create_directories(dir / "test");
  make_pairs(dir / "train", 3);
  put(dir / "test" / "t1.txt", "Protocol stacks.");
  put(dir / "test" / "t1.key", "protocol");
  const auto docs = load_collection(dir, DatasetKind::Semeval);
  CHECK(docs.size() == 4);
  const auto split = make_split(docs, DatasetKind::Semeval);
  CHECK(split.train.size() == 3);
  CHECK(split.test.size() == 1);
  CHECK(split.test[0].document.id == "t1");
}

TEST_CASE("nus and krapivin split by id order") {
  const auto dir = scratch("many");
  make_pairs(dir, 211);
  const auto docs = load_collection(dir, DatasetKind::Nus);
  const auto nus = make_split(docs, DatasetKind::Nus);
  CHECK(nus.train.size() == 111);
  CHECK(nus.test.size() == 100);
  CHECK(nus.test.front().document.id == "d0111");

  CHECK(code_of([&] { make_split(docs, DatasetKind::Krapivin); }) == ErrorCode::InsufficientDocuments);
  std::vector<LabeledDocument> big;
  for (std::size_t i = 0; i < 2304; ++i) {
    LabeledDocument d;
    d.document.id = "k" + std::to_string(10000 + i);
    big.push_back(d);
  }
  const auto kr = make_split(big, DatasetKind::Krapivin);
  CHECK(kr.test.size() == 400);
  CHECK(kr.train.size() == 1904);
  CHECK(kr.test.front().document.id == "k10000");

  std::vector<LabeledDocument> few(docs.begin(), docs.begin() + 50);
  CHECK(code_of([&] { make_split(few, DatasetKind::Nus); }) == ErrorCode::InsufficientDocuments);
}

TEST_CASE("custom manifests") {
  const auto dir = scratch("custom");
  make_pairs(dir, 4);
  const auto docs = load_collection(dir, DatasetKind::Custom);
  put(dir / "split.txt", "# comment\n[train]\nd0000\nd0001\n[test]\nd0003\n");
  const auto split = make_split(docs, DatasetKind::Custom, dir / "split.txt");
  CHECK(split.train.size() == 2);
  CHECK(split.test.size() == 1);

  CHECK(code_of([&] { make_split(docs, DatasetKind::Custom); }) == ErrorCode::InvalidArgument);
  put(dir / "missing.txt", "[test]\nd0009\n");
  CHECK(code_of([&] { make_split(docs, DatasetKind::Custom, dir / "missing.txt"); }) ==
        ErrorCode::InsufficientDocuments);
  put(dir / "nosection.txt", "d0000\n");
  CHECK(code_of([&] { make_split(docs, DatasetKind::Custom, dir / "nosection.txt"); }) ==
        ErrorCode::InvalidArgument);
}
