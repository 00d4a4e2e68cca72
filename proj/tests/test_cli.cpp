#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lvke");
  std::ostringstream out, err;
  const int code = lvke::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

const char* kDoc =
    "Live data center migration across wide area networks. "
    "Virtual machine migration moves running services between physical servers in a data center. "
    "Operators rely on migration for load balancing and maintenance of the data center. "
    "Storage replication keeps data available while the virtual servers move. "
    "Wide area migration needs bandwidth, storage and careful replication of data.";

const char* kOther =
    "Service interface abstraction for composing network protocols. "
    "A protocol framework supports dynamic replacement of protocol modules. "
    "Modularity of the framework allows dynamic updates of the protocol stack.";

struct Fixture {
  fs::path dir = fs::temp_directory_path() / "lvke_cli_test";
  Fixture() {
    fs::remove_all(dir);
    fs::create_directories(dir / "corpus");
    std::ofstream(dir / "doc.txt") << kDoc;
    std::ofstream(dir / "empty.txt") << "";
    std::ofstream(dir / "stop.txt") << "The and of.";
    std::ofstream(dir / "gold.key") << "data center\nmigration\n";
    std::ofstream(dir / "corpus" / "a.txt") << kDoc;
    std::ofstream(dir / "corpus" / "a.key") << "data center\nmigration\nvirtual server\nstorage\n";
    std::ofstream(dir / "corpus" / "b.txt") << kOther;
    std::ofstream(dir / "corpus" / "b.key") << "protocol\nframeworks\nmodularity\ndynamic\n";
    std::ofstream(dir / "split.txt") << "[train]\na\n[test]\nb\n";
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "extract writes a ranked CSV") {
  const auto r = run({"extract", path("doc.txt"), "--method", "lv", "-k", "5", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "rank,stem,score,distance,z");
  CHECK(rows[1].rfind("1,", 0) == 0);
  // three decimals
  const auto score = rows[1].substr(rows[1].find(',', 2) + 1);
  CHECK(score.find('.') == score.find(',') - 4);
}

TEST_CASE_FIXTURE(Fixture, "extract is deterministic for every method") {
  for (const char* m : {"lv", "lvb", "fnw", "pr", "sr", "posr", "bt", "kcore"}) {
    CAPTURE(m);
    const auto a = run({"extract", path("doc.txt"), "--method", m, "-k", "10"});
    const auto b = run({"extract", path("doc.txt"), "--method", m, "-k", "10"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(lines(a.out).size() == 11);
  }
  const auto g1 = run({"extract", path("doc.txt"), "--representation", "glove", "--glove-dim", "8", "--epochs", "10",
                       "--seed", "3", "--format", "jsonl"});
  const auto g2 = run({"extract", path("doc.txt"), "--representation", "glove", "--glove-dim", "8", "--epochs", "10",
                       "--seed", "3", "--format", "jsonl"});
  REQUIRE(g1.code == 0);
  CHECK(g1.out == g2.out);
  const auto first = nlohmann::json::parse(lines(g1.out).front());
  CHECK(first.at("rank") == 1);
  CHECK(first.contains("stem"));
}

TEST_CASE_FIXTURE(Fixture, "extract exports vectors and the center") {
  const auto r = run({"extract", path("doc.txt"), "--center", "mcd", "--export-vectors", path("vec.txt"),
                      "--center-out", path("center.txt")});
  REQUIRE(r.code == 0);
  std::ifstream vec(path("vec.txt"));
  std::string first;
  std::getline(vec, first);
  std::istringstream fields(first);
  std::vector<std::string> parts;
  for (std::string f; fields >> f;) parts.push_back(f);
  CHECK(parts.size() == 11);  // stem plus 10 reduced dimensions
  std::ifstream center(path("center.txt"));
  std::string mean_line;
  std::getline(center, mean_line);
  CHECK(mean_line.rfind("mean ", 0) == 0);
}

TEST_CASE_FIXTURE(Fixture, "usage errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"extract"}).code == 1);
  CHECK(run({"extract", path("doc.txt"), "--method", "nope"}).code == 1);
  const auto cov = run({"extract", path("doc.txt"), "--covariance", "ml"});
  CHECK(cov.code == 1);
  CHECK(cov.err.find("mahalanobis") != std::string::npos);
  CHECK(run({"extract", path("doc.txt"), "-k", "0"}).code == 1);
  CHECK(run({"compare", path("corpus"), "--methods", ""}).code == 1);
  CHECK(run({"compare", path("corpus")}).code == 1);
  CHECK(run({"extract", path("doc.txt"), "--help"}).code == 0);
}

TEST_CASE_FIXTURE(Fixture, "runtime failures exit with 2") {
  CHECK(run({"extract", path("empty.txt")}).code == 2);
  const auto stop = run({"extract", path("stop.txt")});
  CHECK(stop.code == 2);
  CHECK(stop.err.find("NoCandidates") != std::string::npos);
  CHECK(run({"extract", path("missing.txt")}).code == 2);
  CHECK(run({"evaluate", path("no_such_dir")}).code == 2);
  CHECK(run({"extract", path("doc.txt"), "--method", "tfidf"}).code == 2);
}

TEST_CASE_FIXTURE(Fixture, "build-df then tfidf") {
  const auto df = run({"build-df", path("corpus"), "-o", path("df.tsv")});
  REQUIRE(df.code == 0);
  std::ifstream in(path("df.tsv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "#docs=2");
  const auto r = run({"extract", path("doc.txt"), "--method", "tfidf", "--df-table", path("df.tsv"), "-k", "3"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 4);
}

TEST_CASE_FIXTURE(Fixture, "evaluate and compare") {
  const auto ev = run({"evaluate", path("corpus"), "--part", "all", "--method", "lv", "-k", "5,10",
                       "--out", path("report")});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("F1@5") != std::string::npos);
  CHECK(ev.out.find("F1@10") != std::string::npos);
  CHECK(fs::exists(dir / "report" / "LV_per_document.csv"));

  const auto cmp = run({"compare", path("corpus"), "--part", "all", "--methods", "tfidf,fnw,lvb,lv"});
  REQUIRE(cmp.code == 0);
  CHECK(lines(cmp.out).size() == 5);  // header plus four methods

  const auto csv = run({"compare", path("corpus"), "--part", "test", "--manifest", path("split.txt"),
                        "--methods", "lv,pr", "--format", "csv", "-k", "5"});
  REQUIRE(csv.code == 0);
  CHECK(lines(csv.out) .size() == 3);
  CHECK(lines(csv.out)[0] == "method,k,precision,recall,f1");

  CHECK(run({"evaluate", path("corpus"), "--part", "test"}).code == 2);  // custom split needs a manifest
}

TEST_CASE_FIXTURE(Fixture, "project exports a 2-D scatter") {
  const auto r = run({"project", path("doc.txt"), "--gold", path("gold.key"), "--normalize", "--svg", path("p.svg")});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  CHECK(rows[0] == "word,x,y,role");
  int gold = 0, mean = 0, robust = 0;
  for (const auto& row : rows) {
    if (row.rfind("data,", 0) == 0 || row.rfind("center,", 0) == 0 || row.rfind("migrat,", 0) == 0)
      CHECK(row.substr(row.rfind(',') + 1) == "gold");
    gold += row.ends_with(",gold");
    mean += row.ends_with(",mean");
    robust += row.ends_with(",robust_mean");
  }
  CHECK(gold == 3);
  CHECK(mean == 1);
  CHECK(robust == 1);
  CHECK(fs::file_size(path("p.svg")) > 100);
}
