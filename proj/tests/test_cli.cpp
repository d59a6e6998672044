#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pragcap/caption_gen.hpp"
#include "pragcap/feature_space.hpp"
#include "pragcap/io.hpp"

using namespace pragcap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string bin_path() {
  const char* bin = std::getenv("PRAGCAP_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "PRAGCAP_BIN must point at the CLI (run via ctest)");
  return bin;
}

fs::path tmp_dir() {
  const char* tmp = std::getenv("PRAGCAP_TMP");
  REQUIRE(tmp != nullptr);
  fs::create_directories(tmp);
  return tmp;
}

int run_cli(const std::string& args) {
  const std::string cmd = bin_path() + " " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file ", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t record_count(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && !json::parse(line).contains("meta")) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("validate-lexicon accepts the builtin grammar") {
  CHECK(run_cli("validate-lexicon") == 0);
}

TEST_CASE("validate-lexicon rejects broken inputs with exit 3") {
  const auto dir = tmp_dir();
  {
    std::ofstream out(dir / "truncated.json");
    out << "{ \"version\": ";
  }
  CHECK(run_cli("--lexicon " + (dir / "truncated.json").string() + " validate-lexicon") == 3);
  {
    // drop all shape phrases from an otherwise fine document
    std::ofstream out(dir / "noshape.json");
    out << R"({"version":"x","phrases":[],"head_nouns":[],"templates":[]})";
  }
  CHECK(run_cli("--lexicon " + (dir / "noshape.json").string() + " validate-lexicon") == 3);
  CHECK(run_cli("--lexicon /nonexistent.json validate-lexicon") == 3);
}

TEST_CASE("argument errors exit with 2") {
  CHECK(run_cli("gen-captions --range bogus --kind short --out /tmp/x.jsonl") == 2);
  CHECK(run_cli("gen-captions --range 5:1 --kind short --out /tmp/x.jsonl") == 2);
  CHECK(run_cli("no-such-command") == 2);
  const auto dir = tmp_dir();
  CHECK(run_cli("simulate --speaker parrot --out " + (dir / "r").string()) == 2);
}

TEST_CASE("gen-captions dumps every caption of the range, deterministically") {
  const auto dir = tmp_dir();
  const auto out = dir / "caps.jsonl";
  REQUIRE(run_cli("gen-captions --range 0:5 --kind exhaustive --out " + out.string()) == 0);
  const std::string first = slurp(out);

  std::size_t expected = 0;
  for (ImageId id = 0; id < 5; ++id) {
    expected += count_for_label(Lexicon::builtin(), CaptionKind::Exhaustive, decode_id(id));
  }
  CHECK(record_count(out) == expected);

  // re-run: byte identical
  REQUIRE(run_cli("gen-captions --range 0:5 --kind exhaustive --out " + out.string()) == 0);
  CHECK(slurp(out) == first);

  // exactly one embedded meta line
  std::istringstream in(first);
  std::string line;
  std::size_t metas = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && json::parse(line).contains("meta")) ++metas;
  }
  CHECK(metas == 1);
}

TEST_CASE("gen-captions shards roll over by size") {
  const auto dir = tmp_dir();
  const auto out = dir / "sharded.jsonl";
  REQUIRE(run_cli("gen-captions --range 0:4 --kind short --shard-bytes 4096 --out " +
                  out.string()) == 0);
  CHECK(fs::exists(dir / "sharded.000.jsonl"));
  CHECK(fs::exists(dir / "sharded.001.jsonl"));
}

TEST_CASE("make-splits writes the suite and a manifest") {
  const auto dir = tmp_dir() / "suite";
  REQUIRE(run_cli("--seed 3 make-splits --pairs-per-set 20 --out " + dir.string()) == 0);
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest.at("sets").size() == 13);
  for (const auto& entry : manifest.at("sets")) {
    const fs::path file = dir / entry.at("file").get<std::string>();
    CHECK(record_count(file) == 20);
  }
  CHECK(manifest.at("meta").at("seed") == 3);
}

TEST_CASE("a custom one-feature split validates") {
  const auto dir = tmp_dir() / "custom";
  REQUIRE(run_cli("--seed 8 make-splits --pairs-per-set 25 --name one_orientation_custom "
                  "--match orientation --out " +
                  dir.string()) == 0);
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest.at("sets").size() == 1);
  CHECK(manifest.at("sets")[0].at("category") == "one_feature");
}

TEST_CASE("simulate writes Table-style reports and a game log") {
  const auto dir = tmp_dir() / "sim";
  fs::create_directories(dir);
  const std::string prefix = (dir / "report").string();
  REQUIRE(run_cli("--seed 5 simulate --speaker oracle-minimal --listener l0 "
                  "--pairs-per-set 15 --game-log " +
                  (dir / "games.jsonl").string() + " --out " + prefix) == 0);
  const json report = json::parse(slurp(prefix + ".json"));
  REQUIRE(report.at("sets").size() == 13);
  for (const auto& set : report.at("sets")) {
    CHECK(set.at("metrics").at("optimal_contrastivity") == 1.0);
    CHECK(set.at("metrics").at("listener_accuracy") == 1.0);
  }
  const std::string csv = slurp(prefix + ".csv");
  CHECK(csv.find("Optimal contrastivity") != std::string::npos);
  CHECK(csv.find("Listener accuracy") != std::string::npos);
  CHECK(csv.rfind("# pragcap", 0) == 0);
  CHECK(record_count(dir / "games.jsonl") == 13 * 15);
}

TEST_CASE("evaluate scores an external dump against a split") {
  const auto dir = tmp_dir() / "eval";
  fs::create_directories(dir);

  // a single-pair split holding the five-feature-match scene
  const ImageId target = encode_id(Label::from_values(4, 3, 0, 0, 2, 11));
  const ImageId distractor = encode_id(Label::from_values(4, 3, 8, 0, 2, 11));
  {
    std::ofstream split(dir / "fig.jsonl");
    split << json{{"pair_index", 0},
                  {"target_id", target},
                  {"distractor_id", distractor},
                  {"category", "one_feature"},
                  {"constraint", json{{"type", "features"}, {"features", {"floor_color"}}}},
                  {"seed", 0}}
                 .dump()
          << "\n";
    std::ofstream manifest(dir / "manifest.json");
    manifest << json{{"meta", json::object()},
                     {"sets", json::array({json{{"name", "fig"},
                                                {"category", "one_feature"},
                                                {"constraint",
                                                 json{{"type", "features"},
                                                      {"features", {"floor_color"}}}},
                                                {"pairs_per_set", 1},
                                                {"seed", 0},
                                                {"file", "fig.jsonl"}}})}}
                    .dump(2);
  }
  {
    std::ofstream dump(dir / "dump.jsonl");
    dump << json{{"pair_index", 0},
                 {"text", "a tiny red ball green near the floor in green of"}}
                .dump()
         << "\n";
  }
  const std::string prefix = (dir / "report").string();
  REQUIRE(run_cli("evaluate --splits " + (dir / "manifest.json").string() + " --captions " +
                  (dir / "dump.jsonl").string() + " --out " + prefix) == 0);
  const json report = json::parse(slurp(prefix + ".json"));
  const auto& metrics = report.at("sets")[0].at("metrics");
  CHECK(metrics.at("discriminativity") == 1.0);
  CHECK(metrics.at("listener_accuracy").is_null());

  // an empty-string dump is non-discriminative and lists nothing as covered twice
  {
    std::ofstream dump(dir / "empty.jsonl");
    dump << json{{"pair_index", 0}, {"text", ""}}.dump() << "\n";
  }
  REQUIRE(run_cli("evaluate --splits " + (dir / "manifest.json").string() + " --captions " +
                  (dir / "empty.jsonl").string() + " --out " + prefix + "_empty") == 0);
  const json empty_report = json::parse(slurp(prefix + "_empty.json"));
  CHECK(empty_report.at("sets")[0].at("metrics").at("discriminativity") == 0.0);
  CHECK(empty_report.at("sets")[0].at("metrics").at("listener_accuracy").is_null());

  // missing files are I/O errors
  CHECK(run_cli("evaluate --splits " + (dir / "manifest.json").string() +
                " --captions /nonexistent.jsonl --out " + prefix) == 4);

  // a degenerate pair in a split file is a validation failure
  {
    std::ofstream split(dir / "fig.jsonl", std::ios::app);
    split << json{{"pair_index", 1},
                  {"target_id", target},
                  {"distractor_id", target},
                  {"category", "one_feature"},
                  {"constraint", json{{"type", "features"}, {"features", {"floor_color"}}}},
                  {"seed", 0}}
                 .dump()
          << "\n";
  }
  CHECK(run_cli("evaluate --splits " + (dir / "manifest.json").string() + " --captions " +
                (dir / "dump.jsonl").string() + " --out " + prefix) == 3);
}

TEST_CASE("simulate can be restricted to one category") {
  const auto dir = tmp_dir() / "cat";
  fs::create_directories(dir);
  const std::string prefix = (dir / "report").string();
  REQUIRE(run_cli("--seed 4 --category two_features simulate --speaker exhaustive "
                  "--pairs-per-set 10 --out " +
                  prefix) == 0);
  const json report = json::parse(slurp(prefix + ".json"));
  CHECK(report.at("sets").size() == 4);
  for (const auto& set : report.at("sets")) {
    CHECK(set.at("category") == "two_features");
  }
  CHECK(run_cli("--category bogus simulate --speaker exhaustive --pairs-per-set 5 --out " +
                prefix) == 2);
}

TEST_CASE("evaluate reports uncovered pairs and proceeds") {
  const auto dir = tmp_dir() / "uncov";
  fs::create_directories(dir);
  REQUIRE(run_cli("--seed 12 make-splits --pairs-per-set 10 --name one_shape_small "
                  "--match shape --out " +
                  dir.string()) == 0);
  // cover only pairs 0 and 3
  {
    std::ofstream dump(dir / "dump.jsonl");
    dump << json{{"pair_index", 0}, {"text", "a ball"}}.dump() << "\n";
    dump << json{{"pair_index", 3}, {"text", ""}}.dump() << "\n";
  }
  const std::string prefix = (dir / "report").string();
  REQUIRE(run_cli("evaluate --splits " + (dir / "manifest.json").string() + " --captions " +
                  (dir / "dump.jsonl").string() + " --out " + prefix) == 0);
  const json report = json::parse(slurp(prefix + ".json"));
  CHECK(report.at("sets")[0].at("count") == 2);
  CHECK(report.at("sets")[0].at("uncovered").size() == 8);
}
