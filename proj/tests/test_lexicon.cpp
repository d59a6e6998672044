#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "pragcap/lexicon.hpp"

using namespace pragcap;
using nlohmann::json;

namespace {

json minimal_doc() {
  return json{{"version", "test"},
              {"phrases", json::array()},
              {"head_nouns", json::array()},
              {"templates", json::array()}};
}

std::vector<Violation> errors_of(const std::vector<Violation>& vs) {
  std::vector<Violation> out;
  for (const auto& v : vs)
    if (!v.note) out.push_back(v);
  return out;
}

// contiguous containment oracle, independent of the library's implementation
bool oracle_contained(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() >= b.size()) return false;
  for (std::size_t off = 0; off + a.size() <= b.size(); ++off) {
    bool all = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[off + i]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("builtin lexicon validates clean") {
  const auto& lex = Lexicon::builtin();
  const auto violations = validate_lexicon(lex);
  CHECK(error_count(violations) == 0);

  // notes must be exactly the containment pairs found by enumeration
  std::set<std::pair<std::string, std::string>> expected;
  std::set<std::vector<std::string>> seqs;
  for (const auto& p : lex.phrases()) seqs.insert(p.tokens);
  for (const auto& n : lex.standalone_nouns()) seqs.insert(n.tokens);
  for (const auto& a : seqs) {
    for (const auto& b : seqs) {
      if (oracle_contained(a, b)) {
        std::string at, bt;
        for (const auto& t : a) at += (at.empty() ? "" : " ") + t;
        for (const auto& t : b) bt += (bt.empty() ? "" : " ") + t;
        expected.insert({at, bt});
      }
    }
  }
  std::size_t containment_notes = 0;
  for (const auto& v : violations) {
    if (v.note && v.code == "phrase_containment") ++containment_notes;
  }
  CHECK(containment_notes == expected.size());
  // the pair forcing the longest-match rule is among them
  bool found_green = false;
  for (const auto& v : violations) {
    if (v.note && v.message.find("\"green\"") != std::string::npos &&
        v.message.find("light green") != std::string::npos) {
      found_green = true;
    }
  }
  CHECK(found_green);
}

TEST_CASE("phrases_for covers the quoted surface forms") {
  const auto& lex = Lexicon::builtin();
  const auto has_text = [](const std::vector<const Phrase*>& ps, const std::string& text) {
    return std::any_of(ps.begin(), ps.end(),
                       [&](const Phrase* p) { return p->text() == text; });
  };
  // sphere synonyms
  auto shapes = lex.phrases_for(Feature::Shape, 2);
  CHECK(has_text(shapes, "ball"));
  CHECK(has_text(shapes, "sphere"));
  // hues
  CHECK(has_text(lex.phrases_for(Feature::FloorColor, 4), "green"));
  CHECK(has_text(lex.phrases_for(Feature::WallColor, 3), "light green"));
  CHECK(has_text(lex.phrases_for(Feature::ObjectColor, 0), "red"));
  CHECK(has_text(lex.phrases_for(Feature::ObjectColor, 8), "purple"));
  // scales and orientations
  CHECK(has_text(lex.phrases_for(Feature::Scale, 0), "tiny"));
  CHECK(has_text(lex.phrases_for(Feature::Orientation, 11), "near the right corner"));
  CHECK(has_text(lex.phrases_for(Feature::Orientation, 7), "in the middle"));

  CHECK_THROWS_AS(lex.phrases_for(Feature::Shape, 4), std::out_of_range);
  CHECK_THROWS_AS(lex.phrases_for(Feature::Scale, -1), std::out_of_range);
}

TEST_CASE("coverage holds for every feature value") {
  const auto& lex = Lexicon::builtin();
  for (Feature f : kFeatures) {
    for (int v = 0; v < cardinality(f); ++v) {
      CHECK_FALSE(lex.phrases_for(f, v).empty());
    }
  }
}

TEST_CASE("color index shares hue words across the three color features") {
  const auto& lex = Lexicon::builtin();
  for (const auto& p : lex.phrases()) {
    if (!is_color_feature(p.feature)) continue;
    const auto it = lex.color_index().find(p.text());
    REQUIRE(it != lex.color_index().end());
    CHECK(it->second[feature_index(p.feature)].has_value());
  }
  const auto& green = lex.color_index().at("green");
  for (int fi = 0; fi < 3; ++fi) {
    REQUIRE(green[fi].has_value());
    CHECK(*green[fi] == std::vector<int>{4});
  }
}

TEST_CASE("empty lexicon reports one coverage violation per feature value") {
  const Lexicon lex = Lexicon::from_json_text(minimal_doc().dump());
  const auto violations = validate_lexicon(lex);
  const auto errors = errors_of(violations);
  CHECK(errors.size() == 57);  // 10+10+10+8+4+15
  for (const auto& v : errors) CHECK(v.code == "coverage");
}

TEST_CASE("missing shape coverage names the pair") {
  json doc = minimal_doc();
  doc["phrases"].push_back(
      {{"tokens", {"ball"}}, {"feature", "shape"}, {"values", {2}}, {"noun_class", "object"}});
  const Lexicon lex = Lexicon::from_json_text(doc.dump());
  bool named = false;
  for (const auto& v : validate_lexicon(lex)) {
    if (v.code == "coverage" && v.message.find("(shape, 3)") != std::string::npos) named = true;
  }
  CHECK(named);
}

TEST_CASE("ambiguous scale phrase is a violation") {
  json doc = minimal_doc();
  doc["phrases"].push_back({{"tokens", {"huge"}}, {"feature", "scale"}, {"values", {5}}});
  doc["phrases"].push_back({{"tokens", {"huge"}}, {"feature", "scale"}, {"values", {6}}});
  const Lexicon lex = Lexicon::from_json_text(doc.dump());
  bool flagged = false;
  for (const auto& v : validate_lexicon(lex)) {
    if (v.code == "ambiguous_phrase" && v.message.find("huge") != std::string::npos)
      flagged = true;
  }
  CHECK(flagged);
}

TEST_CASE("identical duplicate entries are not ambiguous") {
  json doc = minimal_doc();
  doc["phrases"].push_back({{"tokens", {"huge"}}, {"feature", "scale"}, {"values", {5}}});
  doc["phrases"].push_back({{"tokens", {"huge"}}, {"feature", "scale"}, {"values", {5}}});
  for (const auto& v : validate_lexicon(Lexicon::from_json_text(doc.dump()))) {
    CHECK(v.code != "ambiguous_phrase");
  }
}

TEST_CASE("uppercase tokens are a normalization violation") {
  json doc = minimal_doc();
  doc["phrases"].push_back({{"tokens", {"Huge"}}, {"feature", "scale"}, {"values", {5}}});
  bool flagged = false;
  for (const auto& v : validate_lexicon(Lexicon::from_json_text(doc.dump()))) {
    if (v.code == "normalization") flagged = true;
  }
  CHECK(flagged);
}

TEST_CASE("out-of-range and empty denotations are violations") {
  json doc = minimal_doc();
  doc["phrases"].push_back({{"tokens", {"huge"}}, {"feature", "scale"}, {"values", {9}}});
  doc["phrases"].push_back({{"tokens", {"void"}}, {"feature", "scale"}, {"values", json::array()}});
  bool range = false, empty = false;
  for (const auto& v : validate_lexicon(Lexicon::from_json_text(doc.dump()))) {
    if (v.code == "denotation_range") range = true;
    if (v.code == "empty_denotation") empty = true;
  }
  CHECK(range);
  CHECK(empty);
}

TEST_CASE("cross-feature reuse outside colors is flagged, color sharing is not") {
  json doc = minimal_doc();
  doc["phrases"].push_back({{"tokens", {"green"}}, {"feature", "floor_color"}, {"values", {4}}});
  doc["phrases"].push_back({{"tokens", {"green"}}, {"feature", "wall_color"}, {"values", {4}}});
  doc["phrases"].push_back({{"tokens", {"tall"}}, {"feature", "scale"}, {"values", {7}}});
  doc["phrases"].push_back({{"tokens", {"tall"}}, {"feature", "shape"}, {"values", {1}}});
  int cross = 0;
  for (const auto& v : validate_lexicon(Lexicon::from_json_text(doc.dump()))) {
    if (v.code == "cross_feature_phrase") ++cross;
  }
  CHECK(cross == 1);
}

TEST_CASE("malformed documents raise schema errors") {
  CHECK_THROWS_AS(Lexicon::from_json_text("{ truncated"), LexiconFormatError);
  CHECK_THROWS_AS(Lexicon::from_json_text("[]"), LexiconFormatError);
  CHECK_THROWS_AS(Lexicon::from_json_text(R"({"version": "x"})"), LexiconFormatError);
  json doc = minimal_doc();
  doc["templates"].push_back({{"kind", "short"}, {"pattern", "a {hue} thing"}});
  CHECK_THROWS_AS(Lexicon::from_json_text(doc.dump()), LexiconFormatError);
  CHECK_THROWS_AS(Lexicon::from_file("/nonexistent/lexicon.json"), LexiconFormatError);
}

TEST_CASE("template arity violations") {
  json doc = minimal_doc();
  doc["templates"].push_back({{"kind", "exhaustive"}, {"pattern", "a {shape} on {floor_color} floor"}});
  doc["templates"].push_back({{"kind", "short"}, {"pattern", "{shape}"}});
  doc["templates"].push_back({{"kind", "short"}, {"pattern", "{shape} {shape}"}});
  int arity = 0;
  for (const auto& v : validate_lexicon(Lexicon::from_json_text(doc.dump()))) {
    if (v.code == "template_arity") ++arity;
  }
  CHECK(arity >= 3);
}

TEST_CASE("load_lexicon surfaces violations as an error") {
  CHECK_THROWS_AS(load_lexicon("/nonexistent/lexicon.json"), LexiconFormatError);
  const char* data_dir = std::getenv("PRAGCAP_DATA");
  if (data_dir) {
    const Lexicon lex = load_lexicon(std::string(data_dir) + "/lexicon.json");
    CHECK(lex.version() == Lexicon::builtin().version());
    CHECK(lex.phrases().size() == Lexicon::builtin().phrases().size());
  }
}
