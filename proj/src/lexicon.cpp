#include "pragcap/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pragcap/embedded_lexicon.hpp"

namespace pragcap {

using nlohmann::json;

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<int> normalized_values(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

std::string_view caption_kind_name(CaptionKind kind) {
  return kind == CaptionKind::Exhaustive ? "exhaustive" : "short";
}

std::optional<CaptionKind> caption_kind_from_name(std::string_view name) {
  if (name == "exhaustive") return CaptionKind::Exhaustive;
  if (name == "short") return CaptionKind::Short;
  return std::nullopt;
}

std::string_view noun_class_name(NounClass nc) {
  switch (nc) {
    case NounClass::Object: return "object";
    case NounClass::Wall: return "wall";
    case NounClass::Floor: return "floor";
  }
  return "object";
}

namespace {
std::optional<NounClass> noun_class_from_name(std::string_view name) {
  if (name == "object") return NounClass::Object;
  if (name == "wall") return NounClass::Wall;
  if (name == "floor") return NounClass::Floor;
  return std::nullopt;
}
}  // namespace

std::string Phrase::text() const { return join_tokens(tokens); }
std::string HeadNoun::text() const { return join_tokens(tokens); }
std::string TrieEntry::text() const { return join_tokens(tokens); }

std::vector<Feature> Template::slots() const {
  std::vector<Feature> out;
  for (const auto& seg : segments) {
    if (seg.is_slot) out.push_back(seg.feature);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PhraseTrie

PhraseTrie::PhraseTrie() { nodes_.emplace_back(); }

TrieEntry& PhraseTrie::entry_at(const std::vector<std::string>& tokens) {
  int node = 0;
  for (const auto& tok : tokens) {
    auto it = nodes_[node].children.find(tok);
    if (it == nodes_[node].children.end()) {
      nodes_.emplace_back();
      it = nodes_[node].children.emplace(tok, static_cast<int>(nodes_.size()) - 1).first;
    }
    node = it->second;
  }
  if (!nodes_[node].entry) {
    nodes_[node].entry.emplace();
    nodes_[node].entry->tokens = tokens;
  }
  return *nodes_[node].entry;
}

void PhraseTrie::insert(const std::vector<std::string>& tokens,
                        const std::function<void(TrieEntry&)>& fill) {
  fill(entry_at(tokens));
}

std::pair<const TrieEntry*, std::size_t> PhraseTrie::longest_match(
    std::span<const std::string> tokens, std::size_t pos) const {
  int node = 0;
  const TrieEntry* best = nullptr;
  std::size_t best_len = 0;
  for (std::size_t i = pos; i < tokens.size(); ++i) {
    auto it = nodes_[node].children.find(tokens[i]);
    if (it == nodes_[node].children.end()) break;
    node = it->second;
    if (nodes_[node].entry) {
      best = &*nodes_[node].entry;
      best_len = i - pos + 1;
    }
  }
  return {best, best_len};
}

const TrieEntry* PhraseTrie::find(const std::vector<std::string>& tokens) const {
  int node = 0;
  for (const auto& tok : tokens) {
    auto it = nodes_[node].children.find(tok);
    if (it == nodes_[node].children.end()) return nullptr;
    node = it->second;
  }
  return nodes_[node].entry ? &*nodes_[node].entry : nullptr;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<std::string> parse_tokens_field(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw LexiconFormatError(where + ": tokens must be a non-empty array of strings");
  }
  std::vector<std::string> tokens;
  for (const auto& t : j) {
    if (!t.is_string()) {
      throw LexiconFormatError(where + ": tokens must be strings");
    }
    tokens.push_back(t.get<std::string>());
  }
  return tokens;
}

Template parse_template(const json& j, int index) {
  const std::string where = "templates[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("kind") || !j.contains("pattern")) {
    throw LexiconFormatError(where + ": expected {kind, pattern}");
  }
  const auto kind = caption_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) {
    throw LexiconFormatError(where + ": kind must be \"exhaustive\" or \"short\"");
  }
  Template tpl;
  tpl.kind = *kind;
  tpl.pattern = j.at("pattern").get<std::string>();
  std::istringstream words(tpl.pattern);
  std::string word;
  while (words >> word) {
    Template::Segment seg;
    if (word.size() > 2 && word.front() == '{' && word.back() == '}') {
      const auto f = feature_from_name(word.substr(1, word.size() - 2));
      if (!f) {
        throw LexiconFormatError(where + ": unknown slot " + word);
      }
      seg.is_slot = true;
      seg.feature = *f;
    } else {
      seg.literal = word;
    }
    tpl.segments.push_back(std::move(seg));
  }
  if (tpl.segments.empty()) {
    throw LexiconFormatError(where + ": empty pattern");
  }
  return tpl;
}

}  // namespace

Lexicon Lexicon::from_json_text(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw LexiconFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw LexiconFormatError("lexicon document must be a JSON object");
  }
  for (const char* key : {"version", "phrases", "head_nouns", "templates"}) {
    if (!doc.contains(key)) {
      throw LexiconFormatError(std::string("missing top-level key \"") + key + "\"");
    }
  }

  Lexicon lex;
  lex.version_ = doc.at("version").get<std::string>();

  const auto& phrases = doc.at("phrases");
  if (!phrases.is_array()) throw LexiconFormatError("phrases must be an array");
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    const auto& pj = phrases[i];
    const std::string where = "phrases[" + std::to_string(i) + "]";
    if (!pj.is_object() || !pj.contains("tokens") || !pj.contains("feature") ||
        !pj.contains("values")) {
      throw LexiconFormatError(where + ": expected {tokens, feature, values}");
    }
    Phrase p;
    p.tokens = parse_tokens_field(pj.at("tokens"), where);
    const auto f = feature_from_name(pj.at("feature").get<std::string>());
    if (!f) {
      throw LexiconFormatError(where + ": unknown feature \"" +
                               pj.at("feature").get<std::string>() + "\"");
    }
    p.feature = *f;
    if (!pj.at("values").is_array()) {
      throw LexiconFormatError(where + ": values must be an array of integers");
    }
    p.values = normalized_values(pj.at("values").get<std::vector<int>>());
    if (pj.contains("noun_class")) {
      const auto nc = noun_class_from_name(pj.at("noun_class").get<std::string>());
      if (!nc) {
        throw LexiconFormatError(where + ": unknown noun_class");
      }
      p.noun_class = nc;
    }
    lex.phrases_.push_back(std::move(p));
  }

  const auto& nouns = doc.at("head_nouns");
  if (!nouns.is_array()) throw LexiconFormatError("head_nouns must be an array");
  for (std::size_t i = 0; i < nouns.size(); ++i) {
    const auto& nj = nouns[i];
    const std::string where = "head_nouns[" + std::to_string(i) + "]";
    if (!nj.is_object() || !nj.contains("tokens") || !nj.contains("noun_class")) {
      throw LexiconFormatError(where + ": expected {tokens, noun_class}");
    }
    HeadNoun n;
    n.tokens = parse_tokens_field(nj.at("tokens"), where);
    const auto nc = noun_class_from_name(nj.at("noun_class").get<std::string>());
    if (!nc) throw LexiconFormatError(where + ": unknown noun_class");
    if (*nc == NounClass::Object) {
      throw LexiconFormatError(where +
                               ": object head nouns are shape phrases; declare them under "
                               "phrases with noun_class \"object\"");
    }
    n.noun_class = *nc;
    lex.nouns_.push_back(std::move(n));
  }

  const auto& templates = doc.at("templates");
  if (!templates.is_array()) throw LexiconFormatError("templates must be an array");
  for (std::size_t i = 0; i < templates.size(); ++i) {
    lex.templates_.push_back(parse_template(templates[i], static_cast<int>(i)));
  }

  lex.build_indexes();
  return lex;
}

Lexicon Lexicon::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LexiconFormatError("cannot open lexicon file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex = [] {
    Lexicon l = from_json_text(kDefaultLexiconJson);
    const auto violations = validate_lexicon(l);
    if (error_count(violations) != 0) {
      throw LexiconError("embedded default lexicon failed validation", violations);
    }
    return l;
  }();
  return lex;
}

void Lexicon::build_indexes() {
  for (int fi = 0; fi < kFeatureCount; ++fi) {
    by_value_[fi].assign(kCardinalities[fi], {});
  }
  for (std::size_t pi = 0; pi < phrases_.size(); ++pi) {
    const auto& p = phrases_[pi];
    const int fi = feature_index(p.feature);
    for (int v : p.values) {
      if (v >= 0 && v < kCardinalities[fi]) {
        by_value_[fi][v].push_back(static_cast<int>(pi));
      }
    }
    if (is_color_feature(p.feature)) {
      auto& slot = color_index_[p.text()][fi];
      if (!slot) slot.emplace();
      std::vector<int> merged = *slot;
      merged.insert(merged.end(), p.values.begin(), p.values.end());
      *slot = normalized_values(std::move(merged));
    }
  }

  for (const auto& p : phrases_) {
    trie_.insert(p.tokens, [&](TrieEntry& e) {
      if (is_color_feature(p.feature)) {
        e.is_color = true;
        e.color_values[feature_index(p.feature)] = color_index_.at(p.text())[feature_index(p.feature)];
      } else if (!e.is_color && !e.feature) {
        e.feature = p.feature;
        e.values = p.values;
      }
      if (p.noun_class && !e.noun_class) e.noun_class = p.noun_class;
    });
  }
  for (const auto& n : nouns_) {
    trie_.insert(n.tokens, [&](TrieEntry& e) {
      if (!e.noun_class) e.noun_class = n.noun_class;
    });
  }
}

std::vector<const Template*> Lexicon::templates_of(CaptionKind kind) const {
  std::vector<const Template*> out;
  for (const auto& t : templates_) {
    if (t.kind == kind) out.push_back(&t);
  }
  return out;
}

std::vector<const Phrase*> Lexicon::phrases_for(Feature f, int value) const {
  if (value < 0 || value >= cardinality(f)) {
    throw std::out_of_range(std::string(feature_name(f)) + " value " +
                            std::to_string(value) + " out of range [0, " +
                            std::to_string(cardinality(f)) + ")");
  }
  std::vector<const Phrase*> out;
  for (int pi : by_value_[feature_index(f)][value]) {
    out.push_back(&phrases_[pi]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool all_lowercase(const std::string& token) {
  for (unsigned char c : token) {
    if (std::isupper(c)) return false;
  }
  return true;
}

bool has_whitespace(const std::string& token) {
  for (unsigned char c : token) {
    if (std::isspace(c)) return true;
  }
  return false;
}

// contiguous containment of a in b, a strictly shorter
bool contained_in(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() >= b.size()) return false;
  for (std::size_t off = 0; off + a.size() <= b.size(); ++off) {
    if (std::equal(a.begin(), a.end(), b.begin() + off)) return true;
  }
  return false;
}

}  // namespace

std::vector<Violation> validate_lexicon(const Lexicon& lex) {
  std::vector<Violation> out;
  const auto add = [&](std::string code, std::string message, bool note = false) {
    out.push_back({std::move(code), std::move(message), note});
  };

  for (const auto& p : lex.phrases()) {
    for (const auto& tok : p.tokens) {
      if (!all_lowercase(tok)) {
        add("normalization", "phrase token \"" + tok + "\" is not lowercase");
      }
      if (tok.empty() || has_whitespace(tok)) {
        add("token_whitespace", "phrase \"" + p.text() + "\" has an empty or multi-word token");
      }
    }
    if (p.values.empty()) {
      add("empty_denotation", "phrase \"" + p.text() + "\" (" +
                                  std::string(feature_name(p.feature)) +
                                  ") has an empty denotation");
    }
    for (int v : p.values) {
      if (v < 0 || v >= cardinality(p.feature)) {
        add("denotation_range", "phrase \"" + p.text() + "\": value " + std::to_string(v) +
                                    " outside [0, " +
                                    std::to_string(cardinality(p.feature)) + ") for " +
                                    std::string(feature_name(p.feature)));
      }
    }
    if (p.noun_class && *p.noun_class != NounClass::Object) {
      add("noun_class", "phrase \"" + p.text() +
                            "\": wall/floor noun classes belong under head_nouns");
    }
    if (p.noun_class && *p.noun_class == NounClass::Object && p.feature != Feature::Shape) {
      add("noun_class", "phrase \"" + p.text() + "\": object nouns must be shape phrases");
    }
  }
  for (const auto& n : lex.standalone_nouns()) {
    for (const auto& tok : n.tokens) {
      if (!all_lowercase(tok)) {
        add("normalization", "head noun token \"" + tok + "\" is not lowercase");
      }
    }
  }

  // coverage: every (feature, value) needs at least one phrase
  for (Feature f : kFeatures) {
    for (int v = 0; v < cardinality(f); ++v) {
      bool covered = false;
      for (const auto& p : lex.phrases()) {
        if (p.feature == f &&
            std::find(p.values.begin(), p.values.end(), v) != p.values.end()) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        add("coverage", "no phrase covers (" + std::string(feature_name(f)) + ", " +
                            std::to_string(v) + ")");
      }
    }
  }

  // ambiguity and cross-feature reuse
  const auto& phrases = lex.phrases();
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    for (std::size_t j = i + 1; j < phrases.size(); ++j) {
      const auto& a = phrases[i];
      const auto& b = phrases[j];
      if (a.tokens != b.tokens) continue;
      if (a.feature == b.feature) {
        if (a.values != b.values) {
          add("ambiguous_phrase", "phrase \"" + a.text() + "\" has conflicting denotations for " +
                                      std::string(feature_name(a.feature)));
        }
      } else if (!(is_color_feature(a.feature) && is_color_feature(b.feature))) {
        add("cross_feature_phrase", "phrase \"" + a.text() + "\" is used by both " +
                                        std::string(feature_name(a.feature)) + " and " +
                                        std::string(feature_name(b.feature)));
      }
    }
  }
  for (const auto& n : lex.standalone_nouns()) {
    for (const auto& p : phrases) {
      if (n.tokens == p.tokens) {
        add("noun_conflict", "head noun \"" + n.text() + "\" collides with a " +
                                 std::string(feature_name(p.feature)) + " phrase");
      }
    }
  }

  // templates
  int n_exhaustive = 0, n_short = 0;
  for (const auto& t : lex.templates()) {
    auto slots = t.slots();
    std::set<Feature> distinct(slots.begin(), slots.end());
    if (distinct.size() != slots.size()) {
      add("template_arity", "template \"" + t.pattern + "\" repeats a slot");
    }
    if (t.kind == CaptionKind::Exhaustive) {
      ++n_exhaustive;
      if (distinct.size() != kFeatureCount) {
        add("template_arity",
            "exhaustive template \"" + t.pattern + "\" must mention all six features");
      }
    } else {
      ++n_short;
      if (distinct.size() < 2 || distinct.size() > 3) {
        add("template_arity",
            "short template \"" + t.pattern + "\" must mention two or three features");
      }
    }
    for (const auto& seg : t.segments) {
      if (!seg.is_slot && !all_lowercase(seg.literal)) {
        add("normalization", "template literal \"" + seg.literal + "\" is not lowercase");
      }
    }
  }
  if (n_exhaustive == 0) add("no_templates", "lexicon has no exhaustive templates", true);
  if (n_short == 0) add("no_templates", "lexicon has no short templates", true);

  // containment notes for the longest-match rule
  std::set<std::vector<std::string>> seqs;
  for (const auto& p : phrases) seqs.insert(p.tokens);
  for (const auto& n : lex.standalone_nouns()) seqs.insert(n.tokens);
  for (auto it = seqs.begin(); it != seqs.end(); ++it) {
    for (auto jt = seqs.begin(); jt != seqs.end(); ++jt) {
      if (it == jt) continue;
      if (contained_in(*it, *jt)) {
        add("phrase_containment",
            "\"" + join_tokens(*it) + "\" occurs inside \"" + join_tokens(*jt) +
                "\"; longest match prefers the longer phrase",
            true);
      }
    }
  }

  return out;
}

Lexicon load_lexicon(const std::string& path) {
  Lexicon lex = Lexicon::from_file(path);
  auto violations = validate_lexicon(lex);
  if (error_count(violations) != 0) {
    throw LexiconError("lexicon " + path + " failed validation with " +
                           std::to_string(error_count(violations)) + " violation(s)",
                       std::move(violations));
  }
  return lex;
}

}  // namespace pragcap
