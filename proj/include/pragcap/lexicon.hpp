#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pragcap/feature_space.hpp"
#include "pragcap/violation.hpp"

namespace pragcap {

enum class CaptionKind { Exhaustive, Short };

std::string_view caption_kind_name(CaptionKind kind);
std::optional<CaptionKind> caption_kind_from_name(std::string_view name);

enum class NounClass { Object, Wall, Floor };

std::string_view noun_class_name(NounClass nc);

/// A surface phrase with its denotation: the set of values of one feature the
/// phrase can truthfully describe. Head nouns for the object are ordinary
/// shape phrases with noun_class set.
struct Phrase {
  std::vector<std::string> tokens;
  Feature feature = Feature::FloorColor;
  std::vector<int> values;  // sorted, deduplicated at load
  std::optional<NounClass> noun_class;

  std::string text() const;
};

/// A bare anchoring noun ("wall", "floor") carrying no denotation of its own.
struct HeadNoun {
  std::vector<std::string> tokens;
  NounClass noun_class = NounClass::Wall;

  std::string text() const;
};

/// A sentence frame: literal tokens interleaved with feature slots.
struct Template {
  struct Segment {
    bool is_slot = false;
    Feature feature = Feature::FloorColor;  // when is_slot
    std::string literal;                    // when !is_slot, a single token
  };

  CaptionKind kind = CaptionKind::Short;
  std::string pattern;
  std::vector<Segment> segments;

  std::vector<Feature> slots() const;
};

/// Terminal payload of the phrase matcher. A token sequence maps either to a
/// single non-color phrase, to a hue shared by up to three color features, or
/// to a bare head noun.
struct TrieEntry {
  std::vector<std::string> tokens;
  bool is_color = false;
  std::optional<Feature> feature;  // non-color phrases
  std::vector<int> values;         // non-color phrases
  // Denotations per color feature, indexed by feature_index (floor=0, wall=1,
  // object=2); disengaged when that feature has no phrase with these tokens.
  std::array<std::optional<std::vector<int>>, 3> color_values;
  std::optional<NounClass> noun_class;

  std::string text() const;
};

/// Token trie over the lexicon's phrase inventory; supports the parser's
/// longest-match scan.
class PhraseTrie {
 public:
  PhraseTrie();

  void insert(const std::vector<std::string>& tokens,
              const std::function<void(TrieEntry&)>& fill);

  /// Longest match starting at tokens[pos]; returns the entry and match
  /// length, or {nullptr, 0}.
  std::pair<const TrieEntry*, std::size_t> longest_match(
      std::span<const std::string> tokens, std::size_t pos) const;

  const TrieEntry* find(const std::vector<std::string>& tokens) const;

 private:
  struct Node {
    std::map<std::string, int> children;
    std::optional<TrieEntry> entry;
  };
  std::vector<Node> nodes_;

  TrieEntry& entry_at(const std::vector<std::string>& tokens);
};

struct LexiconFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validation failure surfaced by load_lexicon; carries the full finding list.
class LexiconError : public std::runtime_error {
 public:
  LexiconError(std::string what, std::vector<Violation> violations)
      : std::runtime_error(std::move(what)), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Immutable grammar: phrases with denotations, head nouns, and sentence
/// templates. Construction parses and indexes; validation is separate so
/// callers can inspect findings.
class Lexicon {
 public:
  static Lexicon from_json_text(std::string_view json_text);
  static Lexicon from_file(const std::string& path);

  /// The default grammar embedded in the library (same content as
  /// data/lexicon.json), validated once on first use.
  static const Lexicon& builtin();

  const std::string& version() const { return version_; }
  const std::vector<Phrase>& phrases() const { return phrases_; }
  const std::vector<HeadNoun>& standalone_nouns() const { return nouns_; }
  const std::vector<Template>& templates() const { return templates_; }
  std::vector<const Template*> templates_of(CaptionKind kind) const;

  /// All phrases whose denotation contains the value. Throws std::out_of_range
  /// for a value outside the feature's cardinality.
  std::vector<const Phrase*> phrases_for(Feature f, int value) const;

  const PhraseTrie& trie() const { return trie_; }

  /// Hue sharing across the three color features: token text -> denotation per
  /// color feature (floor, wall, object order), disengaged where unused.
  const std::map<std::string, std::array<std::optional<std::vector<int>>, 3>>&
  color_index() const {
    return color_index_;
  }

 private:
  Lexicon() = default;
  void build_indexes();

  std::string version_;
  std::vector<Phrase> phrases_;
  std::vector<HeadNoun> nouns_;
  std::vector<Template> templates_;

  PhraseTrie trie_;
  std::map<std::string, std::array<std::optional<std::vector<int>>, 3>> color_index_;
  // phrase indices per (feature, value)
  std::array<std::vector<std::vector<int>>, kFeatureCount> by_value_;
};

/// Checks every lexicon invariant. Errors: missing (feature, value) coverage,
/// ambiguous duplicate phrases, cross-feature token reuse outside the color
/// features, out-of-range or empty denotations, non-lowercase tokens,
/// malformed templates. Notes: phrase containment pairs relevant to the
/// longest-match rule, missing template kinds.
std::vector<Violation> validate_lexicon(const Lexicon& lex);

/// from_file + validate_lexicon; throws LexiconError when any error-level
/// violation is present.
Lexicon load_lexicon(const std::string& path);

}  // namespace pragcap
