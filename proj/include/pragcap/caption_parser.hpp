#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pragcap/feature_space.hpp"
#include "pragcap/lexicon.hpp"

namespace pragcap {

/// Lowercases and splits on whitespace and punctuation. Total: any input
/// yields a (possibly empty) token list.
std::vector<std::string> tokenize(std::string_view text);

enum class ColorRule { UniqueColor, HeadNounWindow, Unresolved };

/// Which rule is consulted first when a color phrase could be resolved both by
/// hue uniqueness and by a nearby head noun. Caption evaluation uses
/// UniqueFirst; the literal listener resolves NounFirst so that an explicit
/// anchor noun wins over a coincidental unique hue on the other image.
enum class ColorPrecedence { UniqueFirst, NounFirst };

struct ParserConfig {
  int color_noun_window = 3;  // tokens after a color phrase scanned for a noun
  ColorPrecedence precedence = ColorPrecedence::UniqueFirst;
};

/// A matched phrase occurrence over a token span [begin, end).
struct PhraseOccurrence {
  std::size_t begin = 0;
  std::size_t end = 0;
  const TrieEntry* entry = nullptr;
};

/// Longest-match left-to-right scan; each token is consumed by at most one
/// occurrence.
std::vector<PhraseOccurrence> match_phrases(std::span<const std::string> tokens,
                                            const Lexicon& lex);

struct ColorBinding {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string text;
  std::optional<Feature> feature;  // engaged iff resolved
  ColorRule rule = ColorRule::Unresolved;
  bool truthful = false;           // meaningful only when resolved
  std::vector<int> values;         // denotation for the bound feature
};

/// Assigns each color occurrence to floor/wall/object color (or leaves it
/// unresolved). A hue carried by exactly one of the target's color features
/// binds there; otherwise a head noun of the right class within the forward
/// window decides.
std::vector<ColorBinding> resolve_colors(std::span<const PhraseOccurrence> occurrences,
                                         const Label& target, const Lexicon& lex,
                                         const ParserConfig& config = {});

struct FeatureMention {
  std::vector<int> values;
  bool truthful = false;
};

/// Per-feature mentions extracted from one caption, classified against a
/// target scene. Duplicate mentions of one feature with the same denotation
/// collapse into a single entry.
struct MentionRecord {
  std::array<std::vector<FeatureMention>, kFeatureCount> mentions;
  int unresolved_colors = 0;  // reported separately; never counted below

  bool feature_mentioned(Feature f) const;
  bool feature_truthful(Feature f) const;

  /// Features with at least one truthful mention (the default k).
  int truthful_feature_count() const;
  /// Features with any mention at all (the alternative k convention).
  int mentioned_feature_count() const;
  /// Features with at least one false mention and no truthful one.
  int false_feature_count() const;

  std::vector<Feature> truthful_features() const;
};

/// Full pipeline: tokenize, match, resolve colors, classify. Never throws on
/// caption content.
MentionRecord extract_mentions(std::string_view text, const Label& target,
                               const Lexicon& lex, const ParserConfig& config = {});

}  // namespace pragcap
