#include "pragcap/caption_parser.hpp"

#include <algorithm>
#include <cctype>

namespace pragcap {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<PhraseOccurrence> match_phrases(std::span<const std::string> tokens,
                                            const Lexicon& lex) {
  std::vector<PhraseOccurrence> out;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    const auto [entry, len] = lex.trie().longest_match(tokens, pos);
    if (entry) {
      out.push_back({pos, pos + len, entry});
      pos += len;
    } else {
      ++pos;
    }
  }
  return out;
}

namespace {

Feature color_feature_of(NounClass nc) {
  switch (nc) {
    case NounClass::Object: return Feature::ObjectColor;
    case NounClass::Wall: return Feature::WallColor;
    case NounClass::Floor: return Feature::FloorColor;
  }
  return Feature::ObjectColor;
}

// The nearest head noun starting within the forward window, if any.
const TrieEntry* noun_in_window(std::span<const PhraseOccurrence> occurrences,
                                std::size_t from, int window) {
  const TrieEntry* best = nullptr;
  std::size_t best_begin = 0;
  for (const auto& occ : occurrences) {
    if (!occ.entry->noun_class) continue;
    if (occ.begin < from || occ.begin >= from + static_cast<std::size_t>(window)) continue;
    if (!best || occ.begin < best_begin) {
      best = occ.entry;
      best_begin = occ.begin;
    }
  }
  return best;
}

struct Resolution {
  std::optional<Feature> feature;
  ColorRule rule = ColorRule::Unresolved;
  bool truthful = false;
};

Resolution resolve_by_uniqueness(const TrieEntry& entry, const Label& target) {
  std::optional<Feature> carrier;
  int carriers = 0;
  for (int fi = 0; fi < 3; ++fi) {
    const auto& values = entry.color_values[fi];
    if (!values) continue;
    const Feature f = static_cast<Feature>(fi);
    if (std::find(values->begin(), values->end(), target[f]) != values->end()) {
      ++carriers;
      carrier = f;
    }
  }
  if (carriers == 1) return {carrier, ColorRule::UniqueColor, true};
  return {};
}

Resolution resolve_by_noun(const TrieEntry& entry, const Label& target,
                           std::span<const PhraseOccurrence> occurrences, std::size_t end,
                           int window) {
  const TrieEntry* noun = noun_in_window(occurrences, end, window);
  if (!noun) return {};
  const Feature f = color_feature_of(*noun->noun_class);
  const auto& values = entry.color_values[feature_index(f)];
  if (!values) return {};  // hue not lexicalized for that color feature
  const bool truthful =
      std::find(values->begin(), values->end(), target[f]) != values->end();
  return {f, ColorRule::HeadNounWindow, truthful};
}

}  // namespace

std::vector<ColorBinding> resolve_colors(std::span<const PhraseOccurrence> occurrences,
                                         const Label& target, const Lexicon& lex,
                                         const ParserConfig& config) {
  (void)lex;
  std::vector<ColorBinding> out;
  for (const auto& occ : occurrences) {
    if (!occ.entry->is_color) continue;
    Resolution res;
    if (config.precedence == ColorPrecedence::UniqueFirst) {
      res = resolve_by_uniqueness(*occ.entry, target);
      if (!res.feature) {
        res = resolve_by_noun(*occ.entry, target, occurrences, occ.end,
                              config.color_noun_window);
      }
    } else {
      res = resolve_by_noun(*occ.entry, target, occurrences, occ.end,
                            config.color_noun_window);
      if (!res.feature) {
        res = resolve_by_uniqueness(*occ.entry, target);
      }
    }
    std::vector<int> values;
    if (res.feature) {
      values = *occ.entry->color_values[feature_index(*res.feature)];
    }
    out.push_back({occ.begin, occ.end, occ.entry->text(), res.feature, res.rule,
                   res.truthful, std::move(values)});
  }
  return out;
}

bool MentionRecord::feature_mentioned(Feature f) const {
  return !mentions[feature_index(f)].empty();
}

bool MentionRecord::feature_truthful(Feature f) const {
  for (const auto& m : mentions[feature_index(f)]) {
    if (m.truthful) return true;
  }
  return false;
}

int MentionRecord::truthful_feature_count() const {
  int k = 0;
  for (Feature f : kFeatures) k += feature_truthful(f) ? 1 : 0;
  return k;
}

int MentionRecord::mentioned_feature_count() const {
  int k = 0;
  for (Feature f : kFeatures) k += feature_mentioned(f) ? 1 : 0;
  return k;
}

int MentionRecord::false_feature_count() const {
  int n = 0;
  for (Feature f : kFeatures) {
    n += (feature_mentioned(f) && !feature_truthful(f)) ? 1 : 0;
  }
  return n;
}

std::vector<Feature> MentionRecord::truthful_features() const {
  std::vector<Feature> out;
  for (Feature f : kFeatures) {
    if (feature_truthful(f)) out.push_back(f);
  }
  return out;
}

namespace {

void add_mention(MentionRecord& record, Feature f, const std::vector<int>& values,
                 bool truthful) {
  auto& list = record.mentions[feature_index(f)];
  for (const auto& m : list) {
    if (m.values == values) return;  // duplicate mention of the same denotation
  }
  list.push_back({values, truthful});
}

}  // namespace

MentionRecord extract_mentions(std::string_view text, const Label& target,
                               const Lexicon& lex, const ParserConfig& config) {
  const auto tokens = tokenize(text);
  const auto occurrences = match_phrases(tokens, lex);
  const auto bindings = resolve_colors(occurrences, target, lex, config);

  MentionRecord record;
  for (const auto& occ : occurrences) {
    if (occ.entry->is_color || !occ.entry->feature) continue;
    const Feature f = *occ.entry->feature;
    const bool truthful = std::find(occ.entry->values.begin(), occ.entry->values.end(),
                                    target[f]) != occ.entry->values.end();
    add_mention(record, f, occ.entry->values, truthful);
  }
  for (const auto& binding : bindings) {
    if (!binding.feature) {
      ++record.unresolved_colors;
      continue;
    }
    add_mention(record, *binding.feature, binding.values, binding.truthful);
  }
  return record;
}

}  // namespace pragcap
