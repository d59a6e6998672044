#include "pragcap/agents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "pragcap/parallel.hpp"
#include "pragcap/rng.hpp"

namespace pragcap {

std::string_view speaker_kind_name(SpeakerKind k) {
  switch (k) {
    case SpeakerKind::Exhaustive: return "exhaustive";
    case SpeakerKind::OracleMinimal: return "oracle-minimal";
    case SpeakerKind::Biased: return "biased";
    case SpeakerKind::Rsa: return "rsa";
  }
  return "exhaustive";
}

std::optional<SpeakerKind> speaker_kind_from_name(std::string_view name) {
  if (name == "exhaustive") return SpeakerKind::Exhaustive;
  if (name == "oracle-minimal") return SpeakerKind::OracleMinimal;
  if (name == "biased") return SpeakerKind::Biased;
  if (name == "rsa") return SpeakerKind::Rsa;
  return std::nullopt;
}

std::string_view listener_kind_name(ListenerKind k) {
  return k == ListenerKind::L0 ? "l0" : "l1";
}

std::optional<ListenerKind> listener_kind_from_name(std::string_view name) {
  if (name == "l0") return ListenerKind::L0;
  if (name == "l1") return ListenerKind::L1;
  return std::nullopt;
}

namespace {

const Phrase& first_phrase(const Lexicon& lex, Feature f, int value) {
  auto phrases = lex.phrases_for(f, value);
  if (phrases.empty()) {
    throw std::logic_error("no phrase for (" + std::string(feature_name(f)) + ", " +
                           std::to_string(value) + ")");
  }
  return *phrases.front();
}

/// Whether the target's hue for `f` is carried by exactly one of its three
/// color features, so the bare hue word resolves without a noun.
bool hue_unique_for(const Label& target, const Lexicon& lex, Feature f) {
  const std::string hue = first_phrase(lex, f, target[f]).text();
  const auto it = lex.color_index().find(hue);
  if (it == lex.color_index().end()) return false;
  int carriers = 0;
  for (int fi = 0; fi < 3; ++fi) {
    const auto& values = it->second[fi];
    if (!values) continue;
    const Feature cf = static_cast<Feature>(fi);
    if (std::find(values->begin(), values->end(), target[cf]) != values->end()) ++carriers;
  }
  return carriers == 1;
}

void append_tokens(std::string& text, const std::string& piece) {
  if (!text.empty()) text += ' ';
  text += piece;
}

/// Renders a caption mentioning exactly the requested features of the target,
/// in a fixed order the parser recovers. A non-unique object hue forces the
/// shape noun, which adds a shape mention; the returned caption's mentioned
/// list reflects that.
Caption render_mention_set(const Label& target, const std::array<bool, kFeatureCount>& want,
                           const Lexicon& lex) {
  std::array<bool, kFeatureCount> actual = want;
  std::string text;

  const bool wants_scale = want[feature_index(Feature::Scale)];
  const bool wants_object_color = want[feature_index(Feature::ObjectColor)];
  bool wants_shape = want[feature_index(Feature::Shape)];
  if (wants_object_color && !wants_shape && !hue_unique_for(target, lex, Feature::ObjectColor)) {
    wants_shape = true;  // bare hue would not resolve; anchor it
    actual[feature_index(Feature::Shape)] = true;
  }

  if (wants_scale || wants_object_color || wants_shape) {
    append_tokens(text, "a");
    if (wants_scale) {
      append_tokens(text, first_phrase(lex, Feature::Scale, target[Feature::Scale]).text());
    }
    if (wants_object_color) {
      append_tokens(text,
                    first_phrase(lex, Feature::ObjectColor, target[Feature::ObjectColor]).text());
    }
    if (wants_shape) {
      append_tokens(text, first_phrase(lex, Feature::Shape, target[Feature::Shape]).text());
    } else {
      append_tokens(text, "one");
    }
  }
  if (want[feature_index(Feature::Orientation)]) {
    append_tokens(text,
                  first_phrase(lex, Feature::Orientation, target[Feature::Orientation]).text());
  }
  if (want[feature_index(Feature::WallColor)]) {
    append_tokens(text, "in front of a");
    append_tokens(text, first_phrase(lex, Feature::WallColor, target[Feature::WallColor]).text());
    append_tokens(text, "wall");
  }
  if (want[feature_index(Feature::FloorColor)]) {
    append_tokens(text, "on");
    append_tokens(text, first_phrase(lex, Feature::FloorColor, target[Feature::FloorColor]).text());
    append_tokens(text, "floor");
  }

  std::vector<Feature> mentioned;
  for (Feature f : kFeatures) {
    if (actual[feature_index(f)]) mentioned.push_back(f);
  }
  return Caption{std::move(text), CaptionKind::Short, std::move(mentioned), target};
}

Caption render_single(const Label& target, Feature f, const Lexicon& lex) {
  std::array<bool, kFeatureCount> want{};
  want[feature_index(f)] = true;
  return render_mention_set(target, want, lex);
}

Caption oracle_caption(const ImagePair& pair, const Lexicon& lex,
                       const std::vector<Feature>& preference) {
  const auto profile = contrast_profile(pair);
  // First pass: contrastive features expressible with a single mention.
  for (Feature f : preference) {
    if (!profile.is_contrastive(f)) continue;
    if (f == Feature::ObjectColor && !hue_unique_for(pair.target(), lex, f)) continue;
    return render_single(pair.target(), f, lex);
  }
  // Only a non-unique object hue remains; the render anchors it with the
  // (necessarily non-contrastive) shape noun.
  for (Feature f : preference) {
    if (profile.is_contrastive(f)) {
      return render_single(pair.target(), f, lex);
    }
  }
  throw std::logic_error("pair with no contrastive feature");
}

}  // namespace

std::vector<Caption> minimal_utterances(const Label& target, const Lexicon& lex) {
  std::vector<Caption> out;
  for (Feature f : kFeatures) {
    if (f == Feature::ObjectColor && !hue_unique_for(target, lex, f)) continue;
    out.push_back(render_single(target, f, lex));
  }
  return out;
}

namespace {

// Consistency score of a caption with one image: truthfully mentioned
// features, plus hue words that stay unresolved for this image but are true of
// at least one of its color features. Without the second term an unresolvable
// shared hue would look like evidence against the image even though the image
// carries it.
int l0_consistency(std::span<const PhraseOccurrence> occurrences, const Label& image,
                   const Lexicon& lex, const ParserConfig& config) {
  const auto bindings = resolve_colors(occurrences, image, lex, config);
  std::array<bool, kFeatureCount> truthful{};
  for (const auto& occ : occurrences) {
    if (occ.entry->is_color || !occ.entry->feature) continue;
    const Feature f = *occ.entry->feature;
    if (std::find(occ.entry->values.begin(), occ.entry->values.end(), image[f]) !=
        occ.entry->values.end()) {
      truthful[feature_index(f)] = true;
    }
  }
  std::set<std::string> charitable;
  for (const auto& binding : bindings) {
    if (binding.feature) {
      if (binding.truthful) truthful[feature_index(*binding.feature)] = true;
      continue;
    }
    for (const auto& occ : occurrences) {
      if (occ.begin != binding.begin || !occ.entry->is_color) continue;
      for (int fi = 0; fi < 3; ++fi) {
        const auto& values = occ.entry->color_values[fi];
        if (!values) continue;
        const Feature f = static_cast<Feature>(fi);
        if (std::find(values->begin(), values->end(), image[f]) != values->end()) {
          charitable.insert(binding.text);
        }
      }
    }
  }
  int score = static_cast<int>(charitable.size());
  for (bool t : truthful) score += t ? 1 : 0;
  return score;
}

}  // namespace

std::array<double, 2> l0_posterior(std::string_view text, const ImagePair& pair,
                                   const Lexicon& lex, const ParserConfig& config) {
  const auto tokens = tokenize(text);
  const auto occurrences = match_phrases(tokens, lex);
  const double st = l0_consistency(occurrences, pair.target(), lex, config);
  const double sd = l0_consistency(occurrences, pair.distractor(), lex, config);
  if (st + sd == 0.0) return {0.5, 0.5};
  return {st / (st + sd), sd / (st + sd)};
}

std::vector<WeightedUtterance> rsa_distribution(const SpeakerConfig& speaker,
                                                const ImagePair& pair, const Lexicon& lex) {
  std::vector<Caption> family;
  if (speaker.family.minimal) {
    auto minimal = minimal_utterances(pair.target(), lex);
    family.insert(family.end(), minimal.begin(), minimal.end());
  }
  if (speaker.family.short_captions) {
    auto shorts = short_captions(pair.target(), lex);
    family.insert(family.end(), shorts.begin(), shorts.end());
  }
  if (speaker.family.exhaustive) {
    auto exhaustive = exhaustive_captions(pair.target(), lex);
    family.insert(family.end(), exhaustive.begin(), exhaustive.end());
  }
  if (family.empty()) {
    throw std::invalid_argument("empty utterance family");
  }

  std::vector<WeightedUtterance> out;
  out.reserve(family.size());
  double total = 0.0;
  for (auto& caption : family) {
    const double p = l0_posterior(caption.text, pair, lex)[0];
    double cost = 0.0;
    for (Feature f : caption.mentioned) cost += speaker.feature_cost[feature_index(f)];
    const double weight = p > 0.0 ? std::exp(speaker.alpha * std::log(p) - cost) : 0.0;
    total += weight;
    WeightedUtterance wu{std::move(caption), weight, CaptionEval{}};
    wu.eval = evaluate_text(wu.caption.text, pair, lex).eval;
    out.push_back(std::move(wu));
  }
  if (total <= 0.0) {
    // degenerate: fall back to uniform
    for (auto& wu : out) wu.prob = 1.0 / static_cast<double>(out.size());
    return out;
  }
  for (auto& wu : out) wu.prob /= total;
  return out;
}

Caption speak(const SpeakerConfig& speaker, const ImagePair& pair, const Lexicon& lex,
              std::uint64_t seed) {
  switch (speaker.kind) {
    case SpeakerKind::Exhaustive:
      return sample_caption(pair.target(), lex, CaptionKind::Exhaustive, seed);
    case SpeakerKind::OracleMinimal:
      return oracle_caption(pair, lex, speaker.preference);
    case SpeakerKind::Biased: {
      const Caption base = oracle_caption(pair, lex, speaker.preference);
      const auto profile = contrast_profile(pair);
      std::array<bool, kFeatureCount> want{};
      for (Feature f : base.mentioned) want[feature_index(f)] = true;
      Rng rng(seed);
      for (Feature f : kFeatures) {
        const int fi = feature_index(f);
        if (want[fi] || profile.is_contrastive(f)) continue;
        if (rng.bernoulli(speaker.redundancy[fi])) want[fi] = true;
      }
      return render_mention_set(pair.target(), want, lex);
    }
    case SpeakerKind::Rsa: {
      const auto dist = rsa_distribution(speaker, pair, lex);
      Rng rng(seed);
      const double u = rng.unit();
      double acc = 0.0;
      for (const auto& wu : dist) {
        acc += wu.prob;
        if (u < acc) return wu.caption;
      }
      return dist.back().caption;
    }
  }
  throw std::logic_error("unknown speaker kind");
}

std::array<double, 2> listener_posterior(const ListenerConfig& listener,
                                         std::string_view text, const ImagePair& pair,
                                         const Lexicon& lex) {
  const auto config = listener_parser_config(listener.color_noun_window);
  if (listener.kind == ListenerKind::L0) {
    return l0_posterior(text, pair, lex, config);
  }
  // L1: posterior over images proportional to the assumed speaker's
  // probability of producing exactly this caption for each image as target.
  const auto tokens = tokenize(text);
  std::string normalized;
  for (const auto& t : tokens) {
    if (!normalized.empty()) normalized += ' ';
    normalized += t;
  }
  const auto speaker_prob = [&](const ImagePair& oriented) {
    double p = 0.0;
    for (const auto& wu : rsa_distribution(listener.assumed, oriented, lex)) {
      if (wu.caption.text == normalized) p += wu.prob;
    }
    return p;
  };
  const double pt = speaker_prob(pair);
  const double pd = speaker_prob(pair.swapped());
  if (pt + pd <= 0.0) return {0.5, 0.5};
  return {pt / (pt + pd), pd / (pt + pd)};
}

namespace {

GameResult finish_game(const ImagePair& pair, Caption caption,
                       const ListenerConfig& listener, const Lexicon& lex,
                       std::uint64_t seed, KConvention convention) {
  const auto posterior = listener_posterior(listener, caption.text, pair, lex);
  Rng rng(derive_seed(seed, 0x6c697374u));
  int guess;
  if (listener.sample) {
    guess = rng.unit() < posterior[0] ? 0 : 1;
  } else if (posterior[0] == posterior[1]) {
    guess = rng.unit() < 0.5 ? 0 : 1;  // seeded uniform tie-break
  } else {
    guess = posterior[0] > posterior[1] ? 0 : 1;
  }
  EvalItem item = evaluate_text(caption.text, pair, lex, ParserConfig{}, convention);
  return GameResult{std::move(caption), guess, guess == 0 ? 1 : -1,
                    std::move(item.mentions), item.profile, item.eval};
}

}  // namespace

GameResult play_game(const ImagePair& pair, const SpeakerConfig& speaker,
                     const ListenerConfig& listener, const Lexicon& lex, std::uint64_t seed,
                     KConvention convention) {
  Caption caption = speak(speaker, pair, lex, derive_seed(seed, 0x7370656bu));
  return finish_game(pair, std::move(caption), listener, lex, seed, convention);
}

GameResult play_game_with_caption(const ImagePair& pair, std::string caption_text,
                                  const ListenerConfig& listener, const Lexicon& lex,
                                  std::uint64_t seed, KConvention convention) {
  Caption caption{std::move(caption_text), CaptionKind::Short, {}, pair.target()};
  return finish_game(pair, std::move(caption), listener, lex, seed, convention);
}

std::vector<SetReport> rollup_categories(const std::vector<SetReport>& sets) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const SetReport*>> grouped;
  for (const auto& set : sets) {
    if (!grouped.count(set.category)) order.push_back(set.category);
    grouped[set.category].push_back(&set);
  }
  std::vector<SetReport> out;
  for (const auto& category : order) {
    const auto& members = grouped[category];
    SetReport rolled;
    rolled.name = category;
    rolled.category = category;
    rolled.agg.name = category;
    double sum_e = 0.0, sum_acc = 0.0;
    std::size_t n_e = 0, n_acc = 0;
    for (const auto* set : members) {
      rolled.agg.count += set->agg.count;
      rolled.agg.mean_d += set->agg.mean_d;
      rolled.agg.mean_r += set->agg.mean_r;
      rolled.agg.mean_od += set->agg.mean_od;
      rolled.agg.mean_k += set->agg.mean_k;
      rolled.agg.mean_false += set->agg.mean_false;
      rolled.agg.e_support += set->agg.e_support;
      if (set->agg.mean_e) {
        sum_e += *set->agg.mean_e;
        ++n_e;
      }
      if (set->agg.listener_accuracy) {
        sum_acc += *set->agg.listener_accuracy;
        ++n_acc;
      }
      for (int fi = 0; fi < kFeatureCount; ++fi) {
        rolled.redundancy.mentioned[fi] += set->redundancy.mentioned[fi];
        rolled.redundancy.occasions[fi] += set->redundancy.occasions[fi];
      }
    }
    const double n = static_cast<double>(members.size());
    rolled.agg.mean_d /= n;
    rolled.agg.mean_r /= n;
    rolled.agg.mean_od /= n;
    rolled.agg.mean_k /= n;
    rolled.agg.mean_false /= n;
    if (n_e > 0) rolled.agg.mean_e = sum_e / static_cast<double>(n_e);
    if (n_acc > 0) rolled.agg.listener_accuracy = sum_acc / static_cast<double>(n_acc);
    for (int fi = 0; fi < kFeatureCount; ++fi) {
      if (rolled.redundancy.occasions[fi] > 0) {
        rolled.redundancy.proportion[fi] =
            static_cast<double>(rolled.redundancy.mentioned[fi]) /
            static_cast<double>(rolled.redundancy.occasions[fi]);
      }
    }
    out.push_back(std::move(rolled));
  }
  return out;
}

BenchmarkReport run_benchmark(const SpeakerConfig& speaker, const ListenerConfig& listener,
                              const std::vector<PairSet>& suite, const Lexicon& lex,
                              std::uint64_t seed, int workers, KConvention convention,
                              std::vector<LoggedGame>* game_log) {
  if (suite.empty()) {
    throw std::invalid_argument("empty suite");
  }
  BenchmarkReport report;
  for (std::size_t si = 0; si < suite.size(); ++si) {
    const auto& set = suite[si];
    std::vector<GameResult> games(set.pairs.size());
    parallel_for(set.pairs.size(), workers, [&](std::size_t i) {
      games[i] = play_game(set.pairs[i], speaker, listener, lex,
                           derive_seed(seed, si, i), convention);
    });

    std::vector<CaptionEval> evals;
    std::vector<EvalItem> items;
    evals.reserve(games.size());
    items.reserve(games.size());
    std::size_t correct = 0;
    for (const auto& game : games) {
      evals.push_back(game.eval);
      items.push_back(EvalItem{game.mentions, game.profile, game.eval});
      if (game.reward > 0) ++correct;
    }
    SetReport set_report;
    set_report.name = set.spec.name;
    set_report.category = std::string(category_name(set.spec.category));
    set_report.agg = aggregate(evals, set.spec.name);
    set_report.agg.listener_accuracy =
        static_cast<double>(correct) / static_cast<double>(games.size());
    set_report.redundancy = redundancy_profile(items);
    report.sets.push_back(std::move(set_report));

    if (game_log) {
      for (std::size_t i = 0; i < games.size(); ++i) {
        game_log->push_back(LoggedGame{set.spec.name, i, std::move(games[i])});
      }
    }
  }
  report.categories = rollup_categories(report.sets);
  return report;
}

}  // namespace pragcap
