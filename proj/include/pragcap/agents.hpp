#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragcap/caption_gen.hpp"
#include "pragcap/caption_parser.hpp"
#include "pragcap/feature_space.hpp"
#include "pragcap/lexicon.hpp"
#include "pragcap/metrics.hpp"
#include "pragcap/splits.hpp"

namespace pragcap {

enum class SpeakerKind { Exhaustive, OracleMinimal, Biased, Rsa };

std::string_view speaker_kind_name(SpeakerKind k);
std::optional<SpeakerKind> speaker_kind_from_name(std::string_view name);

/// Which utterances an RSA speaker scores over. Minimal = one single-feature
/// utterance per expressible feature of the target (at most six).
struct UtteranceFamily {
  bool minimal = false;
  bool short_captions = true;
  bool exhaustive = false;
};

struct SpeakerConfig {
  SpeakerConfig() = default;
  explicit SpeakerConfig(SpeakerKind k) : kind(k) {}

  SpeakerKind kind = SpeakerKind::Exhaustive;

  // Biased: per-feature probability of redundantly mentioning a
  // non-contrastive feature, and the order in which the oracle part prefers
  // contrastive features.
  std::array<double, kFeatureCount> redundancy{};
  std::vector<Feature> preference{kFeatures.begin(), kFeatures.end()};

  // Rsa
  double alpha = 1.0;
  std::array<double, kFeatureCount> feature_cost{};
  UtteranceFamily family;
};

/// Parser settings used by listeners: anchor nouns take precedence so a color
/// with an explicit noun resolves to the same feature on both images.
inline ParserConfig listener_parser_config(int color_noun_window = 3) {
  return ParserConfig{color_noun_window, ColorPrecedence::NounFirst};
}

/// Produces the policy's caption for the pair's target. Deterministic per
/// seed; Exhaustive and OracleMinimal ignore randomness except synonym or
/// sample choice.
Caption speak(const SpeakerConfig& speaker, const ImagePair& pair, const Lexicon& lex,
              std::uint64_t seed);

/// Literal listener: parses the caption against both images, scores each by
/// its count of truthfully mentioned features (an unresolvable hue word that
/// is true of some color feature of an image also counts as consistent with
/// it), and normalizes; an all-zero score yields the uniform distribution.
/// Index 0 is the target.
std::array<double, 2> l0_posterior(std::string_view text, const ImagePair& pair,
                                   const Lexicon& lex,
                                   const ParserConfig& config = listener_parser_config());

/// One utterance with its exact probability under the RSA speaker.
struct WeightedUtterance {
  Caption caption;
  double prob = 0.0;
  CaptionEval eval;
};

/// Exact enumeration of S1(u | target) over the configured utterance family:
/// weight(u) = exp(alpha * log L0(target | u) - cost(u)). alpha = 0 with zero
/// costs is the literal speaker S0, uniform over the family.
std::vector<WeightedUtterance> rsa_distribution(const SpeakerConfig& speaker,
                                                const ImagePair& pair, const Lexicon& lex);

/// The single-feature utterances of the target used by the minimal family and
/// the oracle speaker. Object color is omitted when its bare hue would not
/// resolve (non-unique hue); at most one entry per feature.
std::vector<Caption> minimal_utterances(const Label& target, const Lexicon& lex);

enum class ListenerKind { L0, L1 };

std::string_view listener_kind_name(ListenerKind k);
std::optional<ListenerKind> listener_kind_from_name(std::string_view name);

struct ListenerConfig {
  ListenerKind kind = ListenerKind::L0;
  bool sample = false;  // default: argmax with seeded uniform tie-break
  int color_noun_window = 3;
  // L1: parameters of the speaker the listener assumes.
  SpeakerConfig assumed{SpeakerKind::Rsa};
};

std::array<double, 2> listener_posterior(const ListenerConfig& listener,
                                         std::string_view text, const ImagePair& pair,
                                         const Lexicon& lex);

struct GameResult {
  Caption caption;
  int guess = 0;   // 0 = target, 1 = distractor
  int reward = 0;  // +1 correct, -1 otherwise
  MentionRecord mentions;
  ContrastProfile profile;
  CaptionEval eval;
};

GameResult play_game(const ImagePair& pair, const SpeakerConfig& speaker,
                     const ListenerConfig& listener, const Lexicon& lex,
                     std::uint64_t seed, KConvention convention = KConvention::Truthful);

/// Scores an externally produced caption in the same game harness.
GameResult play_game_with_caption(const ImagePair& pair, std::string caption_text,
                                  const ListenerConfig& listener, const Lexicon& lex,
                                  std::uint64_t seed,
                                  KConvention convention = KConvention::Truthful);

struct SetReport {
  std::string name;
  std::string category;
  AggregateReport agg;
  RedundancyProfile redundancy;
  std::vector<std::int64_t> uncovered;  // offline evaluation only
};

struct BenchmarkReport {
  std::vector<SetReport> sets;
  // One rollup per category: metric means averaged across the category's
  // sets, redundancy counts pooled.
  std::vector<SetReport> categories;
};

struct LoggedGame {
  std::string set;
  std::size_t pair_index = 0;
  GameResult game;
};

/// Full suite simulation. Per-game seeds derive from (seed, set index, pair
/// index), so results are independent of worker count.
BenchmarkReport run_benchmark(const SpeakerConfig& speaker, const ListenerConfig& listener,
                              const std::vector<PairSet>& suite, const Lexicon& lex,
                              std::uint64_t seed, int workers = 1,
                              KConvention convention = KConvention::Truthful,
                              std::vector<LoggedGame>* game_log = nullptr);

/// Category rollup used by both simulation and offline evaluation.
std::vector<SetReport> rollup_categories(const std::vector<SetReport>& sets);

}  // namespace pragcap
