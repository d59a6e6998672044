#pragma once

#include <optional>
#include <span>
#include <string>

#include "pragcap/caption_parser.hpp"
#include "pragcap/feature_space.hpp"
#include "pragcap/lexicon.hpp"

namespace pragcap {

/// Whether k counts only truthfully mentioned features (default) or every
/// mentioned feature including falsely described ones.
enum class KConvention { Truthful, AllMentions };

/// Pragmatic scores for one caption against one pair.
///   d : 1 iff at least one contrastive feature is mentioned
///   e : contrastive efficiency; defined only when d = 1
///   r : relevance (propensity to omit redundant features); 1 when z = 6
///   od: 1 iff exactly one contrastive feature is mentioned
struct CaptionEval {
  int c = 0;
  int k = 0;
  int z = 0;
  bool d = false;
  std::optional<double> e;
  double r = 0.0;
  bool od = false;
  int false_features = 0;
};

/// Evaluates from raw counts; throws std::invalid_argument on inconsistent
/// inputs (c > k, c > z, k > 6, z outside [1, 6]).
CaptionEval eval_from_counts(int c, int k, int z, int false_features = 0);

CaptionEval eval_caption(const MentionRecord& mentions, const ContrastProfile& profile,
                         KConvention convention = KConvention::Truthful);

/// Split-level means. e averages over the d = 1 support only (support size
/// kept alongside); listener_accuracy is present only for simulated runs.
struct AggregateReport {
  std::string name;
  std::size_t count = 0;
  double mean_d = 0.0;
  std::optional<double> mean_e;
  std::size_t e_support = 0;
  double mean_r = 0.0;
  double mean_od = 0.0;
  double mean_k = 0.0;
  double mean_false = 0.0;
  std::optional<double> listener_accuracy;
};

/// Arithmetic means over a non-empty eval list; throws std::invalid_argument
/// on an empty one.
AggregateReport aggregate(std::span<const CaptionEval> evals, std::string name);

/// One evaluated caption with everything downstream reports need.
struct EvalItem {
  MentionRecord mentions;
  ContrastProfile profile;
  CaptionEval eval;
};

/// Convenience: parse + profile + score one caption for one pair.
EvalItem evaluate_text(std::string_view text, const ImagePair& pair, const Lexicon& lex,
                       const ParserConfig& config = {},
                       KConvention convention = KConvention::Truthful);

/// Per feature: how often it was truthfully mentioned on pairs where it was
/// non-contrastive. proportion[f] is disengaged when the feature was never
/// non-contrastive in the input.
struct RedundancyProfile {
  std::array<std::optional<double>, kFeatureCount> proportion;
  std::array<std::int64_t, kFeatureCount> mentioned{};
  std::array<std::int64_t, kFeatureCount> occasions{};
};

RedundancyProfile redundancy_profile(std::span<const EvalItem> items,
                                     bool only_imperfect_relevance = false);

}  // namespace pragcap
