#include "pragcap/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace pragcap {

CaptionEval eval_from_counts(int c, int k, int z, int false_features) {
  if (z < 1 || z > kFeatureCount) {
    throw std::invalid_argument("z must be in [1, 6], got " + std::to_string(z));
  }
  if (k < 0 || k > kFeatureCount) {
    throw std::invalid_argument("k must be in [0, 6], got " + std::to_string(k));
  }
  if (c < 0 || c > k || c > z) {
    throw std::invalid_argument("inconsistent counts: c=" + std::to_string(c) +
                                ", k=" + std::to_string(k) + ", z=" + std::to_string(z));
  }
  CaptionEval eval;
  eval.c = c;
  eval.k = k;
  eval.z = z;
  eval.false_features = false_features;
  eval.d = c > 0;
  eval.od = c == 1;
  if (eval.d) {
    eval.e = (k == 1 && c == 1)
                 ? 1.0
                 : 1.0 - static_cast<double>(c - 1) / static_cast<double>(k - 1);
  }
  if (z == kFeatureCount) {
    eval.r = 1.0;  // no non-contrastive feature exists to be redundant about
  } else {
    eval.r = 1.0 - static_cast<double>(k - c) / static_cast<double>(kFeatureCount - z);
    eval.r = std::clamp(eval.r, 0.0, 1.0);
  }
  return eval;
}

CaptionEval eval_caption(const MentionRecord& mentions, const ContrastProfile& profile,
                         KConvention convention) {
  int c = 0;
  for (Feature f : kFeatures) {
    if (profile.is_contrastive(f) && mentions.feature_truthful(f)) ++c;
  }
  const int k = convention == KConvention::Truthful ? mentions.truthful_feature_count()
                                                    : mentions.mentioned_feature_count();
  return eval_from_counts(c, k, profile.z, mentions.false_feature_count());
}

AggregateReport aggregate(std::span<const CaptionEval> evals, std::string name) {
  if (evals.empty()) {
    throw std::invalid_argument("cannot aggregate an empty split");
  }
  AggregateReport report;
  report.name = std::move(name);
  report.count = evals.size();
  double sum_e = 0.0;
  for (const auto& ev : evals) {
    report.mean_d += ev.d ? 1.0 : 0.0;
    report.mean_r += ev.r;
    report.mean_od += ev.od ? 1.0 : 0.0;
    report.mean_k += ev.k;
    report.mean_false += ev.false_features;
    if (ev.e) {
      sum_e += *ev.e;
      ++report.e_support;
    }
  }
  const double n = static_cast<double>(evals.size());
  report.mean_d /= n;
  report.mean_r /= n;
  report.mean_od /= n;
  report.mean_k /= n;
  report.mean_false /= n;
  if (report.e_support > 0) {
    report.mean_e = sum_e / static_cast<double>(report.e_support);
  }
  return report;
}

EvalItem evaluate_text(std::string_view text, const ImagePair& pair, const Lexicon& lex,
                       const ParserConfig& config, KConvention convention) {
  EvalItem item{extract_mentions(text, pair.target(), lex, config),
                contrast_profile(pair), CaptionEval{}};
  item.eval = eval_caption(item.mentions, item.profile, convention);
  return item;
}

RedundancyProfile redundancy_profile(std::span<const EvalItem> items,
                                     bool only_imperfect_relevance) {
  RedundancyProfile profile;
  for (const auto& item : items) {
    if (only_imperfect_relevance && item.eval.r >= 1.0) continue;
    for (Feature f : kFeatures) {
      if (item.profile.is_contrastive(f)) continue;
      const int fi = feature_index(f);
      ++profile.occasions[fi];
      if (item.mentions.feature_truthful(f)) ++profile.mentioned[fi];
    }
  }
  for (int fi = 0; fi < kFeatureCount; ++fi) {
    if (profile.occasions[fi] > 0) {
      profile.proportion[fi] = static_cast<double>(profile.mentioned[fi]) /
                               static_cast<double>(profile.occasions[fi]);
    }
  }
  return profile;
}

}  // namespace pragcap
