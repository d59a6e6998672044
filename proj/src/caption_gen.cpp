#include "pragcap/caption_gen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pragcap/rng.hpp"

namespace pragcap {

namespace {

std::vector<Feature> sorted_slots(const Template& tpl) {
  auto slots = tpl.slots();
  std::sort(slots.begin(), slots.end(),
            [](Feature a, Feature b) { return feature_index(a) < feature_index(b); });
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

}  // namespace

std::vector<Caption> generate_captions(const Label& label, const Lexicon& lex,
                                       CaptionKind kind) {
  std::vector<Caption> out;
  std::set<std::string> seen;
  for (const Template* tpl : lex.templates_of(kind)) {
    // synonym options per slot, in segment order
    std::vector<std::vector<const Phrase*>> options;
    for (const auto& seg : tpl->segments) {
      if (!seg.is_slot) continue;
      auto phrases = lex.phrases_for(seg.feature, label[seg.feature]);
      if (phrases.empty()) {
        throw std::logic_error("lexicon has no phrase for (" +
                               std::string(feature_name(seg.feature)) + ", " +
                               std::to_string(label[seg.feature]) +
                               "); validate the lexicon first");
      }
      options.push_back(std::move(phrases));
    }

    std::vector<std::size_t> choice(options.size(), 0);
    while (true) {
      std::string text;
      std::size_t slot = 0;
      for (const auto& seg : tpl->segments) {
        if (seg.is_slot) {
          for (const auto& tok : options[slot][choice[slot]]->tokens) {
            if (!text.empty()) text += ' ';
            text += tok;
          }
          ++slot;
        } else {
          if (!text.empty()) text += ' ';
          text += seg.literal;
        }
      }
      if (seen.insert(text).second) {
        out.push_back(Caption{std::move(text), kind, sorted_slots(*tpl), label});
      }
      // odometer
      std::size_t i = 0;
      for (; i < choice.size(); ++i) {
        if (++choice[i] < options[i].size()) break;
        choice[i] = 0;
      }
      if (i == choice.size()) break;
    }
  }
  return out;
}

std::vector<Caption> exhaustive_captions(const Label& label, const Lexicon& lex) {
  return generate_captions(label, lex, CaptionKind::Exhaustive);
}

std::vector<Caption> short_captions(const Label& label, const Lexicon& lex) {
  return generate_captions(label, lex, CaptionKind::Short);
}

Caption sample_caption(const Label& label, const Lexicon& lex, CaptionKind kind,
                       std::uint64_t seed) {
  auto captions = generate_captions(label, lex, kind);
  if (captions.empty()) {
    throw std::invalid_argument(std::string("lexicon generates no ") +
                                std::string(caption_kind_name(kind)) + " captions");
  }
  Rng rng(seed);
  return captions[rng.below(captions.size())];
}

std::uint64_t count_for_label(const Lexicon& lex, CaptionKind kind, const Label& label) {
  std::uint64_t total = 0;
  for (const Template* tpl : lex.templates_of(kind)) {
    std::uint64_t product = 1;
    for (Feature f : tpl->slots()) {
      product *= lex.phrases_for(f, label[f]).size();
    }
    total += product;
  }
  return total;
}

CaptionCounts count_captions(const Lexicon& lex, CaptionKind kind) {
  CaptionCounts counts;
  for (const Template* tpl : lex.templates_of(kind)) {
    std::uint64_t min_product = 1, max_product = 1, sum_product = 1;
    std::uint64_t free_product = 1;
    const auto slots = tpl->slots();
    for (Feature f : kFeatures) {
      if (std::find(slots.begin(), slots.end(), f) == slots.end()) {
        free_product *= cardinality(f);
        continue;
      }
      std::uint64_t lo = UINT64_MAX, hi = 0, sum = 0;
      for (int v = 0; v < cardinality(f); ++v) {
        const std::uint64_t n = lex.phrases_for(f, v).size();
        lo = std::min(lo, n);
        hi = std::max(hi, n);
        sum += n;
      }
      min_product *= lo;
      max_product *= hi;
      sum_product *= sum;
    }
    counts.per_image_min += min_product;
    counts.per_image_max += max_product;
    counts.total += sum_product * free_product;
  }
  counts.label_independent = counts.per_image_min == counts.per_image_max;
  return counts;
}

}  // namespace pragcap
