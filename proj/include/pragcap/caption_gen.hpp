#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pragcap/feature_space.hpp"
#include "pragcap/lexicon.hpp"

namespace pragcap {

/// One rendered caption: lowercase tokens joined by single spaces, no trailing
/// punctuation.
struct Caption {
  std::string text;
  CaptionKind kind = CaptionKind::Short;
  std::vector<Feature> mentioned;  // canonical feature order
  Label source;
};

/// Every instantiation of the lexicon's templates of the given kind for this
/// scene: full cross-product of templates and per-slot synonym choices.
/// Deterministic order (template order, then slot choices); entries distinct.
std::vector<Caption> generate_captions(const Label& label, const Lexicon& lex,
                                       CaptionKind kind);

std::vector<Caption> exhaustive_captions(const Label& label, const Lexicon& lex);
std::vector<Caption> short_captions(const Label& label, const Lexicon& lex);

/// Uniform draw from generate_captions(label, lex, kind); deterministic per
/// seed.
Caption sample_caption(const Label& label, const Lexicon& lex, CaptionKind kind,
                       std::uint64_t seed);

/// Analytic caption count for one scene (sum over templates of the per-slot
/// synonym product).
std::uint64_t count_for_label(const Lexicon& lex, CaptionKind kind, const Label& label);

struct CaptionCounts {
  std::uint64_t per_image_min = 0;
  std::uint64_t per_image_max = 0;
  std::uint64_t total = 0;  // summed over all 480,000 scenes
  bool label_independent = false;
};

/// Analytic corpus-level counts for the given kind.
CaptionCounts count_captions(const Lexicon& lex, CaptionKind kind);

}  // namespace pragcap
