#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragcap/feature_space.hpp"
#include "pragcap/violation.hpp"

namespace pragcap {

enum class SplitCategory { OneFeature, TwoFeatures, ThreeFeatures };

std::string_view category_name(SplitCategory c);
std::optional<SplitCategory> category_from_name(std::string_view name);

/// What target and distractor must agree on: either a fixed feature set, or
/// `random_k` features drawn per pair. "At least" semantics: coincidental
/// extra matches are allowed.
struct MatchConstraint {
  std::vector<Feature> features;  // fixed constraint (sorted, distinct)
  int random_k = 0;               // >0 selects the random-k form

  bool is_random() const { return random_k > 0; }
  int size() const { return is_random() ? random_k : static_cast<int>(features.size()); }
};

struct SplitSpec {
  std::string name;
  SplitCategory category = SplitCategory::OneFeature;
  MatchConstraint constraint;
  int pairs_per_set = 7500;
  std::uint64_t seed = 0;
  // Sampling is with replacement across pairs; this flag rejects duplicates.
  bool unique_pairs = false;
};

struct PairSet {
  SplitSpec spec;
  std::vector<ImagePair> pairs;
};

/// Seeded rejection sampler: target uniform over all scenes, distractor
/// uniform over scenes agreeing on the constrained features, identical pairs
/// redrawn. Deterministic per spec. Throws std::invalid_argument on a spec
/// whose constraint size is not 1-3 or mismatches the category.
PairSet build_split(const SplitSpec& spec);

/// The 13-set standard suite: six one-feature sets (one per feature), the
/// three two-subsets of object features plus a random-2 set, and the object,
/// background (wall+floor+orientation), and random-3 sets. Per-set seeds are
/// derived from the master seed by set index.
std::vector<PairSet> standard_suite(std::uint64_t seed, int pairs_per_set = 7500);

/// Empty iff every pair satisfies the constraint, no pair is degenerate, and
/// the set has exactly pairs_per_set entries.
std::vector<Violation> validate_split(const PairSet& set);

}  // namespace pragcap
