#include "pragcap/splits.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pragcap/rng.hpp"

namespace pragcap {

std::string_view category_name(SplitCategory c) {
  switch (c) {
    case SplitCategory::OneFeature: return "one_feature";
    case SplitCategory::TwoFeatures: return "two_features";
    case SplitCategory::ThreeFeatures: return "three_features";
  }
  return "one_feature";
}

std::optional<SplitCategory> category_from_name(std::string_view name) {
  if (name == "one_feature") return SplitCategory::OneFeature;
  if (name == "two_features") return SplitCategory::TwoFeatures;
  if (name == "three_features") return SplitCategory::ThreeFeatures;
  return std::nullopt;
}

namespace {

int category_size(SplitCategory c) {
  switch (c) {
    case SplitCategory::OneFeature: return 1;
    case SplitCategory::TwoFeatures: return 2;
    case SplitCategory::ThreeFeatures: return 3;
  }
  return 1;
}

void check_spec(const SplitSpec& spec) {
  const int size = spec.constraint.size();
  if (size < 1 || size > 3) {
    throw std::invalid_argument("constraint must match on 1-3 features, got " +
                                std::to_string(size));
  }
  if (size != category_size(spec.category)) {
    throw std::invalid_argument("constraint size " + std::to_string(size) +
                                " does not match category " +
                                std::string(category_name(spec.category)));
  }
  if (!spec.constraint.is_random()) {
    auto sorted = spec.constraint.features;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("constraint features must be distinct");
    }
  }
  if (spec.pairs_per_set <= 0) {
    throw std::invalid_argument("pairs_per_set must be positive");
  }
}

Label random_label(Rng& rng) {
  std::array<int, kFeatureCount> values{};
  for (int fi = 0; fi < kFeatureCount; ++fi) {
    values[fi] = static_cast<int>(rng.below(kCardinalities[fi]));
  }
  return Label(values);
}

std::vector<Feature> random_feature_subset(Rng& rng, int k) {
  std::array<Feature, kFeatureCount> pool = kFeatures;
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(kFeatureCount - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<Feature> out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PairSet build_split(const SplitSpec& spec) {
  check_spec(spec);
  PairSet set;
  set.spec = spec;
  set.pairs.reserve(spec.pairs_per_set);
  std::set<std::pair<ImageId, ImageId>> seen;
  Rng rng(spec.seed);
  while (static_cast<int>(set.pairs.size()) < spec.pairs_per_set) {
    const std::vector<Feature> matched =
        spec.constraint.is_random() ? random_feature_subset(rng, spec.constraint.random_k)
                                    : spec.constraint.features;
    const Label target = random_label(rng);
    while (true) {
      std::array<int, kFeatureCount> values{};
      for (int fi = 0; fi < kFeatureCount; ++fi) {
        const Feature f = static_cast<Feature>(fi);
        if (std::find(matched.begin(), matched.end(), f) != matched.end()) {
          values[fi] = target[f];
        } else {
          values[fi] = static_cast<int>(rng.below(kCardinalities[fi]));
        }
      }
      Label distractor(values);
      if (distractor == target) continue;  // reject identical scenes
      if (spec.unique_pairs &&
          !seen.insert({encode_id(target), encode_id(distractor)}).second) {
        break;  // duplicate pair: redraw the target as well
      }
      set.pairs.emplace_back(target, distractor);
      break;
    }
  }
  return set;
}

std::vector<PairSet> standard_suite(std::uint64_t seed, int pairs_per_set) {
  std::vector<SplitSpec> specs;
  for (Feature f : kFeatures) {
    specs.push_back({"one_" + std::string(feature_name(f)), SplitCategory::OneFeature,
                     MatchConstraint{{f}, 0}, pairs_per_set, 0});
  }
  const std::vector<std::vector<Feature>> object_subsets = {
      {Feature::ObjectColor, Feature::Scale},
      {Feature::ObjectColor, Feature::Shape},
      {Feature::Scale, Feature::Shape},
  };
  for (const auto& subset : object_subsets) {
    std::string name = "two";
    for (Feature f : subset) name += "_" + std::string(feature_name(f));
    specs.push_back({std::move(name), SplitCategory::TwoFeatures,
                     MatchConstraint{subset, 0}, pairs_per_set, 0});
  }
  specs.push_back({"two_random", SplitCategory::TwoFeatures, MatchConstraint{{}, 2},
                   pairs_per_set, 0});
  specs.push_back({"three_object", SplitCategory::ThreeFeatures,
                   MatchConstraint{{Feature::ObjectColor, Feature::Scale, Feature::Shape}, 0},
                   pairs_per_set, 0});
  specs.push_back(
      {"three_background", SplitCategory::ThreeFeatures,
       MatchConstraint{{Feature::FloorColor, Feature::WallColor, Feature::Orientation}, 0},
       pairs_per_set, 0});
  specs.push_back({"three_random", SplitCategory::ThreeFeatures, MatchConstraint{{}, 3},
                   pairs_per_set, 0});

  std::vector<PairSet> suite;
  suite.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    specs[i].seed = derive_seed(seed, i);
    suite.push_back(build_split(specs[i]));
  }
  return suite;
}

std::vector<Violation> validate_split(const PairSet& set) {
  std::vector<Violation> out;
  if (static_cast<int>(set.pairs.size()) != set.spec.pairs_per_set) {
    out.push_back({"set_size", "set has " + std::to_string(set.pairs.size()) +
                                   " pairs, spec asks for " +
                                   std::to_string(set.spec.pairs_per_set)});
  }
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    const auto& pair = set.pairs[i];
    if (pair.target() == pair.distractor()) {
      out.push_back({"degenerate_pair",
                     "pair " + std::to_string(i) + ": target equals distractor"});
      continue;
    }
    if (set.spec.constraint.is_random()) {
      int matches = 0;
      for (Feature f : kFeatures) {
        if (pair.target()[f] == pair.distractor()[f]) ++matches;
      }
      if (matches < set.spec.constraint.random_k) {
        out.push_back({"constraint", "pair " + std::to_string(i) + ": only " +
                                         std::to_string(matches) +
                                         " matching features, need at least " +
                                         std::to_string(set.spec.constraint.random_k)});
      }
    } else {
      for (Feature f : set.spec.constraint.features) {
        if (pair.target()[f] != pair.distractor()[f]) {
          out.push_back({"constraint", "pair " + std::to_string(i) + ": " +
                                           std::string(feature_name(f)) +
                                           " must match the constraint"});
        }
      }
    }
  }
  return out;
}

}  // namespace pragcap
