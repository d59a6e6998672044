#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace pragcap {

/// The six categorical scene features, in canonical (wire) order.
enum class Feature : int {
  FloorColor = 0,
  WallColor = 1,
  ObjectColor = 2,
  Scale = 3,
  Shape = 4,
  Orientation = 5,
};

inline constexpr int kFeatureCount = 6;

inline constexpr std::array<Feature, kFeatureCount> kFeatures = {
    Feature::FloorColor, Feature::WallColor,   Feature::ObjectColor,
    Feature::Scale,      Feature::Shape,       Feature::Orientation,
};

// Value counts per feature, canonical order.
inline constexpr std::array<int, kFeatureCount> kCardinalities = {10, 10, 10, 8, 4, 15};

inline constexpr std::int64_t kImageCount = 480000;  // 10*10*10*8*4*15

constexpr int feature_index(Feature f) { return static_cast<int>(f); }
constexpr int cardinality(Feature f) { return kCardinalities[feature_index(f)]; }

constexpr bool is_color_feature(Feature f) {
  return f == Feature::FloorColor || f == Feature::WallColor || f == Feature::ObjectColor;
}

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);

/// One scene: a value index per feature. Components are validated on
/// construction, so a Label instance is always in range.
class Label {
 public:
  Label() = default;  // the all-zero scene
  explicit Label(const std::array<int, kFeatureCount>& values);

  static Label from_values(int floor_color, int wall_color, int object_color,
                           int scale, int shape, int orientation);

  int operator[](Feature f) const { return values_[feature_index(f)]; }
  const std::array<int, kFeatureCount>& values() const { return values_; }

  bool operator==(const Label&) const = default;

 private:
  std::array<int, kFeatureCount> values_{};
};

using ImageId = std::int64_t;

/// Mixed-radix scene index in [0, 480000), lexicographic in canonical
/// feature order.
ImageId encode_id(const Label& label);

/// Inverse of encode_id; throws std::out_of_range for ids outside [0, 480000).
Label decode_id(ImageId id);

/// A reference-game context. Target and distractor must be distinct scenes;
/// the constructor rejects degenerate pairs.
class ImagePair {
 public:
  ImagePair(Label target, Label distractor);

  const Label& target() const { return target_; }
  const Label& distractor() const { return distractor_; }

  /// The same context with roles swapped.
  ImagePair swapped() const { return ImagePair(distractor_, target_); }

  bool operator==(const ImagePair&) const = default;

 private:
  Label target_;
  Label distractor_;
};

/// Per-feature contrastive status for a pair. A feature is contrastive when
/// the target and distractor values differ; z counts contrastive features.
struct ContrastProfile {
  std::array<bool, kFeatureCount> contrastive{};
  int z = 0;

  bool is_contrastive(Feature f) const { return contrastive[feature_index(f)]; }
};

ContrastProfile contrast_profile(const ImagePair& pair);

}  // namespace pragcap
