#include "pragcap/feature_space.hpp"

#include <stdexcept>
#include <string>

namespace pragcap {

namespace {
constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "floor_color", "wall_color", "object_color", "scale", "shape", "orientation",
};
}  // namespace

std::string_view feature_name(Feature f) { return kFeatureNames[feature_index(f)]; }

std::optional<Feature> feature_from_name(std::string_view name) {
  for (int i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return static_cast<Feature>(i);
  }
  return std::nullopt;
}

Label::Label(const std::array<int, kFeatureCount>& values) : values_(values) {
  for (int i = 0; i < kFeatureCount; ++i) {
    if (values_[i] < 0 || values_[i] >= kCardinalities[i]) {
      throw std::invalid_argument(std::string(kFeatureNames[i]) + " value " +
                                  std::to_string(values_[i]) + " out of range [0, " +
                                  std::to_string(kCardinalities[i]) + ")");
    }
  }
}

Label Label::from_values(int floor_color, int wall_color, int object_color, int scale,
                         int shape, int orientation) {
  return Label({floor_color, wall_color, object_color, scale, shape, orientation});
}

ImageId encode_id(const Label& label) {
  ImageId id = 0;
  for (int i = 0; i < kFeatureCount; ++i) {
    id = id * kCardinalities[i] + label.values()[i];
  }
  return id;
}

Label decode_id(ImageId id) {
  if (id < 0 || id >= kImageCount) {
    throw std::out_of_range("image id " + std::to_string(id) + " out of range [0, " +
                            std::to_string(kImageCount) + ")");
  }
  std::array<int, kFeatureCount> values{};
  for (int i = kFeatureCount - 1; i >= 0; --i) {
    values[i] = static_cast<int>(id % kCardinalities[i]);
    id /= kCardinalities[i];
  }
  return Label(values);
}

ImagePair::ImagePair(Label target, Label distractor)
    : target_(std::move(target)), distractor_(std::move(distractor)) {
  if (target_ == distractor_) {
    throw std::invalid_argument("degenerate pair: target and distractor are identical");
  }
}

ContrastProfile contrast_profile(const ImagePair& pair) {
  ContrastProfile profile;
  for (int i = 0; i < kFeatureCount; ++i) {
    const bool differs = pair.target().values()[i] != pair.distractor().values()[i];
    profile.contrastive[i] = differs;
    profile.z += differs ? 1 : 0;
  }
  return profile;
}

}  // namespace pragcap
