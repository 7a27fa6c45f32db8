/*
 * Copyright 2026 histobench contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "histobench/dataset.hpp"
#include "histobench/errors.hpp"

namespace histobench::aug {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool is_point(double v) const { return lo == v && hi == v; }
  friend bool operator==(const Range&, const Range&) = default;
};

/// Transform inventory with stochastic parameter ranges. The default spec
/// enables every transform; ranges with lo == hi pin the parameter, and a
/// multiplicative range pinned at 1.0 (or an additive one at 0.0) disables
/// the transform entirely.
struct AugmentationSpec {
  Range rotation_deg{-15.0, 15.0};
  std::vector<int> right_angle_rotations{90, 180, 270};
  Range shear{-0.1, 0.1};
  Range skew{-0.1, 0.1};
  Range crop_scale{0.8, 1.0};
  bool horizontal_flip = true;
  bool vertical_flip = true;
  Range brightness{0.8, 1.2};
  Range contrast{0.8, 1.2};
  Range saturation{0.8, 1.2};
  Range intensity_shift{-25.0, 25.0};
  double distortion = 0.05;  // grid-warp displacement as a fraction of the image side
  int variants_per_image = 10;
  std::uint64_t seed = 42;

  /// Spec with every transform collapsed to the identity; outputs are
  /// pixel-equal to inputs.
  static AugmentationSpec identity();

  /// Names of the transforms this spec actually enables.
  std::vector<std::string> enabled_transforms() const;

  void validate() const;  // throws InvalidSpec

  friend bool operator==(const AugmentationSpec&, const AugmentationSpec&) = default;
};

/// Deterministic augmenter: the transform chain and its parameters for a
/// given output are a pure function of (spec.seed, sample id, variant index),
/// never of call order. Two augmenters built from equal specs produce
/// byte-identical outputs.
class Augmenter {
 public:
  explicit Augmenter(AugmentationSpec spec);

  const AugmentationSpec& spec() const { return spec_; }

  /// Applies the sampled chain for (sample_id, variant) to an 8-bit 3-channel
  /// image. variant must lie in [0, variants_per_image).
  cv::Mat apply(const cv::Mat& image, const std::string& sample_id, int variant) const;

 private:
  AugmentationSpec spec_;
};

inline Augmenter build_augmenter(const AugmentationSpec& spec) { return Augmenter(spec); }

/// Writes k augmented variants per train-split original under
/// <out_dir>/<class>/<parent_id>__aug<k>.png and returns the manifest with the
/// new samples appended (origin=augmented, split=train). val/test untouched.
data::DatasetManifest expand_training_set(const data::DatasetManifest& manifest, const Augmenter& aug,
                                          const std::filesystem::path& out_dir);

/// Variant used by --augment-eval: expands val and test splits instead. The
/// returned manifest only passes validate(allow_augmented_eval=true).
data::DatasetManifest expand_eval_set(const data::DatasetManifest& manifest, const Augmenter& aug,
                                      const std::filesystem::path& out_dir);

}  // namespace histobench::aug
