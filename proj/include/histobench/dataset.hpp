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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histobench/errors.hpp"

namespace histobench::data {

/// Class indices are contiguous 0..m-1 and ordered lexicographically by name,
/// so for the usual two-class layout benign=0 and malignant=1.
struct ClassLabel {
  int index = 0;
  std::string name;

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

enum class Split { train, val, test, unassigned };
enum class Origin { original, augmented };

const char* to_string(Split s);
const char* to_string(Origin o);
Split split_from_string(const std::string& s);
Origin origin_from_string(const std::string& s);

struct ImageSample {
  std::string id;  // unique within a manifest, filename-safe
  std::filesystem::path path;
  int label = 0;  // index into DatasetManifest::classes
  Split split = Split::unassigned;
  Origin origin = Origin::original;
  std::optional<std::string> parent_id;  // set iff origin == augmented

  friend bool operator==(const ImageSample&, const ImageSample&) = default;
};

/// Per-class tally over the four split states, rows follow class index order.
using SplitCounts = std::vector<std::array<std::int64_t, 4>>;

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ClassLabel> classes;
  std::vector<ImageSample> samples;
  SplitCounts counts;

  SplitCounts recount() const;
  void refresh_counts() { counts = recount(); }

  std::vector<std::string> class_names() const;
  std::vector<ImageSample> split_samples(Split s) const;
  const ImageSample* find(const std::string& id) const;

  /// Checks the structural invariants: unique ids and paths, labels in range,
  /// augmented parents resolve to originals, counts match a fresh tally, and
  /// (unless allow_augmented_eval) no augmented sample sits in val or test.
  void validate(bool allow_augmented_eval = false) const;
};

struct SplitSpec {
  double train_frac = 0.7;
  double val_frac = 0.15;
  double test_frac = 0.15;
  std::uint64_t seed = 42;
  bool stratified = true;

  void validate() const;  // throws InvalidSpec
};

enum class PixelNormalization {
  unit_scale,      // pixel / 255 -> [0, 1]
  provider_stats,  // unit scale then (x - mean) / std with the pretraining-corpus statistics
};

const char* to_string(PixelNormalization n);
PixelNormalization normalization_from_string(const std::string& s);

/// Decoded batch in NHWC float32 layout, channels in RGB order.
struct ImageBatch {
  int n = 0;
  int h = 0;
  int w = 0;
  std::vector<float> values;  // n*h*w*3

  float at(int i, int y, int x, int c) const {
    return values[((static_cast<std::size_t>(i) * h + y) * w + x) * 3 + c];
  }
};

struct ValidationResult {
  enum class Reason { none, decode_failure, channel_count, too_small };

  bool ok = false;
  Reason reason = Reason::none;

  static ValidationResult accept() { return {true, Reason::none}; }
  static ValidationResult reject(Reason r) { return {false, r}; }
};

const char* to_string(ValidationResult::Reason r);

/// Enumerates one subdirectory per class under `root` (or the named
/// `class_subdirs`) and returns a manifest with all image files labeled and
/// unassigned. Classes are ordered lexicographically by directory name.
DatasetManifest scan_dataset(const std::filesystem::path& root,
                             const std::optional<std::vector<std::string>>& class_subdirs = std::nullopt);

/// Mechanical screen: the file must decode, carry 3 channels, and have
/// min(height, width) >= min_side. Rejection is a value, not an error.
ValidationResult validate_sample(const std::filesystem::path& path, int min_side);

/// Assigns every sample to train/val/test. Stratified assignment keeps each
/// class within one sample of the requested proportions. The assignment is a
/// pure function of the sample ids and spec.seed.
DatasetManifest split_manifest(const DatasetManifest& manifest, const SplitSpec& spec);

/// Decodes and resizes the given samples, preserving order.
ImageBatch load_batch(const std::vector<ImageSample>& samples, std::pair<int, int> target_size,
                      PixelNormalization normalize);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace histobench::data
