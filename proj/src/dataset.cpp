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
#include "histobench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "util.hpp"

namespace histobench::data {

namespace {

using nlohmann::ordered_json;

// Statistics the pretrained backbones were normalized with.
constexpr float kProviderMean[3] = {0.485f, 0.456f, 0.406f};
constexpr float kProviderStd[3] = {0.229f, 0.224f, 0.225f};

bool has_image_extension(const std::filesystem::path& p) {
  const std::string ext = util::lower(p.extension().string());
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

/// Largest-remainder allocation of n items over the three fractions; every
/// bucket lands within one item of frac * n.
std::array<std::size_t, 3> allocate_counts(std::size_t n, const SplitSpec& spec) {
  const double fracs[3] = {spec.train_frac, spec.val_frac, spec.test_frac};
  std::array<std::size_t, 3> counts{};
  double remainders[3];
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double target = fracs[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(target + 1e-9));
    remainders[i] = target - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (remainders[i] > remainders[best] + 1e-12) {
        best = i;
      }
    }
    ++counts[best];
    remainders[best] -= 1.0;
    ++assigned;
  }
  return counts;
}

void assign_group(std::vector<ImageSample*>& group, const SplitSpec& spec, std::uint64_t stream_seed) {
  std::sort(group.begin(), group.end(),
            [](const ImageSample* a, const ImageSample* b) { return a->id < b->id; });
  util::SplitMix64 rng(stream_seed);
  util::portable_shuffle(group, rng);
  const auto counts = allocate_counts(group.size(), spec);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < counts[0]; ++i) group[idx++]->split = Split::train;
  for (std::size_t i = 0; i < counts[1]; ++i) group[idx++]->split = Split::val;
  for (std::size_t i = 0; i < counts[2]; ++i) group[idx++]->split = Split::test;
}

}  // namespace

const char* to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    case Split::unassigned: return "unassigned";
  }
  return "unassigned";
}

const char* to_string(Origin o) { return o == Origin::original ? "original" : "augmented"; }

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  if (s == "unassigned") return Split::unassigned;
  throw ParseError("unknown split '" + s + "'");
}

Origin origin_from_string(const std::string& s) {
  if (s == "original") return Origin::original;
  if (s == "augmented") return Origin::augmented;
  throw ParseError("unknown origin '" + s + "'");
}

const char* to_string(PixelNormalization n) {
  return n == PixelNormalization::unit_scale ? "unit_scale" : "provider_stats";
}

PixelNormalization normalization_from_string(const std::string& s) {
  if (s == "unit_scale") return PixelNormalization::unit_scale;
  if (s == "provider_stats") return PixelNormalization::provider_stats;
  throw ParseError("unknown normalization '" + s + "'");
}

const char* to_string(ValidationResult::Reason r) {
  switch (r) {
    case ValidationResult::Reason::none: return "none";
    case ValidationResult::Reason::decode_failure: return "decode_failure";
    case ValidationResult::Reason::channel_count: return "channel_count";
    case ValidationResult::Reason::too_small: return "too_small";
  }
  return "none";
}

SplitCounts DatasetManifest::recount() const {
  SplitCounts table(classes.size(), {0, 0, 0, 0});
  for (const auto& s : samples) {
    table[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(s.split)] += 1;
  }
  return table;
}

std::vector<std::string> DatasetManifest::class_names() const {
  std::vector<std::string> names;
  names.reserve(classes.size());
  for (const auto& c : classes) {
    names.push_back(c.name);
  }
  return names;
}

std::vector<ImageSample> DatasetManifest::split_samples(Split s) const {
  std::vector<ImageSample> out;
  for (const auto& sample : samples) {
    if (sample.split == s) {
      out.push_back(sample);
    }
  }
  return out;
}

const ImageSample* DatasetManifest::find(const std::string& id) const {
  for (const auto& sample : samples) {
    if (sample.id == id) {
      return &sample;
    }
  }
  return nullptr;
}

void DatasetManifest::validate(bool allow_augmented_eval) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].index != static_cast<int>(i)) {
      throw DataError("class indices are not contiguous from 0");
    }
    if (i > 0 && !(classes[i - 1].name < classes[i].name)) {
      throw DataError("class names are not unique and lexicographically ordered");
    }
  }

  std::unordered_map<std::string, const ImageSample*> by_id;
  std::unordered_set<std::string> paths;
  for (const auto& s : samples) {
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= classes.size()) {
      throw DataError("sample " + s.id + " has label outside the class list");
    }
    if (!by_id.emplace(s.id, &s).second) {
      throw DataError("duplicate sample id " + s.id);
    }
    if (!paths.insert(s.path.string()).second) {
      throw DataError("duplicate sample path " + s.path.string());
    }
    if ((s.origin == Origin::augmented) != s.parent_id.has_value()) {
      throw DataError("sample " + s.id + ": parent_id must be set iff origin is augmented");
    }
  }
  for (const auto& s : samples) {
    if (s.origin != Origin::augmented) {
      continue;
    }
    auto it = by_id.find(*s.parent_id);
    if (it == by_id.end() || it->second->origin != Origin::original) {
      throw DataError("augmented sample " + s.id + " does not reference an existing original");
    }
    if (s.label != it->second->label) {
      throw DataError("augmented sample " + s.id + " disagrees with its parent's label");
    }
    if (!allow_augmented_eval && (s.split == Split::val || s.split == Split::test)) {
      throw DataError("augmented sample " + s.id + " sits in an evaluation split");
    }
  }
  if (counts != recount()) {
    throw DataError("manifest counts table disagrees with a fresh tally");
  }
}

void SplitSpec::validate() const {
  if (train_frac < 0.0 || val_frac < 0.0 || test_frac < 0.0) {
    throw InvalidSpec("split fractions must be nonnegative");
  }
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw InvalidSpec("split fractions must sum to 1");
  }
}

DatasetManifest scan_dataset(const std::filesystem::path& root,
                             const std::optional<std::vector<std::string>>& class_subdirs) {
  namespace fs = std::filesystem;
  if (!fs::exists(root) || !fs::is_directory(root)) {
    throw MissingRoot(root.string());
  }

  std::vector<std::string> class_dirs;
  if (class_subdirs) {
    class_dirs = *class_subdirs;
    for (const auto& name : class_dirs) {
      if (!fs::is_directory(root / name)) {
        throw NoClassesFound("named class directory '" + name + "' missing under " + root.string());
      }
    }
  } else {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_directory()) {
        class_dirs.push_back(entry.path().filename().string());
      }
    }
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.size() < 2) {
    throw NoClassesFound("found " + std::to_string(class_dirs.size()) + " class directories under " +
                         root.string());
  }

  DatasetManifest manifest;
  manifest.root = root;
  std::unordered_map<std::string, int> id_uses;

  for (std::size_t ci = 0; ci < class_dirs.size(); ++ci) {
    manifest.classes.push_back({static_cast<int>(ci), class_dirs[ci]});

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root / class_dirs[ci])) {
      if (entry.is_regular_file() && has_image_extension(entry.path())) {
        files.push_back(entry.path());
      }
    }
    if (files.empty()) {
      throw EmptyClass(class_dirs[ci]);
    }
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
      std::string id = util::sanitize_id(class_dirs[ci] + "__" + file.stem().string());
      const int uses = ++id_uses[id];
      if (uses > 1) {
        id += "_" + std::to_string(uses);
      }
      manifest.samples.push_back(
          {id, file, static_cast<int>(ci), Split::unassigned, Origin::original, std::nullopt});
    }
  }
  manifest.refresh_counts();
  return manifest;
}

ValidationResult validate_sample(const std::filesystem::path& path, int min_side) {
  cv::Mat image = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (image.empty()) {
    return ValidationResult::reject(ValidationResult::Reason::decode_failure);
  }
  if (image.channels() != 3) {
    return ValidationResult::reject(ValidationResult::Reason::channel_count);
  }
  if (std::min(image.rows, image.cols) < min_side) {
    return ValidationResult::reject(ValidationResult::Reason::too_small);
  }
  return ValidationResult::accept();
}

DatasetManifest split_manifest(const DatasetManifest& manifest, const SplitSpec& spec) {
  spec.validate();
  for (const auto& s : manifest.samples) {
    if (s.split != Split::unassigned) {
      throw AlreadySplit("sample " + s.id + " is already assigned to " + to_string(s.split));
    }
  }

  DatasetManifest out = manifest;
  if (spec.stratified) {
    for (const auto& cls : out.classes) {
      std::vector<ImageSample*> group;
      for (auto& s : out.samples) {
        if (s.label == cls.index) {
          group.push_back(&s);
        }
      }
      assign_group(group, spec, util::derive_seed(spec.seed, cls.name, 0));
    }
  } else {
    std::vector<ImageSample*> group;
    group.reserve(out.samples.size());
    for (auto& s : out.samples) {
      group.push_back(&s);
    }
    assign_group(group, spec, util::derive_seed(spec.seed, "all", 0));
  }
  out.refresh_counts();
  return out;
}

ImageBatch load_batch(const std::vector<ImageSample>& samples, std::pair<int, int> target_size,
                      PixelNormalization normalize) {
  const auto [h, w] = target_size;
  if (h <= 0 || w <= 0) {
    throw InvalidSpec("target size must be positive");
  }
  ImageBatch batch;
  batch.n = static_cast<int>(samples.size());
  batch.h = h;
  batch.w = w;
  batch.values.resize(static_cast<std::size_t>(batch.n) * h * w * 3);

  std::size_t offset = 0;
  for (const auto& sample : samples) {
    cv::Mat image = cv::imread(sample.path.string(), cv::IMREAD_COLOR);
    if (image.empty()) {
      throw DecodeFailure(sample.id);
    }
    if (image.rows != h || image.cols != w) {
      cv::resize(image, image, cv::Size(w, h), 0.0, 0.0, cv::INTER_LINEAR);
    }
    for (int y = 0; y < h; ++y) {
      const auto* row = image.ptr<cv::Vec3b>(y);
      for (int x = 0; x < w; ++x) {
        // OpenCV decodes BGR; the batch contract is RGB
        for (int c = 0; c < 3; ++c) {
          float v = static_cast<float>(row[x][2 - c]) / 255.0f;
          if (normalize == PixelNormalization::provider_stats) {
            v = (v - kProviderMean[c]) / kProviderStd[c];
          }
          batch.values[offset++] = v;
        }
      }
    }
  }
  return batch;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  ordered_json doc;
  doc["root"] = manifest.root.string();
  doc["classes"] = ordered_json::array();
  for (const auto& c : manifest.classes) {
    doc["classes"].push_back({{"index", c.index}, {"name", c.name}});
  }
  doc["samples"] = ordered_json::array();
  for (const auto& s : manifest.samples) {
    ordered_json js = {{"id", s.id},
                       {"path", s.path.string()},
                       {"label", manifest.classes[static_cast<std::size_t>(s.label)].name},
                       {"split", to_string(s.split)},
                       {"origin", to_string(s.origin)},
                       {"parent_id", s.parent_id ? ordered_json(*s.parent_id) : ordered_json(nullptr)}};
    doc["samples"].push_back(std::move(js));
  }
  util::write_text_file(path, doc.dump(2) + "\n");
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(util::read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }

  DatasetManifest manifest;
  manifest.root = doc.at("root").get<std::string>();
  std::map<std::string, int> class_index;
  for (const auto& c : doc.at("classes")) {
    ClassLabel label{c.at("index").get<int>(), c.at("name").get<std::string>()};
    class_index[label.name] = label.index;
    manifest.classes.push_back(std::move(label));
  }
  for (const auto& s : doc.at("samples")) {
    ImageSample sample;
    sample.id = s.at("id").get<std::string>();
    sample.path = s.at("path").get<std::string>();
    auto it = class_index.find(s.at("label").get<std::string>());
    if (it == class_index.end()) {
      throw ParseError("manifest sample " + sample.id + " has unknown label");
    }
    sample.label = it->second;
    sample.split = split_from_string(s.at("split").get<std::string>());
    sample.origin = origin_from_string(s.at("origin").get<std::string>());
    if (!s.at("parent_id").is_null()) {
      sample.parent_id = s.at("parent_id").get<std::string>();
    }
    manifest.samples.push_back(std::move(sample));
  }
  manifest.refresh_counts();
  return manifest;
}

}  // namespace histobench::data
