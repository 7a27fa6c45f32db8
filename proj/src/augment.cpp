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
#include "histobench/augment.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "util.hpp"

namespace histobench::aug {

namespace {

enum class Transform {
  rotation,
  right_angle_rotation,
  shear,
  skew,
  crop_scale,
  horizontal_flip,
  vertical_flip,
  brightness,
  contrast,
  saturation,
  intensity_shift,
  distortion,
};

const char* name_of(Transform t) {
  switch (t) {
    case Transform::rotation: return "rotation";
    case Transform::right_angle_rotation: return "right_angle_rotation";
    case Transform::shear: return "shear";
    case Transform::skew: return "skew";
    case Transform::crop_scale: return "crop_scale";
    case Transform::horizontal_flip: return "horizontal_flip";
    case Transform::vertical_flip: return "vertical_flip";
    case Transform::brightness: return "brightness";
    case Transform::contrast: return "contrast";
    case Transform::saturation: return "saturation";
    case Transform::intensity_shift: return "intensity_shift";
    case Transform::distortion: return "distortion";
  }
  return "";
}

std::vector<Transform> enabled_set(const AugmentationSpec& s) {
  std::vector<Transform> enabled;
  if (!s.rotation_deg.is_point(0.0)) enabled.push_back(Transform::rotation);
  if (!s.right_angle_rotations.empty()) enabled.push_back(Transform::right_angle_rotation);
  if (!s.shear.is_point(0.0)) enabled.push_back(Transform::shear);
  if (!s.skew.is_point(0.0)) enabled.push_back(Transform::skew);
  if (!s.crop_scale.is_point(1.0)) enabled.push_back(Transform::crop_scale);
  if (s.horizontal_flip) enabled.push_back(Transform::horizontal_flip);
  if (s.vertical_flip) enabled.push_back(Transform::vertical_flip);
  if (!s.brightness.is_point(1.0)) enabled.push_back(Transform::brightness);
  if (!s.contrast.is_point(1.0)) enabled.push_back(Transform::contrast);
  if (!s.saturation.is_point(1.0)) enabled.push_back(Transform::saturation);
  if (!s.intensity_shift.is_point(0.0)) enabled.push_back(Transform::intensity_shift);
  if (s.distortion != 0.0) enabled.push_back(Transform::distortion);
  return enabled;
}

cv::Mat warp_rotate(const cv::Mat& img, double angle_deg) {
  if (angle_deg == 0.0) {
    return img;
  }
  const cv::Point2f center(static_cast<float>(img.cols) / 2.0f, static_cast<float>(img.rows) / 2.0f);
  cv::Mat rot = cv::getRotationMatrix2D(center, angle_deg, 1.0);
  cv::Mat out;
  cv::warpAffine(img, out, rot, img.size(), cv::INTER_LINEAR, cv::BORDER_REFLECT_101);
  return out;
}

cv::Mat right_angle(const cv::Mat& img, int degrees) {
  cv::Mat out;
  switch (degrees) {
    case 90: cv::rotate(img, out, cv::ROTATE_90_CLOCKWISE); break;
    case 180: cv::rotate(img, out, cv::ROTATE_180); break;
    case 270: cv::rotate(img, out, cv::ROTATE_90_COUNTERCLOCKWISE); break;
    default: throw InvalidSpec("right-angle rotation must be one of 90/180/270");
  }
  // 90/270 swap the axes; non-square outputs are scaled back so the chain
  // keeps its same-shape contract.
  if (out.size() != img.size()) {
    cv::resize(out, out, img.size(), 0.0, 0.0, cv::INTER_LINEAR);
  }
  return out;
}

cv::Mat warp_shear(const cv::Mat& img, double factor) {
  if (factor == 0.0) {
    return img;
  }
  const double cx = img.cols / 2.0;
  const double cy = img.rows / 2.0;
  cv::Mat shear = (cv::Mat_<double>(2, 3) << 1.0, factor, -factor * cy, 0.0, 1.0, 0.0);
  (void)cx;
  cv::Mat out;
  cv::warpAffine(img, out, shear, img.size(), cv::INTER_LINEAR, cv::BORDER_REFLECT_101);
  return out;
}

cv::Mat warp_skew(const cv::Mat& img, double magnitude, int direction) {
  if (magnitude == 0.0) {
    return img;
  }
  const auto w = static_cast<float>(img.cols - 1);
  const auto h = static_cast<float>(img.rows - 1);
  const auto dx = static_cast<float>(magnitude * img.cols);
  const auto dy = static_cast<float>(magnitude * img.rows);
  cv::Point2f src[4] = {{0, 0}, {w, 0}, {w, h}, {0, h}};
  cv::Point2f dst[4] = {{0, 0}, {w, 0}, {w, h}, {0, h}};
  switch (direction) {
    case 0: dst[0].x += dx; dst[1].x -= dx; break;  // pinch top
    case 1: dst[2].x -= dx; dst[3].x += dx; break;  // pinch bottom
    case 2: dst[0].y += dy; dst[3].y -= dy; break;  // pinch left
    default: dst[1].y += dy; dst[2].y -= dy; break; // pinch right
  }
  cv::Mat perspective = cv::getPerspectiveTransform(src, dst);
  cv::Mat out;
  cv::warpPerspective(img, out, perspective, img.size(), cv::INTER_LINEAR, cv::BORDER_REFLECT_101);
  return out;
}

cv::Mat crop_and_rescale(const cv::Mat& img, double scale, double fx, double fy) {
  if (scale == 1.0) {
    return img;
  }
  const int cw = std::max(1, static_cast<int>(std::lround(img.cols * scale)));
  const int ch = std::max(1, static_cast<int>(std::lround(img.rows * scale)));
  const int x0 = static_cast<int>(std::lround(fx * (img.cols - cw)));
  const int y0 = static_cast<int>(std::lround(fy * (img.rows - ch)));
  cv::Mat cropped = img(cv::Rect(x0, y0, cw, ch));
  cv::Mat out;
  cv::resize(cropped, out, img.size(), 0.0, 0.0, cv::INTER_LINEAR);
  return out;
}

cv::Mat adjust_saturation(const cv::Mat& img, double factor) {
  if (factor == 1.0) {
    return img;
  }
  cv::Mat hsv;
  cv::cvtColor(img, hsv, cv::COLOR_BGR2HSV);
  std::vector<cv::Mat> channels;
  cv::split(hsv, channels);
  channels[1].convertTo(channels[1], -1, factor, 0.0);
  cv::merge(channels, hsv);
  cv::Mat out;
  cv::cvtColor(hsv, out, cv::COLOR_HSV2BGR);
  return out;
}

/// Smooth elastic warp: displacements drawn on a 4x4 control grid and
/// bilinearly upsampled to a full-resolution flow field.
cv::Mat grid_distort(const cv::Mat& img, double magnitude, util::SplitMix64& rng) {
  if (magnitude == 0.0) {
    return img;
  }
  constexpr int kGrid = 4;
  const double amplitude = magnitude * std::min(img.rows, img.cols);
  cv::Mat grid_dx(kGrid, kGrid, CV_32F);
  cv::Mat grid_dy(kGrid, kGrid, CV_32F);
  for (int gy = 0; gy < kGrid; ++gy) {
    for (int gx = 0; gx < kGrid; ++gx) {
      grid_dx.at<float>(gy, gx) = static_cast<float>(rng.next_in(-amplitude, amplitude));
      grid_dy.at<float>(gy, gx) = static_cast<float>(rng.next_in(-amplitude, amplitude));
    }
  }
  cv::Mat dx, dy;
  cv::resize(grid_dx, dx, img.size(), 0.0, 0.0, cv::INTER_LINEAR);
  cv::resize(grid_dy, dy, img.size(), 0.0, 0.0, cv::INTER_LINEAR);

  cv::Mat map_x(img.size(), CV_32F);
  cv::Mat map_y(img.size(), CV_32F);
  for (int y = 0; y < img.rows; ++y) {
    for (int x = 0; x < img.cols; ++x) {
      map_x.at<float>(y, x) = static_cast<float>(x) + dx.at<float>(y, x);
      map_y.at<float>(y, x) = static_cast<float>(y) + dy.at<float>(y, x);
    }
  }
  cv::Mat out;
  cv::remap(img, out, map_x, map_y, cv::INTER_LINEAR, cv::BORDER_REFLECT_101);
  return out;
}

}  // namespace

AugmentationSpec AugmentationSpec::identity() {
  AugmentationSpec spec;
  spec.rotation_deg = {0.0, 0.0};
  spec.right_angle_rotations.clear();
  spec.shear = {0.0, 0.0};
  spec.skew = {0.0, 0.0};
  spec.crop_scale = {1.0, 1.0};
  spec.horizontal_flip = false;
  spec.vertical_flip = false;
  spec.brightness = {1.0, 1.0};
  spec.contrast = {1.0, 1.0};
  spec.saturation = {1.0, 1.0};
  spec.intensity_shift = {0.0, 0.0};
  spec.distortion = 0.0;
  return spec;
}

std::vector<std::string> AugmentationSpec::enabled_transforms() const {
  std::vector<std::string> names;
  for (Transform t : enabled_set(*this)) {
    names.emplace_back(name_of(t));
  }
  return names;
}

void AugmentationSpec::validate() const {
  auto ordered = [](const Range& r) { return r.lo <= r.hi; };
  if (!ordered(rotation_deg) || !ordered(shear) || !ordered(skew) || !ordered(crop_scale) ||
      !ordered(brightness) || !ordered(contrast) || !ordered(saturation) || !ordered(intensity_shift)) {
    throw InvalidSpec("augmentation ranges must satisfy lo <= hi");
  }
  if (crop_scale.lo <= 0.0 || crop_scale.hi > 1.0) {
    throw InvalidSpec("crop_scale must lie in (0, 1]");
  }
  for (int deg : right_angle_rotations) {
    if (deg != 90 && deg != 180 && deg != 270) {
      throw InvalidSpec("right_angle_rotations entries must be 90, 180 or 270");
    }
  }
  if (variants_per_image < 0) {
    throw InvalidSpec("variants_per_image must be nonnegative");
  }
  if (distortion < 0.0 || distortion > 0.2) {
    throw InvalidSpec("distortion magnitude must lie in [0, 0.2]");
  }
}

Augmenter::Augmenter(AugmentationSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

cv::Mat Augmenter::apply(const cv::Mat& image, const std::string& sample_id, int variant) const {
  if (variant < 0 || variant >= spec_.variants_per_image) {
    throw VariantOutOfRange("variant " + std::to_string(variant) + " with k=" +
                            std::to_string(spec_.variants_per_image));
  }
  CV_Assert(image.type() == CV_8UC3);

  util::SplitMix64 rng(util::derive_seed(spec_.seed, sample_id, static_cast<std::uint64_t>(variant)));
  auto enabled = enabled_set(spec_);
  if (enabled.empty()) {
    return image.clone();
  }

  // Each variant chains a uniformly chosen subset of 1..3 enabled transforms.
  const std::size_t max_chain = std::min<std::size_t>(3, enabled.size());
  const std::size_t chain_len = 1 + static_cast<std::size_t>(rng.next_below(max_chain));
  util::portable_shuffle(enabled, rng);
  enabled.resize(chain_len);

  cv::Mat out = image.clone();
  for (Transform t : enabled) {
    switch (t) {
      case Transform::rotation:
        out = warp_rotate(out, rng.next_in(spec_.rotation_deg.lo, spec_.rotation_deg.hi));
        break;
      case Transform::right_angle_rotation: {
        const auto pick = rng.next_below(spec_.right_angle_rotations.size());
        out = right_angle(out, spec_.right_angle_rotations[static_cast<std::size_t>(pick)]);
        break;
      }
      case Transform::shear:
        out = warp_shear(out, rng.next_in(spec_.shear.lo, spec_.shear.hi));
        break;
      case Transform::skew: {
        const double magnitude = rng.next_in(spec_.skew.lo, spec_.skew.hi);
        const int direction = static_cast<int>(rng.next_below(4));
        out = warp_skew(out, magnitude, direction);
        break;
      }
      case Transform::crop_scale: {
        const double scale = rng.next_in(spec_.crop_scale.lo, spec_.crop_scale.hi);
        const double fx = rng.next_double();
        const double fy = rng.next_double();
        out = crop_and_rescale(out, scale, fx, fy);
        break;
      }
      case Transform::horizontal_flip: {
        cv::Mat flipped;
        cv::flip(out, flipped, 1);
        out = flipped;
        break;
      }
      case Transform::vertical_flip: {
        cv::Mat flipped;
        cv::flip(out, flipped, 0);
        out = flipped;
        break;
      }
      case Transform::brightness: {
        const double factor = rng.next_in(spec_.brightness.lo, spec_.brightness.hi);
        if (factor != 1.0) {
          out.convertTo(out, -1, factor, 0.0);
        }
        break;
      }
      case Transform::contrast: {
        const double factor = rng.next_in(spec_.contrast.lo, spec_.contrast.hi);
        if (factor != 1.0) {
          out.convertTo(out, -1, factor, 128.0 * (1.0 - factor));
        }
        break;
      }
      case Transform::saturation:
        out = adjust_saturation(out, rng.next_in(spec_.saturation.lo, spec_.saturation.hi));
        break;
      case Transform::intensity_shift: {
        const double delta = rng.next_in(spec_.intensity_shift.lo, spec_.intensity_shift.hi);
        if (delta != 0.0) {
          out.convertTo(out, -1, 1.0, delta);
        }
        break;
      }
      case Transform::distortion:
        out = grid_distort(out, spec_.distortion, rng);
        break;
    }
  }
  return out;
}

namespace {

data::DatasetManifest expand_splits(const data::DatasetManifest& manifest, const Augmenter& aug,
                                    const std::filesystem::path& out_dir,
                                    const std::vector<data::Split>& targets, bool allow_augmented_eval) {
  namespace fs = std::filesystem;
  for (const auto& s : manifest.samples) {
    if (s.split == data::Split::unassigned) {
      throw DataError("manifest must be split before expansion (sample " + s.id + " unassigned)");
    }
    if (s.origin == data::Origin::augmented &&
        std::find(targets.begin(), targets.end(), s.split) != targets.end()) {
      throw AlreadyExpanded("augmented sample " + s.id + " already present");
    }
  }

  data::DatasetManifest out = manifest;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoFailure("cannot create " + out_dir.string() + ": " + ec.message());
  }
  const int k = aug.spec().variants_per_image;
  if (k == 0) {
    return out;
  }

  // Deterministic processing order; outputs are keyed by (id, variant) so the
  // order cannot change the bytes anyway.
  std::vector<const data::ImageSample*> originals;
  for (const auto& s : manifest.samples) {
    if (std::find(targets.begin(), targets.end(), s.split) != targets.end() &&
        s.origin == data::Origin::original) {
      originals.push_back(&s);
    }
  }
  std::sort(originals.begin(), originals.end(),
            [](const data::ImageSample* a, const data::ImageSample* b) { return a->id < b->id; });

  const std::vector<int> png_params = {cv::IMWRITE_PNG_COMPRESSION, 3};
  for (const auto* parent : originals) {
    cv::Mat image = cv::imread(parent->path.string(), cv::IMREAD_COLOR);
    if (image.empty()) {
      throw DecodeFailure(parent->id);
    }
    const auto& class_name = manifest.classes[static_cast<std::size_t>(parent->label)].name;
    fs::create_directories(out_dir / class_name, ec);
    if (ec) {
      throw IoFailure("cannot create " + (out_dir / class_name).string() + ": " + ec.message());
    }
    for (int v = 0; v < k; ++v) {
      cv::Mat augmented = aug.apply(image, parent->id, v);
      const std::string leaf = parent->id + "__aug" + std::to_string(v) + ".png";
      const fs::path path = out_dir / class_name / leaf;
      if (!cv::imwrite(path.string(), augmented, png_params)) {
        throw IoFailure("cannot write " + path.string());
      }
      out.samples.push_back({parent->id + "__aug" + std::to_string(v), path, parent->label,
                             parent->split, data::Origin::augmented, parent->id});
    }
  }
  out.refresh_counts();
  out.validate(allow_augmented_eval);
  return out;
}

}  // namespace

data::DatasetManifest expand_training_set(const data::DatasetManifest& manifest, const Augmenter& aug,
                                          const std::filesystem::path& out_dir) {
  return expand_splits(manifest, aug, out_dir, {data::Split::train}, false);
}

data::DatasetManifest expand_eval_set(const data::DatasetManifest& manifest, const Augmenter& aug,
                                      const std::filesystem::path& out_dir) {
  return expand_splits(manifest, aug, out_dir, {data::Split::val, data::Split::test}, true);
}

}  // namespace histobench::aug
