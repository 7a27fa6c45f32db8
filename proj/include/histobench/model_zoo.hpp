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
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histobench/dataset.hpp"
#include "histobench/errors.hpp"

namespace histobench::models {

/// The six benchmark architectures, in comparison-table order.
enum class ArchId { DenseNet121, InceptionV3, ResNet18, SEResNet152, MobileNetV2, VGG19 };

enum class ModelMode { scratch, transfer };

enum class FreezeScope { all_backbone, last_block_trainable };

struct TransferPolicy {
  FreezeScope freeze = FreezeScope::all_backbone;
};

std::vector<ArchId> list_architectures();
const char* to_string(ArchId arch);
const char* to_string(ModelMode mode);

/// Accepts the canonical names case-insensitively, with or without hyphens
/// ("SE-ResNet152", "seresnet152"). Throws UnknownArchitecture otherwise.
/// "DenseNet201" is accepted as an alias that selects the deeper DenseNet
/// layout; callers that care should also check is_densenet201_alias().
ArchId arch_from_string(const std::string& name);
bool is_densenet201_alias(const std::string& name);
ModelMode mode_from_string(const std::string& mode);

/// Canonical input resolution (299 for InceptionV3, 224 otherwise).
std::pair<int, int> default_input_size(ArchId arch);

/// Smallest side the architecture's downsampling chain supports.
int min_input_side(ArchId arch);

/// Resolves pretrained backbone weights for transfer mode. Implementations
/// throw WeightsUnavailable when no weights exist for the architecture.
class WeightProvider {
 public:
  virtual ~WeightProvider() = default;
  virtual std::filesystem::path resolve(ArchId arch) const = 0;
};

/// Looks for <dir>/<lowercase arch name>.pt, the archive format written by
/// export_weights().
class DirectoryWeightProvider : public WeightProvider {
 public:
  explicit DirectoryWeightProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::filesystem::path resolve(ArchId arch) const override;

 private:
  std::filesystem::path dir_;
};

struct ModelOptions {
  std::optional<std::pair<int, int>> input_size;  // default: canonical resolution
  std::uint64_t seed = 42;
  const WeightProvider* weights = nullptr;  // required for transfer mode
  bool densenet201_layout = false;          // config alias for the deeper DenseNet
};

/// Constructed network plus its descriptive fields. The underlying net is
/// shared; training mutates it in place. A handle must not be shared across
/// concurrent training steps.
struct ModelHandle {
  ArchId arch{};
  ModelMode mode{};
  std::pair<int, int> input_size{224, 224};
  int num_classes = 2;
  std::int64_t parameter_count = 0;
  std::int64_t trainable_parameter_count = 0;
  std::string display_name;  // "DenseNet121", or "DenseNet201" for the alias
  std::shared_ptr<void> net;

  data::PixelNormalization default_normalization() const {
    return mode == ModelMode::transfer ? data::PixelNormalization::provider_stats
                                       : data::PixelNormalization::unit_scale;
  }
};

/// Builds the network with seeded initialization. In transfer mode the
/// backbone weights come from opts.weights and the classification head is
/// freshly initialized, then freeze_backbone(policy) is applied.
ModelHandle build_model(ArchId arch, ModelMode mode, int num_classes,
                        const TransferPolicy& policy = {}, const ModelOptions& opts = {});

/// Flags backbone parameters non-trainable per policy and returns the handle
/// with refreshed counts. Throws NotTransferMode for scratch handles.
ModelHandle freeze_backbone(const ModelHandle& handle, const TransferPolicy& policy);

/// Softmax forward pass; returns an N x num_classes row-major matrix whose
/// rows sum to 1.
std::vector<double> forward_probabilities(const ModelHandle& handle, const data::ImageBatch& batch);

std::vector<std::string> parameter_names(const ModelHandle& handle, bool trainable_only = false);

/// Fetches a flattened copy of one named parameter (test and tooling aid).
std::vector<float> parameter_values(const ModelHandle& handle, const std::string& name);

/// Writes every named parameter and buffer to a weight archive readable by
/// DirectoryWeightProvider-based transfer builds.
void export_weights(const ModelHandle& handle, const std::filesystem::path& path);

}  // namespace histobench::models
