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
#include <optional>
#include <string>
#include <vector>

#include "histobench/augment.hpp"
#include "histobench/dataset.hpp"
#include "histobench/ensemble.hpp"
#include "histobench/errors.hpp"
#include "histobench/model_zoo.hpp"
#include "histobench/trainer.hpp"

namespace histobench::bench {

/// One (architecture, mode) training run declared by the experiment.
struct RunSpec {
  models::ArchId arch{};
  models::ModelMode mode{};
  std::string display_arch;  // as written in the config ("DenseNet201" keeps the alias)
  bool densenet201_layout = false;
  std::optional<std::pair<int, int>> input_size;  // reduced-resolution override

  /// Stable identifier, e.g. "densenet121_scratch"; ensemble members and
  /// artifact directories reference runs by this id.
  std::string id() const;
};

/// One declarative record driving a full reproducible experiment.
struct ExperimentConfig {
  int spec_version = 1;
  std::filesystem::path dataset_root;
  std::filesystem::path output_dir;
  std::uint64_t global_seed = 42;
  int min_image_side = 32;
  data::SplitSpec split;
  aug::AugmentationSpec augmentation;
  trainer::TrainingConfig training;
  std::vector<RunSpec> runs;
  std::vector<ensemble::EnsembleSpec> ensembles;
  std::optional<std::filesystem::path> weights_dir;  // required when any run is transfer

  const RunSpec* find_run(const std::string& id) const;

  /// Throws ValidationError listing every violated constraint.
  void validate() const;

  /// Hash of the semantic payload (everything except output_dir), embedded in
  /// artifacts so downstream steps refuse to mix files from different
  /// splits/seeds. Two configs differing only in output_dir hash equal.
  std::string hash() const;
};

/// Parses and validates a config file, filling defaults. Unknown keys are
/// rejected at every level. Throws ParseError / ValidationError.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Same, from a JSON string (used by the bindings and tests).
ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir = ".");

std::string config_to_json(const ExperimentConfig& config);

}  // namespace histobench::bench
