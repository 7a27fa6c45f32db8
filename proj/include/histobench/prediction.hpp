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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "histobench/errors.hpp"

namespace histobench {

/// Per-sample class-probability table produced by one model on one
/// evaluation split. This is the interchange artifact between the trainer
/// and the ensemble: entry (r, i) is the probability model `model_id`
/// assigns to class i for sample r.
struct PredictionMatrix {
  std::string model_id;
  std::vector<std::string> sample_ids;
  std::vector<std::string> class_names;
  std::vector<int> true_labels;   // class indices, aligned with sample_ids
  std::vector<double> probs;      // N x m, row-major

  std::size_t rows() const { return sample_ids.size(); }
  std::size_t cols() const { return class_names.size(); }
  double at(std::size_t r, std::size_t c) const { return probs[r * cols() + c]; }

  int argmax_row(std::size_t r) const;

  /// Rows must sum to 1 within 1e-5 with every entry in [0, 1], and the
  /// id/label/probability extents must agree.
  void validate() const;
};

/// CSV layout: optional leading "# config_hash=<hex>" comment, then a header
/// row "sample_id,true_label,p_<class0>,...", probabilities printed as
/// 9-decimal fixed point.
void save_prediction_csv(const PredictionMatrix& matrix, const std::filesystem::path& path,
                         const std::optional<std::string>& config_hash = std::nullopt);

struct LoadedPrediction {
  PredictionMatrix matrix;
  std::optional<std::string> config_hash;
};

LoadedPrediction load_prediction_csv(const std::filesystem::path& path,
                                     const std::string& model_id = "");

}  // namespace histobench
