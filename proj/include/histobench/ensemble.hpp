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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "histobench/errors.hpp"
#include "histobench/prediction.hpp"

namespace histobench::ensemble {

/// Sum-of-probabilities ensemble over named member models. Members are
/// weighted equally unless an explicit weight vector is given.
struct EnsembleSpec {
  std::string name = "DIR";
  std::vector<std::string> members{"densenet121_scratch", "inceptionv3_scratch",
                                   "resnet18_scratch"};
  std::string aggregation = "sum_of_probabilities";
  std::vector<double> weights;  // empty -> all 1.0

  void validate() const;  // throws ValidationError
};

struct EnsembleResult {
  std::vector<std::string> sample_ids;
  std::vector<std::string> class_names;
  std::vector<int> true_labels;
  std::vector<double> raw_sums;    // N x m: sum over members of each class probability
  std::vector<double> normalized;  // N x m: raw_sums row divided by its row total
  std::vector<int> predicted;      // argmax of each normalized row, ties to lowest index

  std::size_t rows() const { return sample_ids.size(); }
  std::size_t cols() const { return class_names.size(); }
};

/// Reorders every matrix to the first one's sample order and verifies they
/// agree on sample set, class order, and true labels.
std::vector<PredictionMatrix> align_matrices(const std::vector<PredictionMatrix>& matrices);

/// raw[r][i] = sum_j w_j * s_ij over the aligned member matrices.
std::vector<double> sum_of_probabilities(const std::vector<PredictionMatrix>& aligned,
                                         const std::vector<double>& weights = {});

/// Divides each row by its total and takes the argmax. The per-row divisor is
/// positive, so the argmax matches the raw row's argmax.
void normalize_and_predict(const std::vector<double>& raw_sums, std::size_t num_classes,
                           std::vector<double>& normalized, std::vector<int>& predicted);

/// align -> sum -> normalize_and_predict over exactly spec.members.
EnsembleResult ensemble_predict(const std::vector<PredictionMatrix>& matrices,
                                const EnsembleSpec& spec);

/// Repackages the normalized rows as a PredictionMatrix so the metrics
/// module consumes ensembles and single models uniformly.
PredictionMatrix as_prediction_matrix(const EnsembleResult& result, const std::string& model_id);

/// CSV layout: optional "# config_hash=" comment, header
/// "sample_id,true_label,predicted_label,raw_sum_<c>...,normalized_<c>...".
void save_ensemble_csv(const EnsembleResult& result, const std::filesystem::path& path,
                       const std::optional<std::string>& config_hash = std::nullopt);
EnsembleResult load_ensemble_csv(const std::filesystem::path& path);

}  // namespace histobench::ensemble
