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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "histobench/dataset.hpp"
#include "histobench/errors.hpp"
#include "histobench/model_zoo.hpp"
#include "histobench/prediction.hpp"

namespace histobench::trainer {

enum class Monitor { val_loss, val_accuracy };

const char* to_string(Monitor m);
Monitor monitor_from_string(const std::string& s);

struct TrainingConfig {
  int max_epochs = 175;
  int patience = 10;
  std::string optimizer = "adam";
  double learning_rate = 1e-4;
  std::string loss = "categorical_cross_entropy";
  int batch_size = 32;
  std::uint64_t seed = 42;
  Monitor monitor = Monitor::val_loss;

  void validate() const;  // throws ValidationError
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
};

struct TrainingHistory {
  std::vector<EpochRecord> records;
  int best_epoch = 0;  // 1-based; 0 when empty
  bool stopped_early = false;

  double monitored_value(const EpochRecord& r, Monitor m) const {
    return m == Monitor::val_loss ? r.val_loss : r.val_accuracy;
  }
};

/// True iff the last `patience` records all fail to improve on the best
/// monitored value preceding them. Improvement is strict: lower for loss,
/// higher for accuracy.
bool early_stop_check(const TrainingHistory& history, int patience, Monitor monitor);

/// Instrumentation seams. monitor_override replaces the measured monitored
/// value fed to the stopping rule and best-epoch tracking (epoch, measured)
/// -> substituted; the raw measurements still land in the history record.
/// on_epoch_end fires after each epoch with the live handle.
struct TrainHooks {
  std::function<double(int, double)> monitor_override;
  std::function<void(int, const models::ModelHandle&)> on_epoch_end;
};

struct TrainOutcome {
  TrainingHistory history;
  std::filesystem::path checkpoint;  // best-epoch weights, sidecar JSON alongside
};

/// Aborts on non-finite loss; carries the epochs completed so far.
class DivergedLoss : public TrainingError {
 public:
  DivergedLoss(const std::string& w, TrainingHistory partial)
      : TrainingError("DivergedLoss: " + w), history(std::move(partial)) {}
  TrainingHistory history;
};

/// Trains on the manifest's train split with validation on its val split,
/// early-stops per config, and writes the best-epoch weights to
/// <checkpoint_dir>/best.pt (+ best.json sidecar). The handle ends up with
/// the best weights restored.
TrainOutcome train(models::ModelHandle& handle, const data::DatasetManifest& manifest,
                   const TrainingConfig& config, const std::filesystem::path& checkpoint_dir,
                   const TrainHooks& hooks = {});

/// Reconstructs the checkpointed model and predicts every sample in order.
/// Columns follow class_names order; rows sum to 1 within 1e-5.
PredictionMatrix predict(const std::filesystem::path& checkpoint,
                         const std::vector<data::ImageSample>& eval_set,
                         const std::vector<std::string>& class_names, int batch_size,
                         const std::string& model_id = "");

/// Mean categorical cross-entropy of probability rows against integer labels.
double categorical_cross_entropy(const std::vector<double>& probs, std::size_t num_classes,
                                 const std::vector<int>& labels);

/// CSV layout: optional "# config_hash=" comment, header
/// "epoch,train_loss,train_accuracy,val_loss,val_accuracy", 6-decimal fixed.
void save_history_csv(const TrainingHistory& history, const std::filesystem::path& path,
                      const std::optional<std::string>& config_hash = std::nullopt);
TrainingHistory load_history_csv(const std::filesystem::path& path);

}  // namespace histobench::trainer
