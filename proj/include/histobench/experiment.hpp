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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "histobench/config.hpp"

namespace histobench::bench {

struct StepOptions {
  bool resume = false;
  bool augment_eval = false;                              // also expand val/test for evaluation
  std::optional<std::filesystem::path> reject_log;        // default <output_dir>/rejects.csv
  std::optional<std::vector<std::string>> run_filter;     // run ids; empty optional = all
  bool quiet = false;
};

struct RunArtifacts {
  std::filesystem::path checkpoint;      // checkpoints/<run>/best.pt
  std::filesystem::path history_csv;
  std::filesystem::path prediction_csv;
  std::filesystem::path confusion_csv;
  std::filesystem::path report_json;
  std::vector<std::filesystem::path> curve_files;  // plot PNGs and their data sidecars
};

struct EnsembleArtifacts {
  std::filesystem::path result_csv;
  std::filesystem::path prediction_csv;  // normalized rows as a PredictionMatrix
  std::filesystem::path confusion_csv;
  std::filesystem::path report_json;
};

/// One line of the accuracy comparison table (runs first, then ensembles).
struct ComparisonRow {
  std::string name;
  std::string mode;  // "scratch" | "transfer" | "ensemble"
  std::optional<double> train_accuracy_best;
  std::optional<double> train_accuracy_final;
  double model_accuracy = 0.0;  // recomputed from the persisted prediction CSV
};

struct ReportBundle {
  std::string config_hash;
  std::filesystem::path output_dir;
  std::filesystem::path manifest_path;
  std::map<std::string, RunArtifacts> runs;
  std::map<std::string, EnsembleArtifacts> ensembles;
  std::vector<ComparisonRow> comparison;
  bool partial = false;
  std::vector<std::string> failures;  // "<run id>: <error>" for every failed step
};

/// scan -> validate -> split -> augment; writes <output_dir>/manifest.json and
/// the reject log, and returns the prepared manifest.
data::DatasetManifest prepare_dataset(const ExperimentConfig& config, const StepOptions& opts = {});

/// Trains the selected runs (all by default). With resume, runs whose
/// checkpoint and prediction CSV already exist with a matching config hash
/// are left untouched.
void train_runs(const ExperimentConfig& config, const StepOptions& opts = {});

/// Writes the test-split prediction CSV for every selected run.
void predict_runs(const ExperimentConfig& config, const StepOptions& opts = {});

/// Aggregates member prediction CSVs for every declared ensemble.
void run_ensembles(const ExperimentConfig& config, const StepOptions& opts = {});

/// Recomputes metrics from the persisted artifacts and assembles the bundle
/// (comparison rows, per-run/per-ensemble reports, bundle.json).
ReportBundle collect_bundle(const ExperimentConfig& config, const StepOptions& opts = {});

/// Full pipeline: prepare + train + predict + ensembles + bundle. A failed
/// run is recorded in bundle.failures and the remaining runs still execute.
ReportBundle run_experiment(const ExperimentConfig& config, const StepOptions& opts = {});

enum class ReportFormat { text, json, plots };

/// Emits the requested formats under <output_dir> and returns every file
/// written. Filenames are deterministic.
std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle,
                                               const std::set<ReportFormat>& formats);

void save_bundle_json(const ReportBundle& bundle, const std::filesystem::path& path);
ReportBundle load_bundle_json(const std::filesystem::path& path);

}  // namespace histobench::bench
