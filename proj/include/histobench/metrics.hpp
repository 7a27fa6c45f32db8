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

#include "histobench/errors.hpp"
#include "histobench/trainer.hpp"

namespace histobench::metrics {

/// m x m count table with rows = predicted class and columns = actual class.
/// Under this orientation column c sums to the support of class c. The
/// orientation is load-bearing for every derived rate; serialization labels
/// both axes to prevent silent transposition.
struct ConfusionMatrix {
  std::vector<std::string> class_names;
  std::vector<std::int64_t> counts;  // m x m, row-major

  std::size_t m() const { return class_names.size(); }
  std::int64_t at(std::size_t predicted, std::size_t actual) const {
    return counts[predicted * m() + actual];
  }
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(std::size_t predicted) const;
  std::int64_t col_sum(std::size_t actual) const;  // support of class `actual`

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct ClassificationReport {
  std::vector<std::string> class_names;
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  /// Set when any rate had a zero denominator (the rate itself reports 0).
  bool zero_division = false;
};

struct CurveSeries {
  std::string metric;  // "loss" | "accuracy"
  std::string split;   // "train" | "val"
  std::vector<std::pair<int, double>> points;  // (epoch, value), epochs strictly increasing
};

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& actual,
                                 const std::vector<std::string>& class_names);
ConfusionMatrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& actual,
                                 int num_classes);

/// trace / total.
double accuracy(const ConfusionMatrix& cm);

/// Per class c: TP = counts[c][c], FP = row c sum - TP, FN = column c sum - TP,
/// precision = TP/(TP+FP), recall = TP/(TP+FN), f1 = 2PR/(P+R),
/// support = column c sum. Zero denominators yield 0 and set zero_division.
ClassificationReport per_class_metrics(const ConfusionMatrix& cm);

/// Projects a history into four epoch-aligned series (train/val x loss/accuracy).
std::vector<CurveSeries> curves(const trainer::TrainingHistory& history);

/// Integer percent, rounded half-up, as the comparison tables print.
int percent_round(double fraction);

/// CSV with a labeled header row and column ("predicted\actual").
void save_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path,
                        const std::optional<std::string>& config_hash = std::nullopt);
ConfusionMatrix load_confusion_csv(const std::filesystem::path& path);

void save_report_json(const ClassificationReport& report, const std::filesystem::path& path,
                      const std::optional<std::string>& config_hash = std::nullopt);
ClassificationReport load_report_json(const std::filesystem::path& path);

/// Text table in the per-architecture layout of the comparison reports:
/// one column per class, rows Precision / Recall / F1-score / Support (N),
/// rates printed as rounded percents.
std::string render_report_text(const std::string& title, const ClassificationReport& report);

}  // namespace histobench::metrics
