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
#include "histobench/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "util.hpp"

namespace histobench {

namespace {
constexpr double kRowSumTolerance = 1e-5;
constexpr const char* kHashPrefix = "# config_hash=";
}  // namespace

int PredictionMatrix::argmax_row(std::size_t r) const {
  const auto m = cols();
  int best = 0;
  for (std::size_t c = 1; c < m; ++c) {
    if (at(r, c) > at(r, best)) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

void PredictionMatrix::validate() const {
  const auto n = rows();
  const auto m = cols();
  if (m == 0) {
    throw ShapeMismatch("prediction matrix has no classes");
  }
  if (true_labels.size() != n || probs.size() != n * m) {
    throw ShapeMismatch("prediction matrix extents disagree: " + std::to_string(n) + " ids, " +
                        std::to_string(true_labels.size()) + " labels, " + std::to_string(probs.size()) +
                        " probabilities for m=" + std::to_string(m));
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (true_labels[r] < 0 || static_cast<std::size_t>(true_labels[r]) >= m) {
      throw LabelOutOfRange("sample " + sample_ids[r]);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const double v = at(r, c);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ShapeMismatch("probability out of [0,1] for sample " + sample_ids[r]);
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ShapeMismatch("row for sample " + sample_ids[r] + " sums to " + util::fixed(sum, 9));
    }
  }
}

void save_prediction_csv(const PredictionMatrix& matrix, const std::filesystem::path& path,
                         const std::optional<std::string>& config_hash) {
  std::ostringstream out;
  if (config_hash) {
    out << kHashPrefix << *config_hash << "\n";
  }
  out << "sample_id,true_label";
  for (const auto& name : matrix.class_names) {
    out << ",p_" << name;
  }
  out << "\n";
  const auto m = matrix.cols();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out << matrix.sample_ids[r] << "," << matrix.class_names[static_cast<std::size_t>(matrix.true_labels[r])];
    for (std::size_t c = 0; c < m; ++c) {
      out << "," << util::fixed(matrix.at(r, c), 9);
    }
    out << "\n";
  }
  util::write_text_file(path, out.str());
}

LoadedPrediction load_prediction_csv(const std::filesystem::path& path, const std::string& model_id) {
  std::istringstream in(util::read_text_file(path));
  LoadedPrediction loaded;
  auto& matrix = loaded.matrix;
  matrix.model_id = model_id.empty() ? path.stem().string() : model_id;

  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      const std::string prefix = kHashPrefix;
      if (line.rfind(prefix, 0) == 0) {
        std::string value = line.substr(prefix.size());
        while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) {
          value.pop_back();
        }
        loaded.config_hash = value;
      }
      continue;
    }
    auto fields = util::split_csv_line(line);
    if (!header_seen) {
      if (fields.size() < 3 || fields[0] != "sample_id" || fields[1] != "true_label") {
        throw IoFailure("unexpected prediction CSV header in " + path.string());
      }
      for (std::size_t i = 2; i < fields.size(); ++i) {
        if (fields[i].rfind("p_", 0) != 0) {
          throw IoFailure("unexpected probability column '" + fields[i] + "' in " + path.string());
        }
        matrix.class_names.push_back(fields[i].substr(2));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != matrix.class_names.size() + 2) {
      throw IoFailure("malformed prediction CSV row in " + path.string());
    }
    matrix.sample_ids.push_back(fields[0]);
    auto it = std::find(matrix.class_names.begin(), matrix.class_names.end(), fields[1]);
    if (it == matrix.class_names.end()) {
      throw IoFailure("unknown true_label '" + fields[1] + "' in " + path.string());
    }
    matrix.true_labels.push_back(static_cast<int>(it - matrix.class_names.begin()));
    for (std::size_t c = 0; c < matrix.class_names.size(); ++c) {
      matrix.probs.push_back(std::stod(fields[c + 2]));
    }
  }
  if (!header_seen) {
    throw IoFailure("prediction CSV " + path.string() + " has no header row");
  }
  matrix.validate();
  return loaded;
}

}  // namespace histobench
