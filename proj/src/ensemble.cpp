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
#include "histobench/ensemble.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "util.hpp"

namespace histobench::ensemble {

void EnsembleSpec::validate() const {
  std::vector<std::string> problems;
  if (members.empty()) {
    problems.push_back("ensemble '" + name + "' needs at least one member");
  }
  std::set<std::string> unique(members.begin(), members.end());
  if (unique.size() != members.size()) {
    problems.push_back("ensemble '" + name + "' lists a member twice");
  }
  if (aggregation != "sum_of_probabilities") {
    problems.push_back("ensemble '" + name + "' has unknown aggregation '" + aggregation + "'");
  }
  if (!weights.empty() && weights.size() != members.size()) {
    problems.push_back("ensemble '" + name + "' has " + std::to_string(weights.size()) +
                       " weights for " + std::to_string(members.size()) + " members");
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      problems.push_back("ensemble '" + name + "' has a non-positive weight");
    }
  }
  if (!problems.empty()) {
    std::string joined;
    for (const auto& p : problems) {
      joined += (joined.empty() ? "" : "; ") + p;
    }
    throw ValidationError(joined);
  }
}

std::vector<PredictionMatrix> align_matrices(const std::vector<PredictionMatrix>& matrices) {
  if (matrices.empty()) {
    throw ShapeMismatch("align_matrices needs at least one matrix");
  }
  const auto& ref = matrices.front();
  ref.validate();

  std::unordered_map<std::string, std::size_t> ref_order;
  ref_order.reserve(ref.rows());
  for (std::size_t r = 0; r < ref.rows(); ++r) {
    if (!ref_order.emplace(ref.sample_ids[r], r).second) {
      throw SampleSetMismatch("duplicate sample id '" + ref.sample_ids[r] + "' in " + ref.model_id);
    }
  }

  std::vector<PredictionMatrix> aligned;
  aligned.reserve(matrices.size());
  aligned.push_back(ref);

  for (std::size_t j = 1; j < matrices.size(); ++j) {
    const auto& mat = matrices[j];
    mat.validate();
    if (mat.class_names != ref.class_names) {
      throw ClassSetMismatch(mat.model_id + " and " + ref.model_id + " disagree on class order");
    }
    if (mat.rows() != ref.rows()) {
      throw SampleSetMismatch(mat.model_id + " has " + std::to_string(mat.rows()) + " samples, " +
                              ref.model_id + " has " + std::to_string(ref.rows()));
    }

    PredictionMatrix out;
    out.model_id = mat.model_id;
    out.class_names = mat.class_names;
    out.sample_ids = ref.sample_ids;
    out.true_labels.resize(ref.rows());
    out.probs.resize(mat.probs.size());

    const auto m = mat.cols();
    std::vector<bool> seen(ref.rows(), false);
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      auto it = ref_order.find(mat.sample_ids[r]);
      if (it == ref_order.end()) {
        throw SampleSetMismatch("sample '" + mat.sample_ids[r] + "' from " + mat.model_id +
                                " is absent from " + ref.model_id);
      }
      const std::size_t dst = it->second;
      if (seen[dst]) {
        throw SampleSetMismatch("duplicate sample id '" + mat.sample_ids[r] + "' in " + mat.model_id);
      }
      seen[dst] = true;
      if (mat.true_labels[r] != ref.true_labels[dst]) {
        throw LabelDisagreement("sample '" + mat.sample_ids[r] + "': " + mat.model_id + " says " +
                                mat.class_names[static_cast<std::size_t>(mat.true_labels[r])] + ", " +
                                ref.model_id + " says " +
                                ref.class_names[static_cast<std::size_t>(ref.true_labels[dst])]);
      }
      out.true_labels[dst] = mat.true_labels[r];
      std::copy_n(mat.probs.begin() + static_cast<std::ptrdiff_t>(r * m), m,
                  out.probs.begin() + static_cast<std::ptrdiff_t>(dst * m));
    }
    aligned.push_back(std::move(out));
  }
  return aligned;
}

std::vector<double> sum_of_probabilities(const std::vector<PredictionMatrix>& aligned,
                                         const std::vector<double>& weights) {
  if (aligned.empty()) {
    throw ShapeMismatch("sum_of_probabilities needs at least one matrix");
  }
  if (!weights.empty() && weights.size() != aligned.size()) {
    throw ShapeMismatch("got " + std::to_string(weights.size()) + " weights for " +
                        std::to_string(aligned.size()) + " matrices");
  }
  const auto n = aligned.front().rows();
  const auto m = aligned.front().cols();
  for (const auto& mat : aligned) {
    if (mat.rows() != n || mat.cols() != m) {
      throw ShapeMismatch("matrix " + mat.model_id + " is not aligned");
    }
  }

  std::vector<double> raw(n * m, 0.0);
  for (std::size_t j = 0; j < aligned.size(); ++j) {
    const double w = weights.empty() ? 1.0 : weights[j];
    const auto& probs = aligned[j].probs;
    for (std::size_t idx = 0; idx < raw.size(); ++idx) {
      raw[idx] += w * probs[idx];
    }
  }
  return raw;
}

void normalize_and_predict(const std::vector<double>& raw_sums, std::size_t num_classes,
                           std::vector<double>& normalized, std::vector<int>& predicted) {
  if (num_classes == 0 || raw_sums.size() % num_classes != 0) {
    throw ShapeMismatch("raw sums of size " + std::to_string(raw_sums.size()) +
                        " do not tile m=" + std::to_string(num_classes));
  }
  const std::size_t n = raw_sums.size() / num_classes;
  normalized.assign(raw_sums.size(), 0.0);
  predicted.assign(n, 0);

  for (std::size_t r = 0; r < n; ++r) {
    double row_total = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      row_total += raw_sums[r * num_classes + c];
    }
    if (!(row_total > 0.0)) {
      throw ZeroRow("row " + std::to_string(r) + " has total " + util::fixed(row_total, 9));
    }
    int best = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double v = raw_sums[r * num_classes + c] / row_total;
      normalized[r * num_classes + c] = v;
      // ties break to the lowest class index
      if (v > normalized[r * num_classes + static_cast<std::size_t>(best)]) {
        best = static_cast<int>(c);
      }
    }
    predicted[r] = best;
  }
}

EnsembleResult ensemble_predict(const std::vector<PredictionMatrix>& matrices,
                                const EnsembleSpec& spec) {
  spec.validate();

  std::vector<PredictionMatrix> members;
  members.reserve(spec.members.size());
  for (const auto& wanted : spec.members) {
    auto it = std::find_if(matrices.begin(), matrices.end(),
                           [&wanted](const PredictionMatrix& m) { return m.model_id == wanted; });
    if (it == matrices.end()) {
      throw MemberMissing("ensemble '" + spec.name + "' member '" + wanted +
                          "' has no prediction matrix");
    }
    members.push_back(*it);
  }

  auto aligned = align_matrices(members);
  auto raw = sum_of_probabilities(aligned, spec.weights);

  EnsembleResult result;
  result.sample_ids = aligned.front().sample_ids;
  result.class_names = aligned.front().class_names;
  result.true_labels = aligned.front().true_labels;
  result.raw_sums = std::move(raw);
  normalize_and_predict(result.raw_sums, result.cols(), result.normalized, result.predicted);
  return result;
}

PredictionMatrix as_prediction_matrix(const EnsembleResult& result, const std::string& model_id) {
  PredictionMatrix matrix;
  matrix.model_id = model_id;
  matrix.sample_ids = result.sample_ids;
  matrix.class_names = result.class_names;
  matrix.true_labels = result.true_labels;
  matrix.probs = result.normalized;
  matrix.validate();
  return matrix;
}

void save_ensemble_csv(const EnsembleResult& result, const std::filesystem::path& path,
                       const std::optional<std::string>& config_hash) {
  std::ostringstream out;
  if (config_hash) {
    out << "# config_hash=" << *config_hash << "\n";
  }
  out << "sample_id,true_label,predicted_label";
  for (const auto& name : result.class_names) {
    out << ",raw_sum_" << name;
  }
  for (const auto& name : result.class_names) {
    out << ",normalized_" << name;
  }
  out << "\n";
  const auto m = result.cols();
  for (std::size_t r = 0; r < result.rows(); ++r) {
    out << result.sample_ids[r] << ","
        << result.class_names[static_cast<std::size_t>(result.true_labels[r])] << ","
        << result.class_names[static_cast<std::size_t>(result.predicted[r])];
    for (std::size_t c = 0; c < m; ++c) {
      out << "," << util::fixed(result.raw_sums[r * m + c], 9);
    }
    for (std::size_t c = 0; c < m; ++c) {
      out << "," << util::fixed(result.normalized[r * m + c], 9);
    }
    out << "\n";
  }
  util::write_text_file(path, out.str());
}

EnsembleResult load_ensemble_csv(const std::filesystem::path& path) {
  std::istringstream in(util::read_text_file(path));
  EnsembleResult result;
  std::string line;
  bool header_seen = false;
  std::size_t m = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    auto fields = util::split_csv_line(line);
    if (!header_seen) {
      for (const auto& f : fields) {
        if (f.rfind("raw_sum_", 0) == 0) {
          result.class_names.push_back(f.substr(8));
        }
      }
      m = result.class_names.size();
      if (m == 0 || fields.size() != 3 + 2 * m) {
        throw IoFailure("unexpected ensemble CSV header in " + path.string());
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3 + 2 * m) {
      throw IoFailure("malformed ensemble CSV row in " + path.string());
    }
    auto class_index = [&](const std::string& name) {
      auto it = std::find(result.class_names.begin(), result.class_names.end(), name);
      if (it == result.class_names.end()) {
        throw IoFailure("unknown class '" + name + "' in " + path.string());
      }
      return static_cast<int>(it - result.class_names.begin());
    };
    result.sample_ids.push_back(fields[0]);
    result.true_labels.push_back(class_index(fields[1]));
    result.predicted.push_back(class_index(fields[2]));
    for (std::size_t c = 0; c < m; ++c) {
      result.raw_sums.push_back(std::stod(fields[3 + c]));
    }
    for (std::size_t c = 0; c < m; ++c) {
      result.normalized.push_back(std::stod(fields[3 + m + c]));
    }
  }
  if (!header_seen) {
    throw IoFailure("ensemble CSV " + path.string() + " has no header row");
  }
  return result;
}

}  // namespace histobench::ensemble
