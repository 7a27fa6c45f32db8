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
#include "histobench/metrics.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "util.hpp"

namespace histobench::metrics {

namespace {

using nlohmann::json;

std::vector<std::string> numbered_names(int m) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    names.push_back("class" + std::to_string(i));
  }
  return names;
}

}  // namespace

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t c = 0; c < m(); ++c) {
    t += at(c, c);
  }
  return t;
}

std::int64_t ConfusionMatrix::row_sum(std::size_t predicted) const {
  std::int64_t t = 0;
  for (std::size_t a = 0; a < m(); ++a) {
    t += at(predicted, a);
  }
  return t;
}

std::int64_t ConfusionMatrix::col_sum(std::size_t actual) const {
  std::int64_t t = 0;
  for (std::size_t p = 0; p < m(); ++p) {
    t += at(p, actual);
  }
  return t;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& actual,
                                 const std::vector<std::string>& class_names) {
  if (predicted.size() != actual.size()) {
    throw LengthMismatch("predicted has " + std::to_string(predicted.size()) + " labels, actual has " +
                         std::to_string(actual.size()));
  }
  const auto m = class_names.size();
  ConfusionMatrix cm{class_names, std::vector<std::int64_t>(m * m, 0)};
  for (std::size_t r = 0; r < predicted.size(); ++r) {
    const int p = predicted[r];
    const int a = actual[r];
    if (p < 0 || static_cast<std::size_t>(p) >= m || a < 0 || static_cast<std::size_t>(a) >= m) {
      throw LabelOutOfRange("row " + std::to_string(r) + ": predicted=" + std::to_string(p) +
                            " actual=" + std::to_string(a) + " with m=" + std::to_string(m));
    }
    ++cm.counts[static_cast<std::size_t>(p) * m + static_cast<std::size_t>(a)];
  }
  return cm;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& actual,
                                 int num_classes) {
  return confusion_matrix(predicted, actual, numbered_names(num_classes));
}

double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (cm.m() == 0 || total == 0) {
    throw EmptyMatrix("accuracy needs a nonempty confusion matrix");
  }
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

ClassificationReport per_class_metrics(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (cm.m() == 0 || total == 0) {
    throw EmptyMatrix("per_class_metrics needs a nonempty confusion matrix");
  }

  ClassificationReport report;
  report.class_names = cm.class_names;
  report.accuracy = accuracy(cm);

  auto safe_rate = [&report](std::int64_t num, std::int64_t den) {
    if (den == 0) {
      report.zero_division = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };

  for (std::size_t c = 0; c < cm.m(); ++c) {
    const std::int64_t tp = cm.at(c, c);
    const std::int64_t fp = cm.row_sum(c) - tp;
    const std::int64_t fn = cm.col_sum(c) - tp;

    ClassMetrics cmx;
    cmx.precision = safe_rate(tp, tp + fp);
    cmx.recall = safe_rate(tp, tp + fn);
    const double pr = cmx.precision + cmx.recall;
    if (pr == 0.0) {
      report.zero_division = true;
      cmx.f1 = 0.0;
    } else {
      cmx.f1 = 2.0 * cmx.precision * cmx.recall / pr;
    }
    cmx.support = cm.col_sum(c);
    report.per_class.push_back(cmx);

    report.macro_precision += cmx.precision;
    report.macro_recall += cmx.recall;
    report.macro_f1 += cmx.f1;
  }

  const auto m = static_cast<double>(cm.m());
  report.macro_precision /= m;
  report.macro_recall /= m;
  report.macro_f1 /= m;
  return report;
}

std::vector<CurveSeries> curves(const trainer::TrainingHistory& history) {
  std::vector<CurveSeries> out = {
      {"loss", "train", {}}, {"loss", "val", {}}, {"accuracy", "train", {}}, {"accuracy", "val", {}}};
  for (const auto& r : history.records) {
    out[0].points.emplace_back(r.epoch, r.train_loss);
    out[1].points.emplace_back(r.epoch, r.val_loss);
    out[2].points.emplace_back(r.epoch, r.train_accuracy);
    out[3].points.emplace_back(r.epoch, r.val_accuracy);
  }
  return out;
}

int percent_round(double fraction) {
  return static_cast<int>(std::floor(fraction * 100.0 + 0.5));
}

void save_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path,
                        const std::optional<std::string>& config_hash) {
  std::ostringstream out;
  if (config_hash) {
    out << "# config_hash=" << *config_hash << "\n";
  }
  out << "predicted\\actual";
  for (const auto& name : cm.class_names) {
    out << "," << name;
  }
  out << "\n";
  for (std::size_t p = 0; p < cm.m(); ++p) {
    out << cm.class_names[p];
    for (std::size_t a = 0; a < cm.m(); ++a) {
      out << "," << cm.at(p, a);
    }
    out << "\n";
  }
  util::write_text_file(path, out.str());
}

ConfusionMatrix load_confusion_csv(const std::filesystem::path& path) {
  std::istringstream in(util::read_text_file(path));
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    rows.push_back(util::split_csv_line(line));
  }
  if (rows.empty()) {
    throw IoFailure("empty confusion CSV " + path.string());
  }
  ConfusionMatrix cm;
  cm.class_names.assign(rows[0].begin() + 1, rows[0].end());
  const auto m = cm.class_names.size();
  if (rows.size() != m + 1) {
    throw IoFailure("confusion CSV " + path.string() + " has " + std::to_string(rows.size() - 1) +
                    " rows for " + std::to_string(m) + " classes");
  }
  for (std::size_t p = 0; p < m; ++p) {
    const auto& row = rows[p + 1];
    if (row.size() != m + 1 || row[0] != cm.class_names[p]) {
      throw IoFailure("malformed confusion CSV row in " + path.string());
    }
    for (std::size_t a = 0; a < m; ++a) {
      cm.counts.push_back(std::stoll(row[a + 1]));
    }
  }
  return cm;
}

void save_report_json(const ClassificationReport& report, const std::filesystem::path& path,
                      const std::optional<std::string>& config_hash) {
  auto rounded = [](double v) { return std::round(v * 1e6) / 1e6; };
  json per_class = json::object();
  for (std::size_t c = 0; c < report.class_names.size(); ++c) {
    const auto& cmx = report.per_class[c];
    per_class[report.class_names[c]] = {{"precision", rounded(cmx.precision)},
                                        {"recall", rounded(cmx.recall)},
                                        {"f1", rounded(cmx.f1)},
                                        {"support", cmx.support}};
  }
  json doc = {{"class_names", report.class_names},
              {"per_class", per_class},
              {"accuracy", rounded(report.accuracy)},
              {"macro",
               {{"precision", rounded(report.macro_precision)},
                {"recall", rounded(report.macro_recall)},
                {"f1", rounded(report.macro_f1)}}},
              {"zero_division", report.zero_division}};
  if (config_hash) {
    doc["config_hash"] = *config_hash;
  }
  util::write_text_file(path, doc.dump(2) + "\n");
}

ClassificationReport load_report_json(const std::filesystem::path& path) {
  json doc = json::parse(util::read_text_file(path));
  ClassificationReport report;
  report.class_names = doc.at("class_names").get<std::vector<std::string>>();
  for (const auto& name : report.class_names) {
    const auto& entry = doc.at("per_class").at(name);
    report.per_class.push_back({entry.at("precision").get<double>(), entry.at("recall").get<double>(),
                                entry.at("f1").get<double>(), entry.at("support").get<std::int64_t>()});
  }
  report.accuracy = doc.at("accuracy").get<double>();
  report.macro_precision = doc.at("macro").at("precision").get<double>();
  report.macro_recall = doc.at("macro").at("recall").get<double>();
  report.macro_f1 = doc.at("macro").at("f1").get<double>();
  report.zero_division = doc.at("zero_division").get<bool>();
  return report;
}

std::string render_report_text(const std::string& title, const ClassificationReport& report) {
  std::ostringstream out;
  out << title << "\n";
  auto cell = [](const std::string& s) {
    std::string padded = s;
    padded.resize(std::max<std::size_t>(12, padded.size()), ' ');
    return padded;
  };
  out << cell("");
  for (const auto& name : report.class_names) {
    out << cell(name);
  }
  out << "\n" << cell("Precision");
  for (const auto& c : report.per_class) {
    out << cell(std::to_string(percent_round(c.precision)) + "%");
  }
  out << "\n" << cell("Recall");
  for (const auto& c : report.per_class) {
    out << cell(std::to_string(percent_round(c.recall)) + "%");
  }
  out << "\n" << cell("F1-score");
  for (const auto& c : report.per_class) {
    out << cell(std::to_string(percent_round(c.f1)) + "%");
  }
  out << "\n" << cell("Support (N)");
  for (const auto& c : report.per_class) {
    out << cell(std::to_string(c.support));
  }
  out << "\n";
  out << "Accuracy: " << util::fixed(report.accuracy, 6) << " (" << percent_round(report.accuracy)
      << "%)\n";
  if (report.zero_division) {
    out << "Warning: at least one rate had a zero denominator and reports 0.\n";
  }
  return out.str();
}

}  // namespace histobench::metrics
