#pragma once

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "foodaug/error.hpp"
#include "foodaug/taxonomy.hpp"

namespace foodaug {

// Rows are gold labels, columns are predicted labels.
struct ConfusionMatrix {
  LabelTaxonomy taxonomy;
  std::vector<std::vector<size_t>> counts;

  explicit ConfusionMatrix(LabelTaxonomy tax)
      : taxonomy(std::move(tax)),
        counts(taxonomy.size(), std::vector<size_t>(taxonomy.size(), 0)) {}

  size_t total() const {
    size_t n = 0;
    for (const auto& row : counts)
      for (size_t c : row) n += c;
    return n;
  }

  size_t trace() const {
    size_t n = 0;
    for (size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
    return n;
  }
};

inline ConfusionMatrix confusion(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& pred,
                                 const LabelTaxonomy& taxonomy) {
  if (gold.size() != pred.size())
    throw Error(ErrorKind::validation,
                "confusion: gold/pred length mismatch (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + ")");
  ConfusionMatrix cm(taxonomy);
  for (size_t i = 0; i < gold.size(); ++i)
    ++cm.counts[taxonomy.index_of(gold[i])][taxonomy.index_of(pred[i])];
  return cm;
}

struct ClassScores {
  std::string label;
  double precision = 0.0;  // percent
  double recall = 0.0;
  double f1 = 0.0;
  size_t support = 0;  // gold count
};

struct MacroMetrics {
  double accuracy = 0.0;  // percent
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassScores> per_class;
};

// Per-class precision/recall with the 0-on-zero-denominator convention and
// macro averages over every taxonomy class, absent ones included. Values are
// percentages.
inline MacroMetrics macro_metrics(const ConfusionMatrix& cm) {
  size_t total = cm.total();
  if (total == 0) throw Error(ErrorKind::validation, "empty evaluation");
  const size_t k = cm.taxonomy.size();
  MacroMetrics m;
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (size_t i = 0; i < k; ++i) {
    size_t tp = cm.counts[i][i];
    size_t gold = 0, predicted = 0;
    for (size_t j = 0; j < k; ++j) {
      gold += cm.counts[i][j];
      predicted += cm.counts[j][i];
    }
    double p = predicted ? static_cast<double>(tp) / predicted : 0.0;
    double r = gold ? static_cast<double>(tp) / gold : 0.0;
    double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    sum_p += p;
    sum_r += r;
    sum_f += f;
    m.per_class.push_back(
        {cm.taxonomy.label(i), 100.0 * p, 100.0 * r, 100.0 * f, gold});
  }
  m.accuracy = 100.0 * static_cast<double>(cm.trace()) / total;
  m.macro_precision = 100.0 * sum_p / k;
  m.macro_recall = 100.0 * sum_r / k;
  m.macro_f1 = 100.0 * sum_f / k;
  return m;
}

struct TimingRecord {
  double total_seconds = 0.0;
  std::vector<double> epoch_seconds;
  size_t dataset_size = 0;
  size_t optimizer_steps = 0;
  std::string backend;
};

struct MetricsReport {
  Task task = Task::hazard_category;
  std::string model_id;
  bool augmented = false;
  std::string eval_split;  // "dev" or "test"
  MacroMetrics metrics;
  size_t unresolved_generations = 0;
  TimingRecord timing;
};

// Unweighted mean of macro F1 over the given reports.
inline double average_f1(const std::vector<MetricsReport>& reports) {
  if (reports.empty())
    throw Error(ErrorKind::validation, "average_f1 of empty report list");
  double sum = 0.0;
  for (const auto& r : reports) sum += r.metrics.macro_f1;
  return sum / static_cast<double>(reports.size());
}

inline double average_f1(const std::vector<double>& macro_f1_values) {
  if (macro_f1_values.empty())
    throw Error(ErrorKind::validation, "average_f1 of empty value list");
  double sum = std::accumulate(macro_f1_values.begin(), macro_f1_values.end(), 0.0);
  return sum / static_cast<double>(macro_f1_values.size());
}

struct DeltaReport {
  Task task = Task::hazard_category;
  std::string model_id;
  double d_accuracy = 0.0;  // with_aug - without, percentage points
  double d_precision = 0.0;
  double d_recall = 0.0;
  double d_f1 = 0.0;
  double d_training_seconds = 0.0;
};

inline DeltaReport compare_runs(const MetricsReport& without,
                                const MetricsReport& with_aug) {
  if (without.task != with_aug.task || without.model_id != with_aug.model_id)
    throw Error(ErrorKind::validation,
                "compare_runs: reports are for different task/model");
  if (without.augmented == with_aug.augmented)
    throw Error(ErrorKind::validation,
                "compare_runs: need one augmented and one plain run");
  DeltaReport d;
  d.task = without.task;
  d.model_id = without.model_id;
  d.d_accuracy = with_aug.metrics.accuracy - without.metrics.accuracy;
  d.d_precision = with_aug.metrics.macro_precision - without.metrics.macro_precision;
  d.d_recall = with_aug.metrics.macro_recall - without.metrics.macro_recall;
  d.d_f1 = with_aug.metrics.macro_f1 - without.metrics.macro_f1;
  d.d_training_seconds = with_aug.timing.total_seconds - without.timing.total_seconds;
  return d;
}

inline std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Structured text form. Wall-clock seconds deliberately stay out of this
// file (they live in the training timing sidecar) so evaluation output is
// byte-stable across reruns.
inline std::string render_metrics_report(const MetricsReport& r) {
  std::ostringstream out;
  out << "metrics-report\n";
  out << "task: " << to_string(r.task) << '\n';
  out << "model: " << r.model_id << '\n';
  out << "augmented: " << (r.augmented ? "yes" : "no") << '\n';
  out << "eval_split: " << r.eval_split << '\n';
  out << "backend: " << r.timing.backend << '\n';
  out << "train_dataset_size: " << r.timing.dataset_size << '\n';
  out << "optimizer_steps: " << r.timing.optimizer_steps << '\n';
  out << "unresolved_generations: " << r.unresolved_generations << '\n';
  out << "accuracy: " << format_percent(r.metrics.accuracy) << '\n';
  out << "macro_precision: " << format_percent(r.metrics.macro_precision) << '\n';
  out << "macro_recall: " << format_percent(r.metrics.macro_recall) << '\n';
  out << "macro_f1: " << format_percent(r.metrics.macro_f1) << '\n';
  out << "per_class:\n";
  for (const auto& c : r.metrics.per_class)
    out << "  " << c.label << "\tP=" << format_percent(c.precision)
        << "\tR=" << format_percent(c.recall) << "\tF1=" << format_percent(c.f1)
        << "\tsupport=" << c.support << '\n';
  return out.str();
}

inline void write_metrics_report(const MetricsReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write metrics report: " + path);
  out << render_metrics_report(r);
}

inline MetricsReport read_metrics_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open metrics report: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "metrics-report")
    throw Error(ErrorKind::parse, path + ": not a metrics report");
  MetricsReport r;
  while (std::getline(in, line)) {
    if (line == "per_class:") break;
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 2);
    if (key == "task") r.task = task_from_string(value);
    else if (key == "model") r.model_id = value;
    else if (key == "augmented") r.augmented = value == "yes";
    else if (key == "eval_split") r.eval_split = value;
    else if (key == "backend") r.timing.backend = value;
    else if (key == "train_dataset_size") r.timing.dataset_size = std::stoull(value);
    else if (key == "optimizer_steps") r.timing.optimizer_steps = std::stoull(value);
    else if (key == "unresolved_generations") r.unresolved_generations = std::stoull(value);
    else if (key == "accuracy") r.metrics.accuracy = std::stod(value);
    else if (key == "macro_precision") r.metrics.macro_precision = std::stod(value);
    else if (key == "macro_recall") r.metrics.macro_recall = std::stod(value);
    else if (key == "macro_f1") r.metrics.macro_f1 = std::stod(value);
  }
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    ClassScores c;
    std::istringstream ls(t);
    std::getline(ls, c.label, '\t');
    std::string part;
    while (std::getline(ls, part, '\t')) {
      if (part.rfind("P=", 0) == 0) c.precision = std::stod(part.substr(2));
      else if (part.rfind("R=", 0) == 0) c.recall = std::stod(part.substr(2));
      else if (part.rfind("F1=", 0) == 0) c.f1 = std::stod(part.substr(3));
      else if (part.rfind("support=", 0) == 0) c.support = std::stoull(part.substr(8));
    }
    r.metrics.per_class.push_back(c);
  }
  return r;
}

}  // namespace foodaug
