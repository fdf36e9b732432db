#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "foodaug/metrics.hpp"
#include "helpers.hpp"

using namespace foodaug;

namespace {

LabelTaxonomy tax_of(std::vector<std::string> labels) {
  return LabelTaxonomy(Task::hazard_category, std::move(labels));
}

// Independent oracle: per-class scores computed straight from the label
// lists, never touching ConfusionMatrix. Fractions, not percentages.
struct OracleScores {
  double accuracy = 0.0;
  double macro_p = 0.0, macro_r = 0.0, macro_f1 = 0.0;
};

OracleScores brute_force_metrics(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& pred,
                                 const std::vector<std::string>& labels) {
  OracleScores out;
  size_t correct = 0;
  for (size_t i = 0; i < gold.size(); ++i)
    if (gold[i] == pred[i]) ++correct;
  out.accuracy = gold.empty() ? 0.0 : static_cast<double>(correct) / gold.size();
  for (const auto& label : labels) {
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
      bool is_gold = gold[i] == label;
      bool is_pred = pred[i] == label;
      if (is_gold && is_pred) ++tp;
      if (!is_gold && is_pred) ++fp;
      if (is_gold && !is_pred) ++fn;
    }
    double p = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
    double r = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
    double f = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
    out.macro_p += p;
    out.macro_r += r;
    out.macro_f1 += f;
  }
  out.macro_p /= labels.size();
  out.macro_r /= labels.size();
  out.macro_f1 /= labels.size();
  return out;
}

MetricsReport report_with(Task task, const std::string& model, bool augmented,
                          double p, double r, double acc, double f1,
                          double seconds = 0.0) {
  MetricsReport rep;
  rep.task = task;
  rep.model_id = model;
  rep.augmented = augmented;
  rep.metrics.macro_precision = p;
  rep.metrics.macro_recall = r;
  rep.metrics.accuracy = acc;
  rep.metrics.macro_f1 = f1;
  rep.timing.total_seconds = seconds;
  return rep;
}

}  // namespace

TEST_CASE("confusion matrix counts gold rows and predicted columns") {
  auto tax = tax_of({"a", "b"});
  ConfusionMatrix cm = confusion({"a", "a", "b"}, {"a", "b", "b"}, tax);
  CHECK(cm.counts[0][0] == 1);
  CHECK(cm.counts[0][1] == 1);
  CHECK(cm.counts[1][0] == 0);
  CHECK(cm.counts[1][1] == 1);
  CHECK(cm.total() == 3);
  CHECK(cm.trace() == 2);
}

TEST_CASE("identical gold and predictions give a diagonal matrix") {
  auto tax = tax_of({"a", "b", "c"});
  std::vector<std::string> labels{"a", "b", "c", "b", "a"};
  ConfusionMatrix cm = confusion(labels, labels, tax);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j)
      CHECK(cm.counts[i][j] == (i == j ? cm.counts[i][i] : 0));
  MacroMetrics m = macro_metrics(cm);
  CHECK(m.accuracy == 100.0);
  CHECK(m.macro_precision == 100.0);
  CHECK(m.macro_recall == 100.0);
  CHECK(m.macro_f1 == 100.0);
}

TEST_CASE("empty inputs") {
  auto tax = tax_of({"a", "b"});
  ConfusionMatrix cm = confusion({}, {}, tax);
  CHECK(cm.total() == 0);
  CHECK_THROWS_AS(macro_metrics(cm), Error);
  CHECK_THROWS_AS(confusion({"a"}, {}, tax), Error);
}

TEST_CASE("uniform 2x2 matrix scores 50 across the board") {
  auto tax = tax_of({"a", "b"});
  ConfusionMatrix cm(tax);
  cm.counts = {{1, 1}, {1, 1}};
  MacroMetrics m = macro_metrics(cm);
  CHECK(m.accuracy == Catch::Approx(50.0));
  CHECK(m.macro_precision == Catch::Approx(50.0));
  CHECK(m.macro_recall == Catch::Approx(50.0));
  CHECK(m.macro_f1 == Catch::Approx(50.0));
}

TEST_CASE("absent classes contribute zeros to the macro average") {
  auto tax = tax_of({"a", "b", "ghost"});
  ConfusionMatrix cm = confusion({"a", "b"}, {"a", "b"}, tax);
  MacroMetrics m = macro_metrics(cm);
  CHECK(m.accuracy == 100.0);
  // Two perfect classes and one absent class: macro = 2/3 of 100.
  CHECK(m.macro_f1 == Catch::Approx(200.0 / 3.0));
  CHECK(m.per_class[2].precision == 0.0);
  CHECK(m.per_class[2].recall == 0.0);
  CHECK(m.per_class[2].f1 == 0.0);
}

TEST_CASE("macro metrics agree with the brute-force oracle on random data") {
  std::mt19937_64 rng(20240601);
  for (int round = 0; round < 1000; ++round) {
    size_t k = 2 + rng() % 24;  // 2..25 classes
    std::vector<std::string> labels;
    for (size_t i = 0; i < k; ++i) labels.push_back("c" + std::to_string(i));
    size_t n = 1 + rng() % 500;
    std::vector<std::string> gold, pred;
    for (size_t i = 0; i < n; ++i) {
      gold.push_back(labels[rng() % k]);
      pred.push_back(labels[rng() % k]);
    }
    auto tax = tax_of(labels);
    MacroMetrics m = macro_metrics(confusion(gold, pred, tax));
    OracleScores oracle = brute_force_metrics(gold, pred, labels);
    CHECK(m.accuracy / 100.0 == Catch::Approx(oracle.accuracy).margin(1e-9));
    CHECK(m.macro_precision / 100.0 == Catch::Approx(oracle.macro_p).margin(1e-9));
    CHECK(m.macro_recall / 100.0 == Catch::Approx(oracle.macro_r).margin(1e-9));
    CHECK(m.macro_f1 / 100.0 == Catch::Approx(oracle.macro_f1).margin(1e-9));
    CHECK(m.macro_f1 <= 100.0 + 1e-12);
  }
}

TEST_CASE("metrics are invariant under joint permutation") {
  std::mt19937_64 rng(99);
  std::vector<std::string> labels{"a", "b", "c", "d"};
  auto tax = tax_of(labels);
  std::vector<std::string> gold, pred;
  for (int i = 0; i < 200; ++i) {
    gold.push_back(labels[rng() % 4]);
    pred.push_back(labels[rng() % 4]);
  }
  MacroMetrics before = macro_metrics(confusion(gold, pred, tax));
  std::vector<size_t> order(gold.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::string> gold2, pred2;
  for (size_t i : order) {
    gold2.push_back(gold[i]);
    pred2.push_back(pred[i]);
  }
  MacroMetrics after = macro_metrics(confusion(gold2, pred2, tax));
  CHECK(before.accuracy == after.accuracy);
  CHECK(before.macro_precision == after.macro_precision);
  CHECK(before.macro_recall == after.macro_recall);
  CHECK(before.macro_f1 == after.macro_f1);
}

TEST_CASE("macro F1 is 100 only for perfect diagonal predictions") {
  auto tax = tax_of({"a", "b"});
  ConfusionMatrix diag(tax);
  diag.counts = {{3, 0}, {0, 2}};
  CHECK(macro_metrics(diag).macro_f1 == 100.0);

  ConfusionMatrix off(tax);
  off.counts = {{3, 1}, {0, 2}};
  CHECK(macro_metrics(off).macro_f1 < 100.0);

  // Diagonal but one taxonomy class untouched: the zero row drags macro down.
  auto tax3 = tax_of({"a", "b", "ghost"});
  ConfusionMatrix partial(tax3);
  partial.counts = {{3, 0, 0}, {0, 2, 0}, {0, 0, 0}};
  CHECK(macro_metrics(partial).macro_f1 < 100.0);
}

TEST_CASE("average F1 reproduces the reported aggregation") {
  // Macro F1 values of the augmented runs across the two tasks.
  CHECK(average_f1(std::vector<double>{77.40, 76.26}) == Catch::Approx(76.83).margin(1e-9));
  CHECK(average_f1(std::vector<double>{78.11, 78.10}) == Catch::Approx(78.105).margin(1e-9));
  CHECK(average_f1(std::vector<double>{42.5}) == Catch::Approx(42.5));
  CHECK_THROWS_AS(average_f1(std::vector<double>{}), Error);
  CHECK_THROWS_AS(average_f1(std::vector<MetricsReport>{}), Error);

  std::vector<MetricsReport> reports{
      report_with(Task::hazard_category, "m", true, 0, 0, 0, 77.40),
      report_with(Task::product_category, "m", true, 0, 0, 0, 76.26)};
  double forward = average_f1(reports);
  std::swap(reports[0], reports[1]);
  CHECK(average_f1(reports) == forward);
}

TEST_CASE("compare_runs reproduces the published deltas") {
  // Hand-entered metric grid of the reference study (percent).
  auto rob_haz_without = report_with(Task::hazard_category, "roberta", false,
                                     74.48, 73.59, 93.28, 73.82, 100.0);
  auto rob_haz_with = report_with(Task::hazard_category, "roberta", true,
                                  77.21, 78.18, 94.48, 77.40, 130.0);
  auto flan_haz_without = report_with(Task::hazard_category, "flan_t5", false,
                                      73.67, 76.58, 94.08, 74.90);
  auto flan_haz_with = report_with(Task::hazard_category, "flan_t5", true,
                                   79.73, 78.73, 94.88, 78.11);
  auto rob_prod_without = report_with(Task::product_category, "roberta", false,
                                      72.16, 74.32, 79.84, 71.82);
  auto rob_prod_with = report_with(Task::product_category, "roberta", true,
                                   77.45, 76.27, 80.24, 76.26);
  auto flan_prod_without = report_with(Task::product_category, "flan_t5", false,
                                       80.68, 75.98, 81.14, 77.38);
  auto flan_prod_with = report_with(Task::product_category, "flan_t5", true,
                                    84.23, 75.77, 80.54, 78.10);

  CHECK(compare_runs(rob_haz_without, rob_haz_with).d_f1 ==
        Catch::Approx(3.58).margin(1e-9));
  CHECK(compare_runs(flan_haz_without, flan_haz_with).d_f1 ==
        Catch::Approx(3.21).margin(1e-9));
  CHECK(compare_runs(rob_prod_without, rob_prod_with).d_f1 ==
        Catch::Approx(4.44).margin(1e-9));
  CHECK(compare_runs(flan_prod_without, flan_prod_with).d_f1 ==
        Catch::Approx(0.72).margin(1e-9));
  // Augmentation may lower a metric; deltas are signed.
  CHECK(compare_runs(flan_prod_without, flan_prod_with).d_accuracy ==
        Catch::Approx(-0.60).margin(1e-9));
  CHECK(compare_runs(rob_haz_without, rob_haz_with).d_training_seconds ==
        Catch::Approx(30.0));

  SECTION("identical runs give zero deltas") {
    auto a = rob_haz_without;
    auto b = rob_haz_without;
    b.augmented = true;
    DeltaReport d = compare_runs(a, b);
    CHECK(d.d_f1 == 0.0);
    CHECK(d.d_accuracy == 0.0);
    CHECK(d.d_precision == 0.0);
    CHECK(d.d_recall == 0.0);
  }

  SECTION("mismatched task or model is an error") {
    CHECK_THROWS_AS(compare_runs(rob_haz_without, rob_prod_with), Error);
    CHECK_THROWS_AS(compare_runs(rob_haz_without, flan_haz_with), Error);
    CHECK_THROWS_AS(compare_runs(rob_haz_without, rob_haz_without), Error);
  }
}

TEST_CASE("metrics report file round-trip keeps the headline numbers") {
  testutil::TempDir tmp("metrics");
  MetricsReport rep = report_with(Task::product_category, "baseline", true, 55.5,
                                  44.25, 80.10, 49.31);
  rep.eval_split = "test";
  rep.unresolved_generations = 3;
  rep.timing.dataset_size = 123;
  rep.timing.optimizer_steps = 456;
  rep.timing.backend = "linear_baseline";
  rep.metrics.per_class.push_back({"x", 10.0, 20.0, 13.33, 7});
  write_metrics_report(rep, tmp.str("r.txt"));
  MetricsReport back = read_metrics_report(tmp.str("r.txt"));
  CHECK(back.task == rep.task);
  CHECK(back.model_id == rep.model_id);
  CHECK(back.augmented == rep.augmented);
  CHECK(back.eval_split == "test");
  CHECK(back.unresolved_generations == 3);
  CHECK(back.metrics.macro_f1 == Catch::Approx(49.31));
  CHECK(back.timing.dataset_size == 123);
  REQUIRE(back.metrics.per_class.size() == 1);
  CHECK(back.metrics.per_class[0].support == 7);
}
