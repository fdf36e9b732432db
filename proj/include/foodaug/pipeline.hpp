#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "foodaug/config.hpp"
#include "foodaug/corpus.hpp"
#include "foodaug/generator.hpp"
#include "foodaug/imbalance.hpp"
#include "foodaug/live_backend.hpp"
#include "foodaug/metrics.hpp"
#include "foodaug/report.hpp"
#include "foodaug/trainer.hpp"

namespace foodaug {

namespace fs = std::filesystem;

// Implements the CLI commands over a parsed config. Commands are
// independently re-runnable: each consumes its predecessor's files and
// writes deterministic artifacts under the output directory.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config) : config_(std::move(config)) {}

  const PipelineConfig& config() const { return config_; }

  fs::path out_dir(const std::string& sub) const {
    fs::path p = fs::path(config_.output_dir) / sub;
    fs::create_directories(p);
    return p;
  }

  fs::path plan_path(Task task) const {
    return fs::path(config_.output_dir) / "plans" /
           (std::string(to_string(task)) + ".plan");
  }
  fs::path augmented_corpus_path() const {
    return fs::path(config_.output_dir) / "augmented" / "train_augmented.corpus";
  }
  fs::path execution_report_path() const {
    return fs::path(config_.output_dir) / "augmented" / "execution_report.txt";
  }
  fs::path checkpoint_dir(const std::string& model_id, Task task,
                          bool augmented) const {
    return fs::path(config_.output_dir) / "checkpoints" /
           (model_id + "__" + to_string(task) + "__" + (augmented ? "aug" : "orig"));
  }
  fs::path metrics_path(const std::string& model_id, Task task, bool augmented,
                        const std::string& split) const {
    return fs::path(config_.output_dir) / "metrics" /
           (model_id + "__" + to_string(task) + "__" +
            (augmented ? "aug" : "orig") + "__" + split + ".report.txt");
  }

  Corpus load_train() const {
    return load_corpus(config_.train_csv, Split::train, config_.taxonomies);
  }
  Corpus load_dev() const {
    return load_corpus(config_.dev_csv, Split::dev, config_.taxonomies);
  }
  Corpus load_test() const {
    return load_corpus(config_.test_csv, Split::test, config_.taxonomies);
  }

  // ---- analyze ------------------------------------------------------------

  std::vector<std::string> analyze() {
    config_.require_input_paths();
    auto dir = out_dir("analyze");
    std::vector<std::string> written;
    Corpus train = load_train();
    write_distribution(train, "train", dir, &written);
    if (fs::exists(augmented_corpus_path())) {
      Corpus augmented = read_corpus(augmented_corpus_path().string());
      write_distribution(augmented, "augmented", dir, &written);
    }
    return written;
  }

  // ---- plan ---------------------------------------------------------------

  std::vector<std::string> plan() {
    config_.require_input_paths();
    Corpus train = load_train();
    auto dir = out_dir("plans");
    std::vector<std::string> written;
    std::ostringstream summary;
    summary << "# plan summary\npolicy: " << config_.policy.kind << "\n";
    for (Task task : {Task::hazard_category, Task::product_category}) {
      Distribution dist = class_distribution(train, task);
      AugmentationPlan p = build_plan_for(task, dist);
      write_plan(p, plan_path(task).string());
      written.push_back(plan_path(task).string());
      summary << to_string(task) << ": before=" << p.total_before()
              << " target=" << p.total_target()
              << " deficit=" << p.total_deficit() << "\n";
      if (config_.policy.kind == "paper_table" && task == Task::hazard_category)
        summary << "note: quoted per-class after-counts sum to "
                << p.total_target() << "; the published total states "
                << kPaperStatedAugmentedSize << "\n";
    }
    std::string summary_path = (dir / "plan_summary.txt").string();
    write_text_file(summary_path, summary.str());
    written.push_back(summary_path);
    return written;
  }

  AugmentationPlan build_plan_for(Task task, const Distribution& dist) const {
    const LabelTaxonomy& tax = config_.taxonomies.for_task(task);
    const PolicyConfig& p = config_.policy;
    if (!p.applies_to(task))
      return build_plan(dist, tax, TargetPolicy::floor_of(0));
    if (p.kind == "paper_table") return paper_reference_plan(task, dist);
    if (p.kind == "floor") return build_plan(dist, tax, TargetPolicy::floor_of(p.floor));
    if (p.kind == "multiplier")
      return build_plan(dist, tax, TargetPolicy::multiplier_of(p.factor, p.cap));
    if (p.kind == "explicit") {
      auto it = p.explicit_targets.find(task);
      if (it == p.explicit_targets.end())
        return build_plan(dist, tax, TargetPolicy::floor_of(0));
      return build_plan(dist, tax, TargetPolicy::explicit_targets(it->second));
    }
    throw Error(ErrorKind::config, "unknown policy kind: " + p.kind);
  }

  // ---- augment ------------------------------------------------------------

  ExecutionReport augment() {
    config_.require_input_paths();
    for (Task task : {Task::hazard_category, Task::product_category})
      if (!fs::exists(plan_path(task)))
        throw Error(ErrorKind::artifact,
                    "missing plan file " + plan_path(task).string() +
                        "; run the plan command first");
    Corpus train = load_train();
    Corpus dev = load_dev();
    Corpus test = load_test();
    AugmentationPlan hazard_plan = read_plan(plan_path(Task::hazard_category).string());
    AugmentationPlan product_plan = read_plan(plan_path(Task::product_category).string());

    auto cache = std::make_shared<ResponseCache>(config_.cache_dir);
    std::unique_ptr<GenerationBackend> backend = make_backend(cache);

    ExecuteOptions options;
    options.dedup_threshold = config_.generation.dedup_threshold;
    options.label_check.min_tokens = config_.generation.min_body_tokens;
    options.label_check.min_jaccard = config_.generation.min_seed_jaccard;
    options.per_request_count = config_.generation.per_request_count;
    options.failure_budget_multiplier = config_.generation.failure_budget_multiplier;
    options.max_in_flight = config_.generation.max_in_flight;
    options.decoding.temperature = config_.generation.temperature;
    options.decoding.max_output_tokens = config_.generation.max_output_tokens;
    options.generate.max_retries = config_.generation.max_retries;
    options.generate.backoff_base =
        std::chrono::milliseconds(config_.generation.backoff_ms);
    std::unique_ptr<RateLimiter> limiter;
    if (config_.generation.rate_limit_interval_ms > 0) {
      limiter = std::make_unique<RateLimiter>(
          std::chrono::milliseconds(config_.generation.rate_limit_interval_ms));
      options.generate.rate_limiter = limiter.get();
    }

    auto [synthetic, report] =
        execute_plan(train, hazard_plan, product_plan, *backend,
                     config_.prompt_template(), config_.seed, *cache, &dev, &test,
                     options);

    // Self-check: the accepted set must be leakage-free against both splits.
    size_t leaks = leakage_scan(synthetic, dev).size() +
                   leakage_scan(synthetic, test).size();
    if (leaks > 0)
      throw Error(ErrorKind::validation,
                  "leakage self-check failed: " + std::to_string(leaks) +
                      " synthetic samples duplicate held-out text");

    Corpus augmented = merge_augmented(train, synthetic);
    out_dir("augmented");
    write_corpus(augmented, augmented_corpus_path().string());
    write_text_file(execution_report_path().string(),
                    render_execution_report(report, train.size(),
                                            augmented.size(), leaks));
    return report;
  }

  std::unique_ptr<GenerationBackend> make_backend(
      std::shared_ptr<ResponseCache> cache) const {
    switch (config_.generation.backend) {
      case GenerationBackendKind::mock_paraphraser:
        return std::make_unique<MockParaphraserBackend>(config_.seed);
      case GenerationBackendKind::replay_cache:
        return std::make_unique<ReplayCacheBackend>(std::move(cache));
      case GenerationBackendKind::live_endpoint: {
        LiveEndpointConfig lc;
        lc.url = config_.generation.endpoint_url;
        if (lc.url.empty()) {
          const char* env = std::getenv(config_.generation.endpoint_url_env.c_str());
          if (!env || !*env)
            throw Error(ErrorKind::config,
                        "live endpoint URL not set; configure generation."
                        "endpoint_url or export " +
                            config_.generation.endpoint_url_env);
          lc.url = env;
        }
        if (const char* key = std::getenv(config_.generation.api_key_env.c_str()))
          lc.api_key = key;
        lc.model = config_.generation.model;
        return std::make_unique<LiveEndpointBackend>(lc);
      }
    }
    throw Error(ErrorKind::config, "unreachable backend kind");
  }

  // ---- train --------------------------------------------------------------

  struct TrainSummary {
    std::string model_id;
    Task task = Task::hazard_category;
    bool augmented = false;
    double best_dev_f1 = 0.0;
    double seconds = 0.0;
  };

  std::vector<TrainSummary> train_models() {
    config_.require_input_paths();
    if (config_.training.empty())
      throw Error(ErrorKind::config, "config has no training entries");
    Corpus original = load_train();
    Corpus dev = load_dev();
    std::optional<Corpus> augmented;
    if (fs::exists(augmented_corpus_path()))
      augmented = read_corpus(augmented_corpus_path().string());

    std::vector<TrainSummary> summaries;
    for (const auto& entry : config_.training) {
      for (bool aug : {false, true}) {
        if (aug && !augmented) continue;
        const Corpus& corpus = aug ? *augmented : original;
        TrainOutput result = train(corpus, dev, entry.config);
        auto dir = checkpoint_dir(entry.model_id, entry.config.task, aug);
        save_checkpoint(result.model, dir.string());
        write_timing(result.timing, (dir / "timing.json").string());
        summaries.push_back({entry.model_id, entry.config.task, aug,
                             result.model.best_dev_macro_f1(),
                             result.timing.total_seconds});
      }
    }
    return summaries;
  }

  // ---- evaluate -----------------------------------------------------------

  std::vector<std::string> evaluate() {
    config_.require_input_paths();
    if (config_.training.empty())
      throw Error(ErrorKind::config, "config has no training entries");
    Corpus dev = load_dev();
    Corpus test = load_test();
    out_dir("metrics");
    std::vector<std::string> written;
    for (const auto& entry : config_.training) {
      for (bool aug : {false, true}) {
        auto dir = checkpoint_dir(entry.model_id, entry.config.task, aug);
        if (!fs::exists(dir / "model.json")) {
          if (!aug)
            throw Error(ErrorKind::artifact,
                        "missing checkpoint " + dir.string() +
                            "; run the train command first");
          continue;  // augmented runs are optional
        }
        TrainedModel model = load_checkpoint(dir.string());
        for (const Corpus* corpus : {&dev, &test}) {
          MetricsReport report = evaluate_model(model, *corpus, entry.model_id, aug);
          auto path = metrics_path(entry.model_id, entry.config.task, aug,
                                   to_string(corpus->split));
          write_metrics_report(report, path.string());
          written.push_back(path.string());
        }
      }
    }
    return written;
  }

  MetricsReport evaluate_model(const TrainedModel& model, const Corpus& corpus,
                               const std::string& model_id, bool augmented) const {
    PredictResult pred = predict_detailed(model, corpus.samples);
    std::vector<std::string> gold;
    gold.reserve(corpus.size());
    for (const auto& s : corpus.samples)
      gold.push_back(model.task == Task::hazard_category ? s.hazard_label
                                                         : s.product_label);
    MetricsReport report;
    report.task = model.task;
    report.model_id = model_id;
    report.augmented = augmented;
    report.eval_split = to_string(corpus.split);
    report.metrics = macro_metrics(confusion(gold, pred.labels, model.taxonomy));
    report.unresolved_generations = pred.unresolved;
    report.timing.dataset_size = model.train_size;
    report.timing.optimizer_steps = model.optimizer_steps;
    report.timing.backend = to_string(model.backend);
    return report;
  }

  // ---- report -------------------------------------------------------------

  std::vector<std::string> report() {
    auto dir = out_dir("report");
    std::vector<std::string> written;

    // Gather metrics for the configured eval split.
    std::map<std::string, MetricsReport> by_key;
    size_t found = 0;
    for (const auto& entry : config_.training) {
      for (bool aug : {false, true}) {
        auto path = metrics_path(entry.model_id, entry.config.task, aug,
                                 config_.report_eval_split);
        if (!fs::exists(path)) continue;
        MetricsReport r = read_metrics_report(path.string());
        by_key[std::string(to_string(entry.config.task)) + "|" + entry.model_id +
               "|" + (aug ? "with" : "without")] = r;
        ++found;
      }
    }
    if (found == 0)
      throw Error(ErrorKind::artifact,
                  "no metrics reports under " +
                      (fs::path(config_.output_dir) / "metrics").string() +
                      "; run the evaluate command first");

    // (a) the metrics grid
    std::vector<std::pair<Task, std::string>> rows;
    for (const auto& entry : config_.training) {
      std::pair<Task, std::string> row{entry.config.task, entry.model_id};
      if (std::find(rows.begin(), rows.end(), row) == rows.end())
        rows.push_back(row);
    }
    std::string grid_path = (dir / "metrics_grid.txt").string();
    write_text_file(grid_path, render_metrics_grid(rows, by_key));
    written.push_back(grid_path);

    // (b) average F1 per model
    std::vector<std::string> models;
    for (const auto& entry : config_.training)
      if (std::find(models.begin(), models.end(), entry.model_id) == models.end())
        models.push_back(entry.model_id);
    BarSeries without{"without augmentation", {}};
    BarSeries with_aug{"with augmentation", {}};
    for (const auto& model : models) {
      for (bool aug : {false, true}) {
        std::vector<double> f1s;
        for (const auto& [key, r] : by_key)
          if (r.model_id == model && r.augmented == aug)
            f1s.push_back(r.metrics.macro_f1);
        double value = f1s.empty() ? 0.0 : average_f1(f1s);
        (aug ? with_aug : without).values.push_back(value);
      }
    }
    write_figure((dir / "average_f1").string(),
                 "Average macro F1 per model (" + config_.report_eval_split + ")",
                 models, {without, with_aug});
    written.push_back((dir / "average_f1.svg").string());
    written.push_back((dir / "average_f1.txt").string());

    // (c) training time comparison (volatile, read from timing sidecars)
    std::vector<std::string> time_categories;
    BarSeries time_without{"without augmentation", {}};
    BarSeries time_with{"with augmentation", {}};
    for (const auto& entry : config_.training) {
      std::string cat = entry.model_id + "/" + to_string(entry.config.task);
      if (std::find(time_categories.begin(), time_categories.end(), cat) !=
          time_categories.end())
        continue;
      time_categories.push_back(cat);
      for (bool aug : {false, true}) {
        auto path = checkpoint_dir(entry.model_id, entry.config.task, aug) /
                    "timing.json";
        double seconds = 0.0;
        if (fs::exists(path)) seconds = read_timing(path.string()).total_seconds;
        (aug ? time_with : time_without).values.push_back(seconds);
      }
    }
    write_figure((dir / "training_time").string(), "Training time (seconds)",
                 time_categories, {time_without, time_with});
    written.push_back((dir / "training_time.svg").string());
    written.push_back((dir / "training_time.txt").string());

    // (d) class distributions before/after augmentation
    Corpus train = load_train();
    std::optional<Corpus> augmented;
    if (fs::exists(augmented_corpus_path()))
      augmented = read_corpus(augmented_corpus_path().string());
    for (Task task : {Task::hazard_category, Task::product_category}) {
      Distribution before = class_distribution(train, task);
      std::vector<std::string> labels;
      {
        ImbalanceReport rep = imbalance_report(before);
        for (const auto& row : rep.rows) labels.push_back(row.label);
      }
      BarSeries before_series{"before", {}};
      for (const auto& label : labels)
        before_series.values.push_back(static_cast<double>(before.at(label)));
      std::vector<BarSeries> series{before_series};
      if (augmented) {
        Distribution after = class_distribution(*augmented, task);
        BarSeries after_series{"after", {}};
        for (const auto& label : labels)
          after_series.values.push_back(static_cast<double>(after.at(label)));
        series.push_back(after_series);
      }
      std::string stem =
          (dir / (std::string(to_string(task)) + "_before_after")).string();
      write_figure(stem,
                   std::string("Class distribution: ") + to_string(task),
                   labels, series);
      written.push_back(stem + ".svg");
      written.push_back(stem + ".txt");
    }
    return written;
  }

 private:
  void write_distribution(const Corpus& corpus, const std::string& name,
                          const fs::path& dir, std::vector<std::string>* written) {
    for (Task task : {Task::hazard_category, Task::product_category}) {
      Distribution dist = class_distribution(corpus, task);
      ImbalanceReport rep = imbalance_report(dist);
      std::string stem =
          (dir / (name + "_" + to_string(task))).string();
      std::string title = name + " " + std::string(to_string(task));
      write_text_file(stem + ".txt", render_distribution_table(title, rep));
      std::vector<std::string> labels;
      std::vector<double> values;
      for (const auto& row : rep.rows) {
        labels.push_back(row.label);
        values.push_back(static_cast<double>(row.count));
      }
      write_text_file(stem + ".svg",
                      render_bar_chart_svg(title, labels, {{name, values}}));
      if (written) {
        written->push_back(stem + ".txt");
        written->push_back(stem + ".svg");
      }
    }
  }

  std::string render_execution_report(const ExecutionReport& report,
                                      size_t before_size, size_t after_size,
                                      size_t leakage_hits) const {
    std::ostringstream out;
    out << "# augmentation execution report\n";
    out << "backend: " << to_string(config_.generation.backend) << '\n';
    out << "train size: " << before_size << " -> " << after_size << '\n';
    out << "accepted synthetic samples: " << report.total_accepted << '\n';
    out << "rejections: " << report.rejections.size() << '\n';
    out << "leakage self-check: "
        << (leakage_hits == 0 ? "clean" : std::to_string(leakage_hits) + " hits")
        << '\n';
    auto dump_progress = [&](const char* name,
                             const std::map<std::string, LabelProgress>& progress) {
      out << "## " << name << " label progress\n";
      out << "label\tdeficit\trequested\taccepted\trejected\tfailed_requests\tcompleted\n";
      for (const auto& [label, p] : progress) {
        if (p.deficit == 0 && p.requested == 0) continue;
        out << label << '\t' << p.deficit << '\t' << p.requested << '\t'
            << p.accepted << '\t' << p.rejected << '\t' << p.failed_requests
            << '\t' << (p.completed ? "yes" : "no") << '\n';
      }
    };
    dump_progress("hazard", report.hazard_progress);
    dump_progress("product", report.product_progress);
    auto dump_distribution = [&](const char* name, const Distribution& dist) {
      out << "## post-merge " << name << " distribution\n";
      for (const auto& [label, count] : dist)
        out << label << '\t' << count << '\n';
    };
    dump_distribution("hazard", report.hazard_after);
    dump_distribution("product", report.product_after);
    if (!report.warnings.empty()) {
      out << "## warnings\n";
      for (const auto& w : report.warnings) out << "- " << w << '\n';
    }
    if (!report.rejections.empty()) {
      out << "## rejections\n";
      for (const auto& r : report.rejections)
        out << r.candidate_id << '\t' << r.reason << '\t' << r.match_id << '\t'
            << format_percent(r.score) << '\n';
    }
    return out.str();
  }

  PipelineConfig config_;
};

}  // namespace foodaug
