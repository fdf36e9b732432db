// foodaug: config-driven pipeline for augmenting an imbalanced food-incident
// corpus with generated samples, training classifier backends on the
// original and augmented sets, and reporting comparative metrics.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "foodaug/pipeline.hpp"

namespace {

struct Overrides {
  std::string train_csv, dev_csv, test_csv, cache_dir, output_dir;
  std::string generation_backend, policy_kind, eval_split;
  int64_t seed = -1;
  int64_t policy_floor = -1;
  double policy_factor = -1;
  int64_t epochs = -1;
};

void apply(const Overrides& o, foodaug::PipelineConfig& config) {
  if (!o.train_csv.empty()) config.train_csv = o.train_csv;
  if (!o.dev_csv.empty()) config.dev_csv = o.dev_csv;
  if (!o.test_csv.empty()) config.test_csv = o.test_csv;
  if (!o.cache_dir.empty()) config.cache_dir = o.cache_dir;
  if (!o.output_dir.empty()) config.output_dir = o.output_dir;
  if (!o.generation_backend.empty())
    config.generation.backend =
        foodaug::generation_backend_from_string(o.generation_backend);
  if (!o.policy_kind.empty()) config.policy.kind = o.policy_kind;
  if (o.policy_floor >= 0) config.policy.floor = o.policy_floor;
  if (o.policy_factor >= 1) config.policy.factor = o.policy_factor;
  if (!o.eval_split.empty()) config.report_eval_split = o.eval_split;
  if (o.seed >= 0) {
    config.seed = static_cast<uint64_t>(o.seed);
    for (auto& entry : config.training) entry.config.seed = config.seed;
  }
  if (o.epochs >= 1)
    for (auto& entry : config.training)
      entry.config.epochs = static_cast<size_t>(o.epochs);
}

void add_common(CLI::App* cmd, std::string& config_path, Overrides& o) {
  cmd->add_option("--config", config_path, "pipeline config file (JSON)")
      ->required();
  cmd->add_option("--seed", o.seed, "override config seed");
  cmd->add_option("--train-csv", o.train_csv, "override paths.train_csv");
  cmd->add_option("--dev-csv", o.dev_csv, "override paths.dev_csv");
  cmd->add_option("--test-csv", o.test_csv, "override paths.test_csv");
  cmd->add_option("--cache-dir", o.cache_dir, "override paths.cache_dir");
  cmd->add_option("--output-dir", o.output_dir, "override paths.output_dir");
  cmd->add_option("--generation-backend", o.generation_backend,
                  "override generation.backend");
  cmd->add_option("--policy-kind", o.policy_kind, "override policy.kind");
  cmd->add_option("--policy-floor", o.policy_floor, "override policy.floor");
  cmd->add_option("--policy-factor", o.policy_factor, "override policy.factor");
  cmd->add_option("--epochs", o.epochs, "override epochs for all training entries");
  cmd->add_option("--eval-split", o.eval_split, "override report.eval_split");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"food-incident augmentation and fine-tuning pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  auto* analyze = app.add_subcommand("analyze", "class distribution reports");
  auto* plan = app.add_subcommand("plan", "build per-class augmentation plans");
  auto* augment =
      app.add_subcommand("augment", "generate synthetic samples per the plans");
  auto* train = app.add_subcommand("train", "fine-tune configured backends");
  auto* evaluate = app.add_subcommand("evaluate", "score checkpoints on dev/test");
  auto* report = app.add_subcommand("report", "comparison tables and figures");
  for (auto* cmd : {analyze, plan, augment, train, evaluate, report})
    add_common(cmd, config_path, overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    foodaug::PipelineConfig config =
        foodaug::PipelineConfig::from_file(config_path);
    apply(overrides, config);
    foodaug::Pipeline pipeline(std::move(config));

    if (*analyze) {
      for (const auto& path : pipeline.analyze())
        std::cout << "wrote " << path << "\n";
    } else if (*plan) {
      for (const auto& path : pipeline.plan()) std::cout << "wrote " << path << "\n";
    } else if (*augment) {
      auto exec = pipeline.augment();
      std::cout << "accepted " << exec.total_accepted << " synthetic samples ("
                << exec.rejections.size() << " rejected, " << exec.backend_calls
                << " backend calls)\n";
      for (const auto& w : exec.warnings) std::cout << "warning: " << w << "\n";
      std::cout << "wrote " << pipeline.augmented_corpus_path().string() << "\n";
    } else if (*train) {
      for (const auto& s : pipeline.train_models())
        std::cout << s.model_id << " " << foodaug::to_string(s.task) << " "
                  << (s.augmented ? "aug" : "orig") << ": best dev macro-F1 "
                  << foodaug::format_percent(s.best_dev_f1) << " in "
                  << foodaug::format_percent(s.seconds) << "s\n";
    } else if (*evaluate) {
      for (const auto& path : pipeline.evaluate())
        std::cout << "wrote " << path << "\n";
    } else if (*report) {
      for (const auto& path : pipeline.report())
        std::cout << "wrote " << path << "\n";
    }
  } catch (const foodaug::Error& e) {
    std::cerr << foodaug::to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
