#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "foodaug/error.hpp"
#include "foodaug/generator.hpp"
#include "foodaug/imbalance.hpp"
#include "foodaug/prompt.hpp"
#include "foodaug/taxonomy.hpp"
#include "foodaug/trainer.hpp"

namespace foodaug {

enum class GenerationBackendKind { live_endpoint, replay_cache, mock_paraphraser };

inline GenerationBackendKind generation_backend_from_string(const std::string& s) {
  std::string n = normalize(s);
  if (n == "live_endpoint" || n == "live") return GenerationBackendKind::live_endpoint;
  if (n == "replay_cache" || n == "replay") return GenerationBackendKind::replay_cache;
  if (n == "mock_paraphraser" || n == "mock")
    return GenerationBackendKind::mock_paraphraser;
  throw Error(ErrorKind::config, "unknown generation backend: " + s);
}

inline const char* to_string(GenerationBackendKind k) {
  switch (k) {
    case GenerationBackendKind::live_endpoint: return "live_endpoint";
    case GenerationBackendKind::replay_cache: return "replay_cache";
    case GenerationBackendKind::mock_paraphraser: return "mock_paraphraser";
  }
  return "mock_paraphraser";
}

struct PolicyConfig {
  std::string kind = "paper_table";  // paper_table | explicit | floor | multiplier
  std::vector<Task> tasks = {Task::hazard_category, Task::product_category};
  std::map<Task, std::map<std::string, size_t>> explicit_targets;
  size_t floor = 0;
  double factor = 1.0;
  size_t cap = SIZE_MAX;

  bool applies_to(Task t) const {
    for (Task x : tasks)
      if (x == t) return true;
    return false;
  }
};

struct GenerationConfig {
  GenerationBackendKind backend = GenerationBackendKind::mock_paraphraser;
  std::string endpoint_url;  // empty -> read from endpoint_url_env
  std::string endpoint_url_env = "FOODAUG_ENDPOINT_URL";
  std::string api_key_env = "FOODAUG_API_KEY";
  std::string model = "gpt-4o-mini";
  double temperature = 0.7;
  size_t max_output_tokens = 512;
  size_t per_request_count = 5;
  double dedup_threshold = 0.9;
  size_t min_body_tokens = 10;
  double min_seed_jaccard = 0.05;
  double failure_budget_multiplier = 3.0;
  size_t max_in_flight = 1;
  int max_retries = 3;
  int backoff_ms = 200;
  int rate_limit_interval_ms = 0;
  std::string template_file;  // optional custom prompt template
};

struct TrainingEntry {
  std::string model_id;
  TrainingConfig config;
};

struct PipelineConfig {
  uint64_t seed = 0;
  std::string train_csv, dev_csv, test_csv;
  std::string cache_dir, output_dir;
  TaxonomyPair taxonomies = standard_taxonomies();
  PolicyConfig policy;
  GenerationConfig generation;
  std::vector<TrainingEntry> training;
  std::string report_eval_split = "test";  // which split feeds the grid

  static PipelineConfig from_file(const std::string& path);
  static PipelineConfig from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir);

  PromptTemplate prompt_template() const {
    if (template_file.empty()) return PromptTemplate::default_template();
    std::ifstream in(template_file, std::ios::binary);
    if (!in)
      throw Error(ErrorKind::io, "cannot open template file: " + template_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return PromptTemplate(buf.str());
  }

  std::string template_file;

  void require_input_paths() const {
    for (const auto& [name, path] :
         std::vector<std::pair<std::string, std::string>>{
             {"train_csv", train_csv}, {"dev_csv", dev_csv}, {"test_csv", test_csv}}) {
      if (path.empty())
        throw Error(ErrorKind::config, "config lacks paths." + name);
      if (!std::filesystem::exists(path))
        throw Error(ErrorKind::config,
                    "configured " + name + " does not exist: " + path);
    }
    if (!template_file.empty() && !std::filesystem::exists(template_file))
      throw Error(ErrorKind::config,
                  "configured template_file does not exist: " + template_file);
  }
};

namespace detail {

inline std::string resolve_path(const std::filesystem::path& base,
                                const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path fp(p);
  if (fp.is_absolute()) return fp.lexically_normal().string();
  return (base / fp).lexically_normal().string();
}

}  // namespace detail

inline PipelineConfig PipelineConfig::from_json(
    const nlohmann::json& j, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  if (!j.contains("seed"))
    throw Error(ErrorKind::config,
                "config must pin a seed (no implicit nondeterminism)");
  c.seed = j.at("seed").get<uint64_t>();

  const auto& paths = j.at("paths");
  c.train_csv = detail::resolve_path(base_dir, paths.at("train_csv").get<std::string>());
  c.dev_csv = detail::resolve_path(base_dir, paths.at("dev_csv").get<std::string>());
  c.test_csv = detail::resolve_path(base_dir, paths.at("test_csv").get<std::string>());
  c.cache_dir = detail::resolve_path(base_dir, paths.at("cache_dir").get<std::string>());
  c.output_dir = detail::resolve_path(base_dir, paths.at("output_dir").get<std::string>());

  if (j.contains("taxonomy")) {
    const auto& t = j.at("taxonomy");
    if (t.is_string()) {
      if (t.get<std::string>() != "standard")
        throw Error(ErrorKind::config, "taxonomy must be \"standard\" or inline sets");
    } else {
      c.taxonomies = TaxonomyPair{
          LabelTaxonomy(Task::hazard_category,
                        t.at("hazard").get<std::vector<std::string>>()),
          LabelTaxonomy(Task::product_category,
                        t.at("product").get<std::vector<std::string>>())};
    }
  }

  if (j.contains("policy")) {
    const auto& p = j.at("policy");
    c.policy.kind = p.value("kind", std::string("paper_table"));
    if (p.contains("tasks")) {
      c.policy.tasks.clear();
      for (const auto& t : p.at("tasks"))
        c.policy.tasks.push_back(task_from_string(t.get<std::string>()));
    }
    if (c.policy.kind == "floor") c.policy.floor = p.at("floor").get<size_t>();
    if (c.policy.kind == "multiplier") {
      c.policy.factor = p.at("factor").get<double>();
      c.policy.cap = p.value("cap", SIZE_MAX);
    }
    if (c.policy.kind == "explicit") {
      for (const auto& [task_name, targets] : p.at("targets").items()) {
        Task task = task_from_string(task_name);
        for (const auto& [label, count] : targets.items())
          c.policy.explicit_targets[task][normalize(label)] = count.get<size_t>();
      }
    }
    if (c.policy.kind != "paper_table" && c.policy.kind != "explicit" &&
        c.policy.kind != "floor" && c.policy.kind != "multiplier")
      throw Error(ErrorKind::config, "unknown policy kind: " + c.policy.kind);
  }

  if (j.contains("generation")) {
    const auto& g = j.at("generation");
    if (g.contains("backend"))
      c.generation.backend =
          generation_backend_from_string(g.at("backend").get<std::string>());
    c.generation.endpoint_url = g.value("endpoint_url", c.generation.endpoint_url);
    c.generation.endpoint_url_env =
        g.value("endpoint_url_env", c.generation.endpoint_url_env);
    c.generation.api_key_env = g.value("api_key_env", c.generation.api_key_env);
    c.generation.model = g.value("model", c.generation.model);
    c.generation.temperature = g.value("temperature", c.generation.temperature);
    c.generation.max_output_tokens =
        g.value("max_output_tokens", c.generation.max_output_tokens);
    c.generation.per_request_count =
        g.value("per_request_count", c.generation.per_request_count);
    c.generation.dedup_threshold =
        g.value("dedup_threshold", c.generation.dedup_threshold);
    c.generation.min_body_tokens =
        g.value("min_body_tokens", c.generation.min_body_tokens);
    c.generation.min_seed_jaccard =
        g.value("min_seed_jaccard", c.generation.min_seed_jaccard);
    c.generation.failure_budget_multiplier =
        g.value("failure_budget_multiplier", c.generation.failure_budget_multiplier);
    c.generation.max_in_flight = g.value("max_in_flight", c.generation.max_in_flight);
    c.generation.max_retries = g.value("max_retries", c.generation.max_retries);
    c.generation.backoff_ms = g.value("backoff_ms", c.generation.backoff_ms);
    c.generation.rate_limit_interval_ms =
        g.value("rate_limit_interval_ms", c.generation.rate_limit_interval_ms);
    if (g.contains("template_file"))
      c.template_file =
          detail::resolve_path(base_dir, g.at("template_file").get<std::string>());
  }

  if (j.contains("training")) {
    for (const auto& t : j.at("training")) {
      TrainingEntry entry;
      entry.model_id = t.at("model_id").get<std::string>();
      TrainerBackend backend =
          trainer_backend_from_string(t.at("backend").get<std::string>());
      Task task = task_from_string(t.at("task").get<std::string>());
      entry.config = TrainingConfig::defaults(backend, task);
      entry.config.max_length = t.value("max_length", entry.config.max_length);
      entry.config.batch_size = t.value("batch_size", entry.config.batch_size);
      entry.config.learning_rate =
          t.value("learning_rate", entry.config.learning_rate);
      entry.config.epochs = t.value("epochs", entry.config.epochs);
      entry.config.input_prefix = t.value("input_prefix", entry.config.input_prefix);
      entry.config.seed = t.value("seed", c.seed);
      entry.config.device = t.value("device", entry.config.device);
      entry.config.weight_decay = t.value("weight_decay", entry.config.weight_decay);
      entry.config.clip_norm = t.value("clip_norm", entry.config.clip_norm);
      entry.config.embedding_dim =
          t.value("embedding_dim", entry.config.embedding_dim);
      entry.config.select_on_dev =
          t.value("select_on_dev", entry.config.select_on_dev);
      entry.config.validate();
      c.training.push_back(std::move(entry));
    }
  }

  if (j.contains("report"))
    c.report_eval_split = j.at("report").value("eval_split", c.report_eval_split);
  if (c.report_eval_split != "dev" && c.report_eval_split != "test")
    throw Error(ErrorKind::config,
                "report.eval_split must be dev or test, got " + c.report_eval_split);
  return c;
}

inline PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, path + ": " + e.what());
  }
  return from_json(j, std::filesystem::absolute(path).parent_path());
}

}  // namespace foodaug
