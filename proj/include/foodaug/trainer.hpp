#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "foodaug/corpus.hpp"
#include "foodaug/error.hpp"
#include "foodaug/metrics.hpp"
#include "foodaug/text.hpp"

namespace foodaug {

enum class TrainerBackend { encoder_classifier, text_to_text, linear_baseline };

inline const char* to_string(TrainerBackend b) {
  switch (b) {
    case TrainerBackend::encoder_classifier: return "encoder_classifier";
    case TrainerBackend::text_to_text: return "text_to_text";
    case TrainerBackend::linear_baseline: return "linear_baseline";
  }
  return "linear_baseline";
}

inline TrainerBackend trainer_backend_from_string(const std::string& s) {
  std::string n = normalize(s);
  if (n == "encoder_classifier") return TrainerBackend::encoder_classifier;
  if (n == "text_to_text") return TrainerBackend::text_to_text;
  if (n == "linear_baseline") return TrainerBackend::linear_baseline;
  throw Error(ErrorKind::config, "unknown trainer backend: " + s);
}

struct TrainingConfig {
  TrainerBackend backend = TrainerBackend::linear_baseline;
  Task task = Task::hazard_category;
  size_t max_length = 256;  // input token cap
  size_t batch_size = 16;
  double learning_rate = 2e-5;
  size_t epochs = 100;
  std::string input_prefix;  // text_to_text only
  uint64_t seed = 0;
  std::string device = "cpu";
  double weight_decay = 0.01;
  double clip_norm = 1.0;
  size_t embedding_dim = 32;
  bool select_on_dev = true;

  static TrainingConfig defaults(TrainerBackend backend, Task task) {
    TrainingConfig c;
    c.backend = backend;
    c.task = task;
    switch (backend) {
      case TrainerBackend::encoder_classifier:
        c.batch_size = 16;
        c.learning_rate = 2e-5;
        break;
      case TrainerBackend::text_to_text:
        c.batch_size = 8;
        c.learning_rate = 1e-4;
        c.input_prefix = task == Task::hazard_category
                             ? "Classify the hazard category: "
                             : "Classify the product category: ";
        break;
      case TrainerBackend::linear_baseline:
        // Full-batch gradient descent over bag-of-words features.
        c.batch_size = 16;
        c.learning_rate = 1.0;
        break;
    }
    return c;
  }

  void validate() const {
    if (batch_size < 1) throw Error(ErrorKind::config, "batch_size must be >= 1");
    if (epochs < 1) throw Error(ErrorKind::config, "epochs must be >= 1");
    if (!(learning_rate > 0)) throw Error(ErrorKind::config, "learning rate must be > 0");
    if (max_length < 8) throw Error(ErrorKind::config, "max_length must be >= 8");
  }
};

// Maps a generated string onto the closed label set: exact normalized match,
// else nearest by character edit distance (ties go to taxonomy order); a
// nearest match farther than half the string away falls back to label 0 and
// is counted as unresolved.
struct ResolvedLabel {
  std::string label;
  bool unresolved = false;
  double normalized_distance = 0.0;
};

inline ResolvedLabel resolve_label(const std::string& generated,
                                   const LabelTaxonomy& taxonomy) {
  std::string norm = normalize(generated);
  if (auto idx = taxonomy.find(norm))
    return {taxonomy.label(*idx), false, 0.0};
  size_t best_index = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < taxonomy.size(); ++i) {
    double d = normalized_edit_distance(norm, taxonomy.label(i));
    if (d < best) {
      best = d;
      best_index = i;
    }
  }
  if (best > 0.5) return {taxonomy.label(0), true, best};
  return {taxonomy.label(best_index), false, best};
}

// ---------------------------------------------------------------------------
// Shared encoding pieces

struct Vocabulary {
  std::vector<std::string> tokens;  // id 0 is <unk>
  std::unordered_map<std::string, size_t> ids;

  Vocabulary() { add("<unk>"); }

  size_t add(const std::string& token) {
    auto it = ids.find(token);
    if (it != ids.end()) return it->second;
    ids[token] = tokens.size();
    tokens.push_back(token);
    return tokens.size() - 1;
  }

  size_t lookup(const std::string& token) const {
    auto it = ids.find(token);
    return it == ids.end() ? 0 : it->second;
  }

  size_t size() const { return tokens.size(); }
};

namespace detail {

inline std::vector<size_t> encode_tokens(const Vocabulary& vocab,
                                         const std::string& text,
                                         size_t max_length) {
  std::vector<size_t> ids;
  for (const auto& tok : tokenize(text)) {
    if (ids.size() >= max_length) break;
    ids.push_back(vocab.lookup(tok));
  }
  return ids;
}

}  // namespace detail

struct EpochRecord {
  size_t epoch = 0;          // 1-based
  double dev_macro_f1 = -1;  // percent; -1 when selection is disabled
};

struct TrainedModel {
  TrainerBackend backend = TrainerBackend::linear_baseline;
  Task task = Task::hazard_category;
  LabelTaxonomy taxonomy{Task::hazard_category, {"placeholder"}};
  TrainingConfig config;
  Vocabulary vocab;
  std::vector<std::string> verbalizer;  // text_to_text: class -> label string
  std::vector<std::string> label_tokens;  // text_to_text decoder vocabulary
  size_t decode_positions = 0;
  std::vector<double> params;
  size_t train_size = 0;
  size_t optimizer_steps = 0;
  size_t best_epoch = 0;
  std::vector<EpochRecord> selection;
  std::string checkpoint_dir;  // set by save_checkpoint

  double best_dev_macro_f1() const {
    double best = -1;
    for (const auto& r : selection) best = std::max(best, r.dev_macro_f1);
    return best;
  }
};

struct PredictResult {
  std::vector<std::string> labels;
  size_t unresolved = 0;
};

// ---------------------------------------------------------------------------
// Model internals. Parameter layouts:
//   linear_baseline:    W[K][V+1], last column is the bias.
//   encoder_classifier: E[V][d] | W[K][d] | b[K]
//   text_to_text:       E[V][d] | per position t: U_t[L][d] | c_t[L]
//     where L = label-token vocabulary size (incl. </s> at index 0).

namespace detail {

inline void softmax_inplace(std::vector<double>& z) {
  double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

struct EncodedSample {
  std::vector<size_t> input_ids;
  size_t label_index = 0;
};

class AdamW {
 public:
  AdamW(size_t n, double lr, double weight_decay, double clip_norm)
      : lr_(lr), wd_(weight_decay), clip_(clip_norm), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::vector<double>& params, std::vector<double>& grad) {
    ++t_;
    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    double norm = std::sqrt(norm_sq);
    if (clip_ > 0 && norm > clip_) {
      double scale = clip_ / norm;
      for (double& g : grad) g *= scale;
    }
    double bc1 = 1.0 - std::pow(beta1_, t_);
    double bc2 = 1.0 - std::pow(beta2_, t_);
    for (size_t i = 0; i < params.size(); ++i) {
      m_[i] = beta1_ * m_[i] + (1 - beta1_) * grad[i];
      v_[i] = beta2_ * v_[i] + (1 - beta2_) * grad[i] * grad[i];
      double mhat = m_[i] / bc1;
      double vhat = v_[i] / bc2;
      params[i] -= lr_ * (mhat / (std::sqrt(vhat) + eps_) + wd_ * params[i]);
    }
  }

 private:
  double lr_, wd_, clip_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace detail

// ---------------------------------------------------------------------------

class Trainer;  // forward

struct TrainOutput {
  TrainedModel model;
  TimingRecord timing;
};

inline PredictResult predict_detailed(const TrainedModel& model,
                                      const std::vector<Sample>& samples);

inline std::vector<std::string> predict(const TrainedModel& model,
                                        const std::vector<Sample>& samples) {
  return predict_detailed(model, samples).labels;
}

namespace detail {

inline const std::string& sample_label(const Sample& s, Task task) {
  return task == Task::hazard_category ? s.hazard_label : s.product_label;
}

inline std::string model_input_text(const Sample& s, const TrainingConfig& cfg) {
  if (cfg.backend == TrainerBackend::text_to_text)
    return cfg.input_prefix + s.model_input();
  return s.model_input();
}

// Mean embedding of the input ids; returns zeros for an empty input.
inline std::vector<double> encode_mean(const std::vector<double>& params,
                                       const std::vector<size_t>& ids,
                                       size_t dim) {
  std::vector<double> h(dim, 0.0);
  if (ids.empty()) return h;
  for (size_t id : ids)
    for (size_t j = 0; j < dim; ++j) h[j] += params[id * dim + j];
  for (double& v : h) v /= static_cast<double>(ids.size());
  return h;
}

}  // namespace detail

// Fine-tunes one backend on one task. Inputs are title+body (prefixed for
// text_to_text) truncated to max_length word tokens. When dev selection is
// on, the epoch with the best dev macro-F1 wins.
inline TrainOutput train(const Corpus& train_corpus, const Corpus& dev_corpus,
                         const TrainingConfig& config_in) {
  TrainingConfig config = config_in;
  config.validate();
  train_corpus.validate();
  if (train_corpus.size() == 0)
    throw Error(ErrorKind::validation, "training corpus is empty");
  if (config.select_on_dev && dev_corpus.size() == 0)
    throw Error(ErrorKind::config,
                "dev corpus is empty but dev selection is enabled");
  if (config.backend == TrainerBackend::text_to_text && config.input_prefix.empty())
    config.input_prefix =
        TrainingConfig::defaults(config.backend, config.task).input_prefix;

  const LabelTaxonomy& taxonomy = train_corpus.taxonomy(config.task);
  const size_t k_classes = taxonomy.size();

  TrainedModel model;
  model.backend = config.backend;
  model.task = config.task;
  model.taxonomy = taxonomy;
  model.config = config;
  model.train_size = train_corpus.size();

  // Vocabulary from the training split only.
  for (const auto& s : train_corpus.samples) {
    auto toks = tokenize(detail::model_input_text(s, config));
    for (size_t i = 0; i < toks.size() && i < config.max_length; ++i)
      model.vocab.add(toks[i]);
  }

  std::vector<detail::EncodedSample> data;
  data.reserve(train_corpus.size());
  for (const auto& s : train_corpus.samples) {
    detail::EncodedSample es;
    es.input_ids = detail::encode_tokens(
        model.vocab, detail::model_input_text(s, config), config.max_length);
    es.label_index = taxonomy.index_of(detail::sample_label(s, config.task));
    data.push_back(std::move(es));
  }

  const size_t vocab_size = model.vocab.size();
  const size_t dim = config.embedding_dim;

  // Text-to-text decoding targets: label tokens with </s> at index 0.
  std::vector<std::vector<size_t>> t2t_targets(k_classes);
  if (config.backend == TrainerBackend::text_to_text) {
    Vocabulary label_vocab;  // slot 0 (<unk>) doubles as </s>
    label_vocab.tokens[0] = "</s>";
    label_vocab.ids.clear();
    label_vocab.ids["</s>"] = 0;
    size_t longest = 0;
    for (size_t c = 0; c < k_classes; ++c) {
      model.verbalizer.push_back(taxonomy.label(c));
      auto toks = tokenize(taxonomy.label(c));
      longest = std::max(longest, toks.size());
      for (const auto& t : toks) t2t_targets[c].push_back(label_vocab.add(t));
      t2t_targets[c].push_back(0);  // </s>
    }
    model.decode_positions = longest + 1;
    model.label_tokens = label_vocab.tokens;
    for (auto& tgt : t2t_targets) tgt.resize(model.decode_positions, 0);
  }
  const size_t label_vocab_size = model.label_tokens.size();

  // Parameter allocation and seeded init.
  std::mt19937_64 rng(config.seed);
  size_t n_params = 0;
  switch (config.backend) {
    case TrainerBackend::linear_baseline:
      n_params = k_classes * (vocab_size + 1);
      break;
    case TrainerBackend::encoder_classifier:
      n_params = vocab_size * dim + k_classes * dim + k_classes;
      break;
    case TrainerBackend::text_to_text:
      n_params = vocab_size * dim +
                 model.decode_positions * (label_vocab_size * dim + label_vocab_size);
      break;
  }
  model.params.assign(n_params, 0.0);
  if (config.backend != TrainerBackend::linear_baseline) {
    std::normal_distribution<double> init(0.0, 0.1);
    for (size_t i = 0; i < vocab_size * dim; ++i) model.params[i] = init(rng);
  }

  TimingRecord timing;
  timing.dataset_size = train_corpus.size();
  timing.backend = to_string(config.backend);

  std::vector<double> best_params;
  double best_f1 = -1.0;
  size_t best_epoch = 0;

  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::unique_ptr<detail::AdamW> adamw;
  if (config.backend != TrainerBackend::linear_baseline)
    adamw = std::make_unique<detail::AdamW>(n_params, config.learning_rate,
                                            config.weight_decay, config.clip_norm);

  const auto run_start = std::chrono::steady_clock::now();
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();

    if (config.backend == TrainerBackend::linear_baseline) {
      // One full-batch gradient step per epoch.
      std::vector<double> grad(n_params, 0.0);
      const size_t row = vocab_size + 1;
      std::vector<double> logits(k_classes);
      for (const auto& es : data) {
        // Bag-of-words counts normalized by input length.
        std::unordered_map<size_t, double> counts;
        double denom = es.input_ids.empty() ? 1.0 : es.input_ids.size();
        for (size_t id : es.input_ids) counts[id] += 1.0 / denom;
        for (size_t c = 0; c < k_classes; ++c) {
          double z = model.params[c * row + vocab_size];  // bias
          for (const auto& [id, x] : counts) z += model.params[c * row + id] * x;
          logits[c] = z;
        }
        detail::softmax_inplace(logits);
        for (size_t c = 0; c < k_classes; ++c) {
          double delta = logits[c] - (c == es.label_index ? 1.0 : 0.0);
          for (const auto& [id, x] : counts) grad[c * row + id] += delta * x;
          grad[c * row + vocab_size] += delta;
        }
      }
      double inv_n = 1.0 / static_cast<double>(data.size());
      for (size_t i = 0; i < n_params; ++i)
        model.params[i] -= config.learning_rate *
                           (grad[i] * inv_n + config.weight_decay * model.params[i]);
      ++timing.optimizer_steps;
    } else {
      std::mt19937_64 epoch_rng(config.seed ^ (0x5851f42d4c957f2dull * epoch));
      std::shuffle(order.begin(), order.end(), epoch_rng);
      std::vector<double> grad(n_params, 0.0);
      for (size_t start = 0; start < data.size(); start += config.batch_size) {
        size_t end = std::min(data.size(), start + config.batch_size);
        std::fill(grad.begin(), grad.end(), 0.0);
        double inv_b = 1.0 / static_cast<double>(end - start);
        for (size_t bi = start; bi < end; ++bi) {
          const auto& es = data[order[bi]];
          auto h = detail::encode_mean(model.params, es.input_ids, dim);
          double scale = es.input_ids.empty()
                             ? 0.0
                             : 1.0 / static_cast<double>(es.input_ids.size());
          if (config.backend == TrainerBackend::encoder_classifier) {
            const size_t w_off = vocab_size * dim;
            const size_t b_off = w_off + k_classes * dim;
            std::vector<double> logits(k_classes);
            for (size_t c = 0; c < k_classes; ++c) {
              double z = model.params[b_off + c];
              for (size_t j = 0; j < dim; ++j)
                z += model.params[w_off + c * dim + j] * h[j];
              logits[c] = z;
            }
            detail::softmax_inplace(logits);
            std::vector<double> dh(dim, 0.0);
            for (size_t c = 0; c < k_classes; ++c) {
              double delta = (logits[c] - (c == es.label_index ? 1.0 : 0.0)) * inv_b;
              grad[b_off + c] += delta;
              for (size_t j = 0; j < dim; ++j) {
                grad[w_off + c * dim + j] += delta * h[j];
                dh[j] += delta * model.params[w_off + c * dim + j];
              }
            }
            for (size_t id : es.input_ids)
              for (size_t j = 0; j < dim; ++j)
                grad[id * dim + j] += dh[j] * scale;
          } else {  // text_to_text: position-wise label token decoders
            const auto& target = t2t_targets[es.label_index];
            std::vector<double> dh(dim, 0.0);
            for (size_t t = 0; t < model.decode_positions; ++t) {
              const size_t u_off =
                  vocab_size * dim + t * (label_vocab_size * dim + label_vocab_size);
              const size_t c_off = u_off + label_vocab_size * dim;
              std::vector<double> logits(label_vocab_size);
              for (size_t l = 0; l < label_vocab_size; ++l) {
                double z = model.params[c_off + l];
                for (size_t j = 0; j < dim; ++j)
                  z += model.params[u_off + l * dim + j] * h[j];
                logits[l] = z;
              }
              detail::softmax_inplace(logits);
              for (size_t l = 0; l < label_vocab_size; ++l) {
                double delta = (logits[l] - (l == target[t] ? 1.0 : 0.0)) * inv_b;
                grad[c_off + l] += delta;
                for (size_t j = 0; j < dim; ++j) {
                  grad[u_off + l * dim + j] += delta * h[j];
                  dh[j] += delta * model.params[u_off + l * dim + j];
                }
              }
            }
            for (size_t id : es.input_ids)
              for (size_t j = 0; j < dim; ++j)
                grad[id * dim + j] += dh[j] * scale;
          }
        }
        adamw->step(model.params, grad);
        ++timing.optimizer_steps;
      }
    }

    EpochRecord record;
    record.epoch = epoch;
    if (dev_corpus.size() > 0 && config.select_on_dev) {
      auto preds = predict(model, dev_corpus.samples);
      std::vector<std::string> gold;
      gold.reserve(dev_corpus.size());
      for (const auto& s : dev_corpus.samples)
        gold.push_back(detail::sample_label(s, config.task));
      record.dev_macro_f1 =
          macro_metrics(confusion(gold, preds, taxonomy)).macro_f1;
      if (record.dev_macro_f1 > best_f1) {
        best_f1 = record.dev_macro_f1;
        best_epoch = epoch;
        best_params = model.params;
      }
    }
    model.selection.push_back(record);

    timing.epoch_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      epoch_start)
            .count());
  }

  if (config.select_on_dev && !best_params.empty()) {
    model.params = std::move(best_params);
    model.best_epoch = best_epoch;
  } else {
    model.best_epoch = config.epochs;
  }

  timing.total_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - run_start)
                             .count();
  model.optimizer_steps = timing.optimizer_steps;
  return {std::move(model), std::move(timing)};
}

// One label per sample. For text_to_text the decoded token string goes
// through resolve_label, so the output always lies inside the taxonomy.
inline PredictResult predict_detailed(const TrainedModel& model,
                                      const std::vector<Sample>& samples) {
  PredictResult result;
  result.labels.reserve(samples.size());
  const size_t k_classes = model.taxonomy.size();
  const size_t vocab_size = model.vocab.size();
  const size_t dim = model.config.embedding_dim;
  const size_t label_vocab_size = model.label_tokens.size();

  for (const auto& s : samples) {
    auto ids = detail::encode_tokens(
        model.vocab, detail::model_input_text(s, model.config),
        model.config.max_length);
    if (model.backend == TrainerBackend::linear_baseline) {
      const size_t row = vocab_size + 1;
      std::unordered_map<size_t, double> counts;
      double denom = ids.empty() ? 1.0 : ids.size();
      for (size_t id : ids) counts[id] += 1.0 / denom;
      size_t best = 0;
      double best_z = -std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < k_classes; ++c) {
        double z = model.params[c * row + vocab_size];
        for (const auto& [id, x] : counts) z += model.params[c * row + id] * x;
        if (z > best_z) {
          best_z = z;
          best = c;
        }
      }
      result.labels.push_back(model.taxonomy.label(best));
    } else if (model.backend == TrainerBackend::encoder_classifier) {
      auto h = detail::encode_mean(model.params, ids, dim);
      const size_t w_off = vocab_size * dim;
      const size_t b_off = w_off + k_classes * dim;
      size_t best = 0;
      double best_z = -std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < k_classes; ++c) {
        double z = model.params[b_off + c];
        for (size_t j = 0; j < dim; ++j)
          z += model.params[w_off + c * dim + j] * h[j];
        if (z > best_z) {
          best_z = z;
          best = c;
        }
      }
      result.labels.push_back(model.taxonomy.label(best));
    } else {  // text_to_text: greedy decode, then map back into the taxonomy
      auto h = detail::encode_mean(model.params, ids, dim);
      std::string generated;
      for (size_t t = 0; t < model.decode_positions; ++t) {
        const size_t u_off =
            vocab_size * dim + t * (label_vocab_size * dim + label_vocab_size);
        const size_t c_off = u_off + label_vocab_size * dim;
        size_t best = 0;
        double best_z = -std::numeric_limits<double>::infinity();
        for (size_t l = 0; l < label_vocab_size; ++l) {
          double z = model.params[c_off + l];
          for (size_t j = 0; j < dim; ++j)
            z += model.params[u_off + l * dim + j] * h[j];
          if (z > best_z) {
            best_z = z;
            best = l;
          }
        }
        if (best == 0) break;  // </s>
        if (!generated.empty()) generated += " ";
        generated += model.label_tokens[best];
      }
      auto resolved = resolve_label(generated, model.taxonomy);
      if (resolved.unresolved) ++result.unresolved;
      result.labels.push_back(resolved.label);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoints: a directory holding model.json (deterministic) plus a
// timing.json sidecar written by the training command (volatile wall-clock).

inline void save_checkpoint(TrainedModel& model, const std::string& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json j;
  j["backend"] = to_string(model.backend);
  j["task"] = to_string(model.task);
  j["labels"] = model.taxonomy.labels();
  j["config"] = {
      {"max_length", model.config.max_length},
      {"batch_size", model.config.batch_size},
      {"learning_rate", model.config.learning_rate},
      {"epochs", model.config.epochs},
      {"input_prefix", model.config.input_prefix},
      {"seed", model.config.seed},
      {"device", model.config.device},
      {"weight_decay", model.config.weight_decay},
      {"clip_norm", model.config.clip_norm},
      {"embedding_dim", model.config.embedding_dim},
      {"select_on_dev", model.config.select_on_dev},
  };
  j["vocab"] = model.vocab.tokens;
  j["verbalizer"] = model.verbalizer;
  j["label_tokens"] = model.label_tokens;
  j["decode_positions"] = model.decode_positions;
  j["train_size"] = model.train_size;
  j["optimizer_steps"] = model.optimizer_steps;
  j["best_epoch"] = model.best_epoch;
  nlohmann::ordered_json sel = nlohmann::ordered_json::array();
  for (const auto& r : model.selection)
    sel.push_back({{"epoch", r.epoch}, {"dev_macro_f1", r.dev_macro_f1}});
  j["selection"] = sel;
  j["params"] = model.params;

  std::ofstream out(std::filesystem::path(dir) / "model.json",
                    std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write checkpoint in " + dir);
  out << j.dump() << '\n';
  model.checkpoint_dir = dir;
}

inline TrainedModel load_checkpoint(const std::string& dir) {
  std::ifstream in(std::filesystem::path(dir) / "model.json", std::ios::binary);
  if (!in)
    throw Error(ErrorKind::artifact, "no checkpoint at " + dir +
                                         " (run the train command first)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, dir + "/model.json: " + e.what());
  }
  TrainedModel model;
  model.backend = trainer_backend_from_string(j.at("backend").get<std::string>());
  model.task = task_from_string(j.at("task").get<std::string>());
  model.taxonomy =
      LabelTaxonomy(model.task, j.at("labels").get<std::vector<std::string>>());
  const auto& c = j.at("config");
  model.config.backend = model.backend;
  model.config.task = model.task;
  model.config.max_length = c.at("max_length").get<size_t>();
  model.config.batch_size = c.at("batch_size").get<size_t>();
  model.config.learning_rate = c.at("learning_rate").get<double>();
  model.config.epochs = c.at("epochs").get<size_t>();
  model.config.input_prefix = c.at("input_prefix").get<std::string>();
  model.config.seed = c.at("seed").get<uint64_t>();
  model.config.device = c.at("device").get<std::string>();
  model.config.weight_decay = c.at("weight_decay").get<double>();
  model.config.clip_norm = c.at("clip_norm").get<double>();
  model.config.embedding_dim = c.at("embedding_dim").get<size_t>();
  model.config.select_on_dev = c.at("select_on_dev").get<bool>();
  model.vocab.tokens = j.at("vocab").get<std::vector<std::string>>();
  model.vocab.ids.clear();
  for (size_t i = 0; i < model.vocab.tokens.size(); ++i)
    model.vocab.ids[model.vocab.tokens[i]] = i;
  model.verbalizer = j.at("verbalizer").get<std::vector<std::string>>();
  model.label_tokens = j.at("label_tokens").get<std::vector<std::string>>();
  model.decode_positions = j.at("decode_positions").get<size_t>();
  model.train_size = j.at("train_size").get<size_t>();
  model.optimizer_steps = j.at("optimizer_steps").get<size_t>();
  model.best_epoch = j.at("best_epoch").get<size_t>();
  for (const auto& r : j.at("selection"))
    model.selection.push_back(
        {r.at("epoch").get<size_t>(), r.at("dev_macro_f1").get<double>()});
  model.params = j.at("params").get<std::vector<double>>();
  model.checkpoint_dir = dir;
  return model;
}

inline void write_timing(const TimingRecord& timing, const std::string& path) {
  nlohmann::ordered_json j;
  j["total_seconds"] = timing.total_seconds;
  j["epoch_seconds"] = timing.epoch_seconds;
  j["dataset_size"] = timing.dataset_size;
  j["optimizer_steps"] = timing.optimizer_steps;
  j["backend"] = timing.backend;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write timing file: " + path);
  out << j.dump(2) << '\n';
}

inline TimingRecord read_timing(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::artifact,
                "no timing record at " + path + " (run the train command first)");
  nlohmann::json j;
  in >> j;
  TimingRecord t;
  t.total_seconds = j.at("total_seconds").get<double>();
  t.epoch_seconds = j.at("epoch_seconds").get<std::vector<double>>();
  t.dataset_size = j.at("dataset_size").get<size_t>();
  t.optimizer_steps = j.at("optimizer_steps").get<size_t>();
  t.backend = j.at("backend").get<std::string>();
  return t;
}

}  // namespace foodaug
