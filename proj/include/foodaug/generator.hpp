#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "foodaug/corpus.hpp"
#include "foodaug/error.hpp"
#include "foodaug/imbalance.hpp"
#include "foodaug/prompt.hpp"
#include "foodaug/text.hpp"

namespace foodaug {

// ---------------------------------------------------------------------------
// Response cache: one file per request, addressed by a content hash of the
// rendered prompt plus decoding parameters.

inline std::string cache_key(const std::string& prompt, const Decoding& d) {
  char decoding[96];
  std::snprintf(decoding, sizeof(decoding), "\x1f%.4f\x1f%zu\x1f%llu",
                d.temperature, d.max_output_tokens,
                static_cast<unsigned long long>(d.sampling_seed));
  std::string content = prompt + decoding;
  uint64_t a = fnv1a64(content);
  uint64_t b = fnv1a64(content, 0x9e3779b97f4a7c15ull);
  return hex64(a) + hex64(b);
}

class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<std::string> get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::ifstream in(entry_path(key), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  void put(const std::string& key, const std::string& raw) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto tmp = entry_path(key);
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::io, "cannot write cache entry " + key);
      out << raw;
    }
    std::filesystem::rename(tmp, entry_path(key));
  }

  size_t size() const {
    size_t n = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir_))
      if (e.path().extension() == ".reply") ++n;
    return n;
  }

 private:
  std::filesystem::path entry_path(const std::string& key) const {
    return dir_ / (key + ".reply");
  }

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Backends

// Thrown by backends for failures that are worth retrying.
class TransportFailure : public Error {
 public:
  TransportFailure(const std::string& message, bool rate_limited = false)
      : Error(ErrorKind::generation, message), rate_limited_(rate_limited) {}
  bool rate_limited() const { return rate_limited_; }

 private:
  bool rate_limited_;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::string kind() const = 0;
  // Returns the raw reply text for one request.
  virtual std::string complete(const GenerationRequest& request,
                               const std::string& rendered_prompt) = 0;
};

// Deterministic test backend: emits paraphrase-like variants of the seed by
// substituting, dropping and swapping word tokens. Fully determined by
// (seed sample, sampling seed) and the backend's own seed.
class MockParaphraserBackend : public GenerationBackend {
 public:
  explicit MockParaphraserBackend(uint64_t seed = 0) : seed_(seed) {}

  std::string kind() const override { return "mock_paraphraser"; }

  std::string complete(const GenerationRequest& request,
                       const std::string&) override {
    std::mt19937_64 rng(seed_ ^ (request.decoding.sampling_seed * 0x9e3779b97f4a7c15ull + 1));
    std::ostringstream out;
    for (size_t k = 0; k < request.count; ++k) {
      out << (k + 1) << ". Title: " << variant_title(request.seed.title, rng, k)
          << "\n";
      out << "Body: " << variant_body(request.seed.text, rng) << "\n";
    }
    return out.str();
  }

 private:
  static std::string synonym(const std::string& token) {
    return token.back() == 'x' ? token + "y" : token + "x";
  }

  static std::string variant_title(const std::string& seed_title,
                                   std::mt19937_64& rng, size_t k) {
    static const char* prefixes[] = {"update", "notice", "advisory",
                                     "bulletin", "followup", "alert"};
    size_t p = rng() % (sizeof(prefixes) / sizeof(prefixes[0]));
    return std::string(prefixes[p]) + " " + std::to_string(k + 1) + ": " +
           seed_title;
  }

  static std::string variant_body(const std::string& seed_text,
                                  std::mt19937_64& rng) {
    std::vector<std::string> tokens = tokenize(seed_text);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& tok : tokens) {
      double roll = unit(rng);
      if (roll < 0.08) continue;              // drop
      if (roll < 0.38) out.push_back(synonym(tok));  // substitute
      else out.push_back(tok);
    }
    for (size_t i = 1; i < out.size(); ++i)
      if (unit(rng) < 0.10) std::swap(out[i - 1], out[i]);
    if (out.empty()) out = tokens;
    // Keep bodies long enough for the downstream length guard.
    while (out.size() < 12 && !tokens.empty())
      out.push_back(tokens[out.size() % tokens.size()]);
    std::string body;
    for (size_t i = 0; i < out.size(); ++i) {
      if (i) body += " ";
      body += out[i];
    }
    return body;
  }

  uint64_t seed_;
};

// Answers only from a primed cache; a miss is an error, never a live call.
class ReplayCacheBackend : public GenerationBackend {
 public:
  explicit ReplayCacheBackend(std::shared_ptr<ResponseCache> cache)
      : cache_(std::move(cache)) {}

  std::string kind() const override { return "replay_cache"; }

  std::string complete(const GenerationRequest&,
                       const std::string& rendered_prompt) override {
    throw Error(ErrorKind::generation,
                "uncached request: replay backend has no reply for prompt hash " +
                    cache_key(rendered_prompt, Decoding{}).substr(0, 16));
  }

  ResponseCache& cache() { return *cache_; }

 private:
  std::shared_ptr<ResponseCache> cache_;
};

struct LiveEndpointConfig {
  std::string url;       // e.g. http://127.0.0.1:8089/v1/chat/completions
  std::string api_key;
  std::string model = "gpt-4o-mini";
  int timeout_seconds = 60;
};

// Chat-completions style HTTP backend. Declared here, defined in
// live_backend.hpp to keep the HTTP dependency out of unit translation units
// that never touch the network.
class LiveEndpointBackend : public GenerationBackend {
 public:
  explicit LiveEndpointBackend(LiveEndpointConfig config)
      : config_(std::move(config)) {}

  std::string kind() const override { return "live_endpoint"; }
  std::string complete(const GenerationRequest& request,
                       const std::string& rendered_prompt) override;

 private:
  LiveEndpointConfig config_;
};

// ---------------------------------------------------------------------------
// generate(): render, consult cache, call the backend with retry/backoff,
// persist the raw reply, parse it into candidate samples.

// Serializes access to a live endpoint: at most one request per interval.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds min_interval)
      : min_interval_(min_interval) {}

  void acquire() {
    if (min_interval_.count() <= 0) return;
    std::unique_lock<std::mutex> lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    if (now < next_) {
      auto wait = next_;
      next_ += min_interval_;
      lock.unlock();
      std::this_thread::sleep_until(wait);
    } else {
      next_ = now + min_interval_;
    }
  }

 private:
  std::chrono::milliseconds min_interval_;
  std::chrono::steady_clock::time_point next_{};
  std::mutex mutex_;
};

struct GenerateOptions {
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{200};
  RateLimiter* rate_limiter = nullptr;
};

struct GenerateResult {
  std::vector<Sample> candidates;
  std::optional<std::string> shortfall;  // set when the reply held < count items
  bool cache_hit = false;
};

inline GenerateResult generate(const GenerationRequest& request,
                               GenerationBackend& backend, ResponseCache& cache,
                               const GenerateOptions& options = {}) {
  request.validate();
  const std::string prompt = render_prompt(request.template_, request);
  const std::string key = cache_key(prompt, request.decoding);

  GenerateResult result;
  std::string raw;
  if (auto cached = cache.get(key)) {
    raw = *cached;
    result.cache_hit = true;
  } else {
    GenerationRequest attempt_request = request;
    int attempt = 0;
    while (true) {
      attempt_request.attempt = attempt;
      try {
        if (options.rate_limiter) options.rate_limiter->acquire();
        raw = backend.complete(attempt_request, prompt);
        break;
      } catch (const TransportFailure& failure) {
        if (attempt >= options.max_retries)
          throw Error(ErrorKind::generation,
                      "generation failed for seed " + request.seed.id +
                          " after " + std::to_string(attempt + 1) +
                          " attempts: " + failure.what());
        auto delay = options.backoff_base * (1ll << attempt);
        if (failure.rate_limited()) delay += options.backoff_base;
        std::this_thread::sleep_for(delay);
        ++attempt;
      }
    }
    cache.put(key, raw);
  }

  std::vector<ReplyItem> items;
  try {
    items = parse_generation_reply(raw);
  } catch (const Error& e) {
    throw Error(ErrorKind::parse,
                "seed " + request.seed.id + ": " + e.what());
  }

  if (items.size() < request.count)
    result.shortfall = "seed " + request.seed.id + " request " +
                       std::to_string(request.request_index) + ": got " +
                       std::to_string(items.size()) + " of " +
                       std::to_string(request.count) + " variants";
  if (items.size() > request.count) items.resize(request.count);

  for (size_t i = 0; i < items.size(); ++i) {
    Sample s;
    s.id = "syn:" + request.seed.id + ":r" +
           std::to_string(request.request_index) + ":i" + std::to_string(i);
    s.title = items[i].title;
    s.text = items[i].body;
    s.hazard_label = request.seed.hazard_label;
    s.product_label = request.seed.product_label;
    s.provenance = Provenance::synthetic;
    s.parent_id = request.seed.id;
    result.candidates.push_back(std::move(s));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Dedup against existing splits and previously accepted candidates.

struct DedupRejection {
  std::string candidate_id;
  std::string match_id;
  std::string reason;  // "exact, split=test" / "near, split=train"
  double score = 1.0;  // Jaccard against the match
};

// Normalized-text index over one or more corpora. Accepted candidates are
// inserted as they pass, so later candidates are checked against them too.
class DedupIndex {
 public:
  void add_corpus(const Corpus& corpus, const std::string& tag) {
    for (const auto& s : corpus.samples) add_sample(s, tag);
  }

  void add_sample(const Sample& s, const std::string& tag) {
    Entry e;
    e.id = s.id;
    e.tag = tag;
    e.normalized = normalize(s.model_input());
    e.tokens = token_set(e.normalized);
    exact_.emplace(e.normalized, entries_.size());
    by_size_[e.tokens.size()].push_back(entries_.size());
    entries_.push_back(std::move(e));
  }

  struct Match {
    std::string id;
    std::string tag;
    bool exact = false;
    double score = 0.0;
  };

  std::optional<Match> find_duplicate(const Sample& candidate,
                                      double threshold) const {
    std::string norm = normalize(candidate.model_input());
    auto it = exact_.find(norm);
    if (it != exact_.end()) {
      const Entry& e = entries_[it->second];
      return Match{e.id, e.tag, true, 1.0};
    }
    TokenSet tokens = token_set(norm);
    // Jaccard >= t forces the set sizes within a factor of t of each other,
    // so only a narrow size window needs scanning.
    const size_t n = tokens.size();
    const size_t lo = static_cast<size_t>(std::ceil(threshold * n));
    const size_t hi = threshold > 0
                          ? static_cast<size_t>(std::floor(n / threshold))
                          : n;
    for (auto bucket = by_size_.lower_bound(std::max<size_t>(1, lo));
         bucket != by_size_.end() && bucket->first <= hi; ++bucket) {
      for (size_t idx : bucket->second) {
        const Entry& e = entries_[idx];
        double j = jaccard(tokens, e.tokens);
        if (j >= threshold) return Match{e.id, e.tag, false, j};
      }
    }
    return std::nullopt;
  }

  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::string id;
    std::string tag;
    std::string normalized;
    TokenSet tokens;
  };
  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> exact_;
  std::map<size_t, std::vector<size_t>> by_size_;  // token-set size -> entries
};

struct DedupResult {
  std::vector<Sample> accepted;
  std::vector<DedupRejection> rejections;
};

// Rejects exact normalized duplicates and near-duplicates at or above the
// Jaccard threshold. Accepted candidates join the index immediately, so
// within-batch duplicates are caught as well.
inline DedupResult dedup(const std::vector<Sample>& candidates,
                         DedupIndex& index, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw Error(ErrorKind::config, "dedup threshold must be in (0, 1]");
  DedupResult result;
  for (const auto& c : candidates) {
    if (auto match = index.find_duplicate(c, threshold)) {
      result.rejections.push_back(
          {c.id, match->id,
           std::string(match->exact ? "exact" : "near") + ", split=" + match->tag,
           match->score});
      continue;
    }
    index.add_sample(c, "accepted");
    result.accepted.push_back(c);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Label-preservation guard (heuristic, not a classifier).

struct LabelCheckOptions {
  size_t min_tokens = 10;
  double min_jaccard = 0.05;
};

struct LabelCheckResult {
  bool pass = true;
  std::string reason;
};

inline LabelCheckResult label_preservation_check(
    const Sample& candidate, const Sample& seed,
    const LabelCheckOptions& options = {}) {
  if (candidate.parent_id != std::optional<std::string>(seed.id))
    throw Error(ErrorKind::validation,
                "label check: candidate " + candidate.id +
                    " was not generated from seed " + seed.id);
  if (trim(candidate.text).empty()) return {false, "empty"};
  auto tokens = tokenize(candidate.text);
  if (tokens.size() < options.min_tokens)
    return {false, "too short: " + std::to_string(tokens.size()) + " tokens < " +
                       std::to_string(options.min_tokens)};
  double j = jaccard(TokenSet(tokens.begin(), tokens.end()),
                     token_set(seed.text));
  if (j < options.min_jaccard) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "lexically disjoint from seed: jaccard=%.4f",
                  j);
    return {false, buf};
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Plan execution: round-robin over per-label seeds until deficits are met or
// the failure budget runs out. One generated sample counts toward both its
// hazard and its product deficit.

struct ExecuteOptions {
  double dedup_threshold = 0.9;
  LabelCheckOptions label_check;
  size_t per_request_count = 5;
  double failure_budget_multiplier = 3.0;  // attempted requests per unit deficit
  size_t max_in_flight = 1;
  Decoding decoding;
  GenerateOptions generate;
};

struct LabelProgress {
  size_t deficit = 0;
  size_t requested = 0;  // candidate variants requested
  size_t accepted = 0;   // accepted while this label was being driven
  size_t rejected = 0;
  size_t failed_requests = 0;
  bool completed = true;
};

struct ExecutionReport {
  std::map<std::string, LabelProgress> hazard_progress;
  std::map<std::string, LabelProgress> product_progress;
  std::vector<DedupRejection> rejections;
  std::vector<std::string> warnings;
  Distribution hazard_after;
  Distribution product_after;
  size_t total_accepted = 0;
  size_t backend_calls = 0;  // actual backend completions (cache misses)
};

namespace detail {

inline uint64_t mix_seed(uint64_t a, const std::string& b, uint64_t c = 0) {
  uint64_t h = fnv1a64(b, a ^ 1469598103934665603ull);
  h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace detail

inline std::pair<std::vector<Sample>, ExecutionReport> execute_plan(
    const Corpus& train, const AugmentationPlan& hazard_plan,
    const AugmentationPlan& product_plan, GenerationBackend& backend,
    const PromptTemplate& tmpl, uint64_t rng_seed, ResponseCache& cache,
    const Corpus* dev = nullptr, const Corpus* test = nullptr,
    const ExecuteOptions& options = {}) {
  hazard_plan.validate();
  product_plan.validate();

  ExecutionReport report;
  std::vector<Sample> accepted;

  DedupIndex index;
  index.add_corpus(train, "train");
  if (dev) index.add_corpus(*dev, "dev");
  if (test) index.add_corpus(*test, "test");

  // Remaining deficits, jointly decremented across both tasks.
  std::map<std::string, long long> remaining_h, remaining_p;
  for (const auto& [label, e] : hazard_plan.entries)
    remaining_h[label] = static_cast<long long>(e.deficit);
  for (const auto& [label, e] : product_plan.entries)
    remaining_p[label] = static_cast<long long>(e.deficit);

  // Seeds come only from original samples, grouped per label.
  std::map<std::string, std::vector<const Sample*>> by_hazard, by_product;
  for (const auto& s : train.samples) {
    if (s.provenance != Provenance::original) continue;
    by_hazard[s.hazard_label].push_back(&s);
    by_product[s.product_label].push_back(&s);
  }

  std::unordered_map<std::string, size_t> request_counter;  // per seed id

  auto accept_candidate = [&](const Sample& c) {
    accepted.push_back(c);
    ++report.total_accepted;
    auto h = remaining_h.find(c.hazard_label);
    if (h != remaining_h.end()) --h->second;
    auto p = remaining_p.find(c.product_label);
    if (p != remaining_p.end()) --p->second;
  };

  auto drive_label = [&](Task task, const std::string& label,
                         LabelProgress& progress) {
    auto& remaining = task == Task::hazard_category ? remaining_h : remaining_p;
    auto& seeds_by_label = task == Task::hazard_category ? by_hazard : by_product;
    long long& need = remaining.at(label);
    if (need <= 0) return;

    auto seed_it = seeds_by_label.find(label);
    if (seed_it == seeds_by_label.end() || seed_it->second.empty()) {
      progress.completed = false;
      report.warnings.push_back("no original seeds for " +
                                std::string(to_string(task)) + " label '" +
                                label + "'; deficit " + std::to_string(need) +
                                " left unmet");
      return;
    }

    std::vector<const Sample*> seeds = seed_it->second;
    std::mt19937_64 label_rng(
        detail::mix_seed(rng_seed, std::string(to_string(task)) + "/" + label));
    std::shuffle(seeds.begin(), seeds.end(), label_rng);

    const size_t budget = static_cast<size_t>(
        std::max(1.0, options.failure_budget_multiplier *
                          static_cast<double>(need)));
    size_t requests_made = 0;
    size_t next_seed = 0;

    while (need > 0 && requests_made < budget) {
      // One wave of up to max_in_flight concurrent requests. Later requests
      // in a wave only cover what earlier ones have not already asked for.
      size_t wave = std::max<size_t>(1, options.max_in_flight);
      long long asked_for = 0;
      std::vector<GenerationRequest> requests;
      for (size_t w = 0;
           w < wave && need - asked_for > 0 && requests_made < budget; ++w) {
        const Sample* seed = seeds[next_seed++ % seeds.size()];
        size_t request_index = request_counter[seed->id]++;
        GenerationRequest req{*seed,
                              std::min<size_t>(options.per_request_count,
                                               static_cast<size_t>(need - asked_for)),
                              tmpl,
                              options.decoding,
                              0,
                              request_index};
        req.decoding.sampling_seed =
            detail::mix_seed(rng_seed, seed->id, request_index);
        ++requests_made;
        progress.requested += req.count;
        asked_for += static_cast<long long>(req.count);
        requests.push_back(std::move(req));
      }

      struct WaveResult {
        GenerationRequest request;
        GenerateResult result;
        std::optional<std::string> error;
      };
      std::vector<WaveResult> results;
      results.reserve(requests.size());

      if (requests.size() <= 1 || options.max_in_flight <= 1) {
        for (auto& req : requests) {
          WaveResult wr{req, {}, std::nullopt};
          try {
            wr.result = generate(req, backend, cache, options.generate);
          } catch (const Error& e) {
            wr.error = e.what();
          }
          results.push_back(std::move(wr));
        }
      } else {
        std::vector<std::future<WaveResult>> futures;
        for (auto& req : requests)
          futures.push_back(std::async(std::launch::async, [&, req]() {
            WaveResult wr{req, {}, std::nullopt};
            try {
              wr.result = generate(req, backend, cache, options.generate);
            } catch (const Error& e) {
              wr.error = e.what();
            }
            return wr;
          }));
        for (auto& f : futures) results.push_back(f.get());
      }

      // Completion order must not matter: process in (seed id, request
      // index) order.
      std::stable_sort(results.begin(), results.end(),
                       [](const WaveResult& a, const WaveResult& b) {
                         if (a.request.seed.id != b.request.seed.id)
                           return a.request.seed.id < b.request.seed.id;
                         return a.request.request_index < b.request.request_index;
                       });

      for (auto& wr : results) {
        if (wr.error) {
          ++progress.failed_requests;
          report.warnings.push_back(*wr.error);
          continue;
        }
        if (!wr.result.cache_hit) ++report.backend_calls;
        if (wr.result.shortfall) report.warnings.push_back(*wr.result.shortfall);
        for (const auto& candidate : wr.result.candidates) {
          auto check = label_preservation_check(candidate, wr.request.seed,
                                                options.label_check);
          if (!check.pass) {
            ++progress.rejected;
            report.rejections.push_back(
                {candidate.id, wr.request.seed.id,
                 "label-check: " + check.reason, 0.0});
            continue;
          }
          DedupResult d = dedup({candidate}, index, options.dedup_threshold);
          if (d.accepted.empty()) {
            ++progress.rejected;
            report.rejections.push_back(d.rejections.front());
            continue;
          }
          ++progress.accepted;
          accept_candidate(candidate);
        }
      }
    }

    if (need > 0) {
      progress.completed = false;
      report.warnings.push_back(
          "failure budget exhausted for " + std::string(to_string(task)) +
          " label '" + label + "': " + std::to_string(need) +
          " of " + std::to_string(progress.deficit) + " still missing");
    }
  };

  for (const auto& label : train.taxonomy(Task::hazard_category).labels()) {
    if (!hazard_plan.entries.count(label)) continue;
    LabelProgress progress;
    progress.deficit = hazard_plan.entries.at(label).deficit;
    drive_label(Task::hazard_category, label, progress);
    report.hazard_progress[label] = progress;
  }
  for (const auto& label : train.taxonomy(Task::product_category).labels()) {
    if (!product_plan.entries.count(label)) continue;
    LabelProgress progress;
    progress.deficit = product_plan.entries.at(label).deficit;
    drive_label(Task::product_category, label, progress);
    report.product_progress[label] = progress;
  }

  // Post-merge distributions for the report.
  report.hazard_after = class_distribution(train, Task::hazard_category);
  report.product_after = class_distribution(train, Task::product_category);
  for (const auto& s : accepted) {
    ++report.hazard_after[s.hazard_label];
    ++report.product_after[s.product_label];
  }
  // Joint execution may push a label past its target; report it, keep it.
  auto note_overshoot = [&](const AugmentationPlan& plan,
                            const Distribution& after, const char* task_name) {
    for (const auto& [label, e] : plan.entries) {
      auto it = after.find(label);
      if (it != after.end() && e.target > 0 && it->second > e.target)
        report.warnings.push_back(std::string("overshoot: ") + task_name +
                                  " label '" + label + "' reached " +
                                  std::to_string(it->second) + " (target " +
                                  std::to_string(e.target) + ")");
    }
  };
  note_overshoot(hazard_plan, report.hazard_after, "hazard");
  note_overshoot(product_plan, report.product_after, "product");

  // Exhaustive leakage scan: no accepted sample may exactly match dev/test.
  for (const Corpus* held_out : {dev, test}) {
    if (!held_out) continue;
    std::unordered_set<std::string> held;
    for (const auto& s : held_out->samples) held.insert(normalize(s.model_input()));
    for (const auto& s : accepted)
      if (held.count(normalize(s.model_input())))
        throw Error(ErrorKind::validation,
                    "leakage: accepted synthetic " + s.id + " duplicates a " +
                        std::string(to_string(held_out->split)) + " sample");
  }

  return {std::move(accepted), std::move(report)};
}

// ---------------------------------------------------------------------------

// Originals stay first and order-stable; synthetic ids must be fresh.
inline Corpus merge_augmented(const Corpus& train,
                              const std::vector<Sample>& synthetic) {
  std::unordered_set<std::string> ids;
  for (const auto& s : train.samples) ids.insert(s.id);
  Corpus merged = train;
  for (const auto& s : synthetic) {
    s.validate(train.taxonomies);
    if (s.provenance != Provenance::synthetic)
      throw Error(ErrorKind::validation,
                  "merge_augmented: sample " + s.id + " is not synthetic");
    if (!ids.insert(s.id).second)
      throw Error(ErrorKind::validation,
                  "merge_augmented: id collision on " + s.id);
    merged.samples.push_back(s);
  }
  merged.validate();
  return merged;
}

// Exact-normalized scan of synthetic samples against held-out splits.
struct LeakageHit {
  std::string synthetic_id;
  std::string held_out_id;
  Split split;
};

inline std::vector<LeakageHit> leakage_scan(const std::vector<Sample>& synthetic,
                                            const Corpus& held_out) {
  std::unordered_map<std::string, std::string> held;
  for (const auto& s : held_out.samples)
    held.emplace(normalize(s.model_input()), s.id);
  std::vector<LeakageHit> hits;
  for (const auto& s : synthetic) {
    auto it = held.find(normalize(s.model_input()));
    if (it != held.end()) hits.push_back({s.id, it->second, held_out.split});
  }
  return hits;
}

}  // namespace foodaug
