#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "foodaug/csv.hpp"
#include "foodaug/error.hpp"
#include "foodaug/taxonomy.hpp"
#include "foodaug/text.hpp"

namespace foodaug {

enum class Split { train, dev, test };

inline const char* to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "train";
}

inline Split split_from_string(const std::string& s) {
  std::string n = normalize(s);
  if (n == "train") return Split::train;
  if (n == "dev" || n == "validation") return Split::dev;
  if (n == "test") return Split::test;
  throw Error(ErrorKind::config, "unknown split: " + s);
}

enum class Provenance { original, synthetic };

inline const char* to_string(Provenance p) {
  return p == Provenance::original ? "original" : "synthetic";
}

// One incident record. Labels are canonical taxonomy strings; synthetic
// samples carry the id of the seed they were generated from.
struct Sample {
  std::string id;
  std::string title;
  std::string text;
  std::string hazard_label;
  std::string product_label;
  Provenance provenance = Provenance::original;
  std::optional<std::string> parent_id;
  std::map<std::string, std::string> source_meta;

  // Model input: title and body joined by a single space.
  std::string model_input() const { return title + " " + text; }

  void validate(const TaxonomyPair& taxonomies) const {
    if (id.empty()) throw Error(ErrorKind::validation, "sample has empty id");
    if (trim(title).empty())
      throw Error(ErrorKind::validation, "sample " + id + ": empty title");
    if (trim(text).empty())
      throw Error(ErrorKind::validation, "sample " + id + ": empty text");
    if (!taxonomies.hazard.contains(hazard_label))
      throw Error(ErrorKind::validation,
                  "sample " + id + ": hazard label not in taxonomy: " + hazard_label);
    if (!taxonomies.product.contains(product_label))
      throw Error(ErrorKind::validation,
                  "sample " + id + ": product label not in taxonomy: " + product_label);
    bool synthetic = provenance == Provenance::synthetic;
    if (synthetic != parent_id.has_value())
      throw Error(ErrorKind::validation,
                  "sample " + id + ": provenance and parent_id disagree");
  }

  bool operator==(const Sample& other) const {
    return id == other.id && title == other.title && text == other.text &&
           hazard_label == other.hazard_label &&
           product_label == other.product_label &&
           provenance == other.provenance && parent_id == other.parent_id &&
           source_meta == other.source_meta;
  }
};

// Immutable after load; all operations on it are pure reads.
struct Corpus {
  Split split = Split::train;
  std::vector<Sample> samples;
  TaxonomyPair taxonomies;

  size_t size() const { return samples.size(); }

  const LabelTaxonomy& taxonomy(Task task) const {
    return taxonomies.for_task(task);
  }

  void validate() const {
    std::unordered_set<std::string> ids;
    ids.reserve(samples.size());
    for (const auto& s : samples) {
      s.validate(taxonomies);
      if (!ids.insert(s.id).second)
        throw Error(ErrorKind::validation, "duplicate sample id: " + s.id);
      if (split != Split::train && s.provenance != Provenance::original)
        throw Error(ErrorKind::validation,
                    std::string(to_string(split)) +
                        " corpus contains synthetic sample " + s.id);
    }
  }

  bool operator==(const Corpus& other) const {
    return split == other.split && samples == other.samples &&
           taxonomies == other.taxonomies;
  }
};

enum class LoadMode { strict, lenient };

struct RowIssue {
  size_t row;  // 1-based data row index
  std::string reason;
};

struct LoadReport {
  size_t rows_read = 0;
  std::vector<RowIssue> skipped;
};

namespace detail {

inline std::string padded_index(size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06zu", n);
  return buf;
}

}  // namespace detail

// Loads the incident CSV. Required columns: year, month, day, country,
// title, text, hazard-category, product-category. The fine-grained
// 'hazard'/'product' columns, when present, ride along in source_meta.
inline Corpus load_corpus(const std::string& path, Split split,
                          const TaxonomyPair& taxonomies,
                          LoadMode mode = LoadMode::strict,
                          LoadReport* report = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open CSV file: " + path);
  CsvReader reader(in);

  auto header = reader.next();
  if (!header) throw Error(ErrorKind::schema, "empty CSV file: " + path);

  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header->size(); ++i) col[normalize((*header)[i])] = i;

  static const char* required[] = {"year",  "month", "day",
                                   "country", "title", "text",
                                   "hazard-category", "product-category"};
  for (const char* name : required)
    if (!col.count(name))
      throw Error(ErrorKind::schema,
                  "CSV " + path + " is missing required column: " + name);

  static const char* meta_cols[] = {"year", "month", "day", "country",
                                    "hazard", "product"};

  Corpus corpus{split, {}, taxonomies};

  auto cell = [&](const std::vector<std::string>& row, const char* name) {
    size_t i = col.at(name);
    return i < row.size() ? row[i] : std::string();
  };

  size_t row_index = 0;
  while (auto row = reader.next()) {
    ++row_index;
    if (report) ++report->rows_read;
    std::string row_error;
    Sample s;
    s.id = std::string(to_string(split)) + "-" + detail::padded_index(row_index);
    s.title = trim(cell(*row, "title"));
    s.text = trim(cell(*row, "text"));
    s.provenance = Provenance::original;
    std::string hazard_raw = cell(*row, "hazard-category");
    std::string product_raw = cell(*row, "product-category");

    if (s.title.empty()) row_error = "empty title";
    else if (s.text.empty()) row_error = "empty text";
    else if (!taxonomies.hazard.contains(hazard_raw))
      row_error = "hazard-category not in taxonomy: " + normalize(hazard_raw);
    else if (!taxonomies.product.contains(product_raw))
      row_error = "product-category not in taxonomy: " + normalize(product_raw);

    if (!row_error.empty()) {
      if (mode == LoadMode::strict)
        throw Error(ErrorKind::validation,
                    path + " row " + std::to_string(row_index) + ": " + row_error);
      if (report) report->skipped.push_back({row_index, row_error});
      continue;
    }

    s.hazard_label = taxonomies.hazard.canonical(hazard_raw);
    s.product_label = taxonomies.product.canonical(product_raw);
    for (const char* name : meta_cols) {
      if (!col.count(name)) continue;
      std::string v = trim(cell(*row, name));
      if (!v.empty()) s.source_meta[name] = v;
    }
    corpus.samples.push_back(std::move(s));
  }

  corpus.validate();
  return corpus;
}

namespace detail {

inline nlohmann::ordered_json sample_to_json(const Sample& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["title"] = s.title;
  j["text"] = s.text;
  j["hazard_label"] = s.hazard_label;
  j["product_label"] = s.product_label;
  j["provenance"] = to_string(s.provenance);
  if (s.parent_id) j["parent_id"] = *s.parent_id;
  if (!s.source_meta.empty()) {
    nlohmann::ordered_json meta;
    for (const auto& [k, v] : s.source_meta) meta[k] = v;
    j["source_meta"] = meta;
  }
  return j;
}

inline Sample sample_from_json(const nlohmann::json& j, size_t line) {
  auto need = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string())
      throw Error(ErrorKind::parse, "line " + std::to_string(line) +
                                        ": missing field '" + key + "'");
    return j[key].get<std::string>();
  };
  Sample s;
  s.id = need("id");
  s.title = need("title");
  s.text = need("text");
  s.hazard_label = need("hazard_label");
  s.product_label = need("product_label");
  std::string prov = need("provenance");
  if (prov == "original") s.provenance = Provenance::original;
  else if (prov == "synthetic") s.provenance = Provenance::synthetic;
  else
    throw Error(ErrorKind::parse,
                "line " + std::to_string(line) + ": bad provenance '" + prov + "'");
  if (j.contains("parent_id")) s.parent_id = j["parent_id"].get<std::string>();
  if (j.contains("source_meta"))
    for (const auto& [k, v] : j["source_meta"].items())
      s.source_meta[k] = v.get<std::string>();
  return s;
}

}  // namespace detail

// One JSON record per line. The first line is a header carrying the split
// and both label sets, so a corpus file is self-contained.
inline void write_corpus(const Corpus& corpus, const std::string& path) {
  corpus.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write corpus file: " + path);
  nlohmann::ordered_json header;
  header["format"] = "incident-corpus";
  header["split"] = to_string(corpus.split);
  header["hazard_labels"] = corpus.taxonomies.hazard.labels();
  header["product_labels"] = corpus.taxonomies.product.labels();
  out << header.dump() << '\n';
  for (const auto& s : corpus.samples) out << detail::sample_to_json(s).dump() << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

inline Corpus read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open corpus file: " + path);
  std::string line;
  size_t line_no = 0;

  auto parse_line = [&]() -> nlohmann::json {
    try {
      return nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse,
                  path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  };

  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, path + ": empty corpus file");
  ++line_no;
  nlohmann::json header = parse_line();
  if (!header.contains("format") || header["format"] != "incident-corpus")
    throw Error(ErrorKind::parse, path + ": not an incident-corpus file");

  Corpus corpus{
      split_from_string(header.at("split").get<std::string>()),
      {},
      TaxonomyPair{
          LabelTaxonomy(Task::hazard_category,
                        header.at("hazard_labels").get<std::vector<std::string>>()),
          LabelTaxonomy(Task::product_category,
                        header.at("product_labels").get<std::vector<std::string>>())}};

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j = parse_line();
    try {
      corpus.samples.push_back(detail::sample_from_json(j, line_no));
    } catch (const Error& e) {
      throw Error(e.kind(), path + " " + e.what());
    }
  }
  corpus.validate();
  return corpus;
}

using Distribution = std::map<std::string, size_t>;

// Per-class counts; every taxonomy label is present, absent classes count 0.
inline Distribution class_distribution(const Corpus& corpus, Task task) {
  const LabelTaxonomy& tax = corpus.taxonomy(task);
  Distribution dist;
  for (const auto& label : tax.labels()) dist[label] = 0;
  for (const auto& s : corpus.samples) {
    const std::string& label =
        task == Task::hazard_category ? s.hazard_label : s.product_label;
    ++dist.at(tax.canonical(label));
  }
  return dist;
}

inline size_t distribution_total(const Distribution& dist) {
  size_t total = 0;
  for (const auto& [label, count] : dist) total += count;
  return total;
}

}  // namespace foodaug
