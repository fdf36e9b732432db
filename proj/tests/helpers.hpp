#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "foodaug/corpus.hpp"

namespace testutil {

inline std::filesystem::path data_dir() { return FOODAUG_DATA_DIR; }

// Fresh directory under the system temp root, removed when the guard dies.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& stem) {
    static std::mt19937_64 rng(std::random_device{}());
    path = std::filesystem::temp_directory_path() /
           (stem + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str(const std::string& rel = "") const {
    return rel.empty() ? path.string() : (path / rel).string();
  }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

// Two-task toy taxonomy used across the unit tests.
inline foodaug::TaxonomyPair toy_taxonomies(
    std::vector<std::string> hazard = {"alpha", "beta", "gamma", "delta"},
    std::vector<std::string> product = {"x", "y"}) {
  return foodaug::TaxonomyPair{
      foodaug::LabelTaxonomy(foodaug::Task::hazard_category, std::move(hazard)),
      foodaug::LabelTaxonomy(foodaug::Task::product_category, std::move(product))};
}

inline foodaug::Sample make_sample(const std::string& id, const std::string& title,
                                   const std::string& text,
                                   const std::string& hazard,
                                   const std::string& product) {
  foodaug::Sample s;
  s.id = id;
  s.title = title;
  s.text = text;
  s.hazard_label = hazard;
  s.product_label = product;
  s.provenance = foodaug::Provenance::original;
  return s;
}

inline foodaug::Corpus incidents(foodaug::Split split) {
  auto taxonomies = foodaug::standard_taxonomies();
  const char* name = split == foodaug::Split::train  ? "incidents_train.csv"
                     : split == foodaug::Split::dev ? "incidents_dev.csv"
                                                    : "incidents_test.csv";
  return foodaug::load_corpus((data_dir() / name).string(), split, taxonomies);
}

}  // namespace testutil
