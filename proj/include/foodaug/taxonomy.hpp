#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "foodaug/error.hpp"
#include "foodaug/text.hpp"

namespace foodaug {

enum class Task { hazard_category, product_category };

inline const char* to_string(Task t) {
  return t == Task::hazard_category ? "hazard_category" : "product_category";
}

inline Task task_from_string(const std::string& s) {
  std::string n = normalize(s);
  if (n == "hazard_category" || n == "hazard" || n == "hazard-category")
    return Task::hazard_category;
  if (n == "product_category" || n == "product" || n == "product-category")
    return Task::product_category;
  throw Error(ErrorKind::config, "unknown task: " + s);
}

// Closed, ordered label set for one task. Labels are stored in canonical
// (normalized) form; lookups normalize their argument first.
class LabelTaxonomy {
 public:
  LabelTaxonomy(Task task, std::vector<std::string> labels) : task_(task) {
    labels_.reserve(labels.size());
    for (const auto& raw : labels) {
      std::string canon = normalize(raw);
      if (canon.empty())
        throw Error(ErrorKind::validation, "taxonomy label is empty");
      if (index_.count(canon))
        throw Error(ErrorKind::validation, "duplicate taxonomy label: " + canon);
      index_[canon] = labels_.size();
      labels_.push_back(std::move(canon));
    }
    if (labels_.empty())
      throw Error(ErrorKind::validation, "taxonomy has no labels");
  }

  Task task() const { return task_; }
  const std::vector<std::string>& labels() const { return labels_; }
  size_t size() const { return labels_.size(); }
  const std::string& label(size_t index) const { return labels_.at(index); }

  std::optional<size_t> find(const std::string& raw) const {
    auto it = index_.find(normalize(raw));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& raw) const { return find(raw).has_value(); }

  size_t index_of(const std::string& raw) const {
    auto idx = find(raw);
    if (!idx)
      throw Error(ErrorKind::validation,
                  "label not in " + std::string(to_string(task_)) +
                      " taxonomy: " + normalize(raw));
    return *idx;
  }

  std::string canonical(const std::string& raw) const {
    return labels_[index_of(raw)];
  }

  bool operator==(const LabelTaxonomy& other) const {
    return task_ == other.task_ && labels_ == other.labels_;
  }

 private:
  Task task_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, size_t> index_;
};

// The two fixed taxonomies of the incident dataset: 10 hazard classes and
// 22 product classes.
inline const LabelTaxonomy& standard_hazard_taxonomy() {
  static const LabelTaxonomy tax(Task::hazard_category, {
      "allergens",
      "biological",
      "chemical",
      "food additives and flavourings",
      "foreign bodies",
      "fraud",
      "migration",
      "organoleptic aspects",
      "other hazard",
      "packaging defect",
  });
  return tax;
}

inline const LabelTaxonomy& standard_product_taxonomy() {
  static const LabelTaxonomy tax(Task::product_category, {
      "alcoholic beverages",
      "cereals and bakery products",
      "cocoa and cocoa preparations, coffee and tea",
      "confectionery",
      "dietetic foods, food supplements, fortified foods",
      "fats and oils",
      "feed materials",
      "food additives and flavourings",
      "food contact materials",
      "fruits and vegetables",
      "herbs and spices",
      "honey and royal jelly",
      "ices and desserts",
      "meat, egg and dairy products",
      "non-alcoholic beverages",
      "nuts, nut products and seeds",
      "other food products/mixed",
      "pet feed",
      "prepared dishes and snacks",
      "seafood",
      "soups, broths, sauces and condiments",
      "sugars and syrups",
  });
  return tax;
}

struct TaxonomyPair {
  LabelTaxonomy hazard;
  LabelTaxonomy product;

  const LabelTaxonomy& for_task(Task t) const {
    return t == Task::hazard_category ? hazard : product;
  }

  bool operator==(const TaxonomyPair& other) const {
    return hazard == other.hazard && product == other.product;
  }
};

inline TaxonomyPair standard_taxonomies() {
  const auto& h = standard_hazard_taxonomy();
  const auto& p = standard_product_taxonomy();
  if (h.size() != 10)
    throw Error(ErrorKind::validation, "hazard taxonomy must have 10 classes");
  if (p.size() != 22)
    throw Error(ErrorKind::validation, "product taxonomy must have 22 classes");
  return TaxonomyPair{h, p};
}

}  // namespace foodaug
