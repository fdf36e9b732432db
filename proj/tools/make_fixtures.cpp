// Deterministic generator for the corpora bundled with this repository.
//
// The incident files mirror the class structure of the public food-incident
// recall corpus: 5082 train / 565 dev / 997 test rows, with the train class
// marginals matching the reference study's reported per-class counts. Text
// bodies are synthesized, so the files are schema- and distribution-faithful
// stand-ins, not the original corpus.
//
// The fixture_* files are a small 6-class corpus (500 train / 100 dev /
// 100 test) with two 5-sample minority classes, used by the end-to-end
// augmentation-improvement checks.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "foodaug/csv.hpp"
#include "foodaug/imbalance.hpp"
#include "foodaug/taxonomy.hpp"

namespace {

using foodaug::Task;

struct Lexicon {
  std::vector<std::string> phrases;
};

const std::map<std::string, Lexicon>& hazard_lexicon() {
  static const std::map<std::string, Lexicon> lex = {
      {"allergens", {{"undeclared milk protein", "hidden peanut traces", "unlabelled soy residue"}}},
      {"biological", {{"salmonella contamination", "listeria monocytogenes growth", "mould spoilage"}}},
      {"chemical", {{"pesticide residue", "cleaning agent carryover", "elevated cadmium levels"}}},
      {"food additives and flavourings", {{"unauthorized colorant", "excess sulphite additive", "banned sweetener"}}},
      {"foreign bodies", {{"metal fragments", "glass shards", "hard plastic pieces"}}},
      {"fraud", {{"counterfeit labeling", "origin falsification", "diluted contents"}}},
      {"migration", {{"mineral oil migration", "printing ink transfer"}}},
      {"organoleptic aspects", {{"persistent off odor", "abnormal bitter taste", "unexpected discoloration"}}},
      {"other hazard", {{"improper cold chain handling", "unspecified production defect"}}},
      {"packaging defect", {{"broken vacuum seal", "swollen can lids", "leaking pouch seams"}}},
  };
  return lex;
}

const std::map<std::string, Lexicon>& product_lexicon() {
  static const std::map<std::string, Lexicon> lex = {
      {"alcoholic beverages", {{"craft beer", "sparkling wine"}}},
      {"cereals and bakery products", {{"wheat bread", "breakfast cereal"}}},
      {"cocoa and cocoa preparations, coffee and tea", {{"dark chocolate", "ground coffee"}}},
      {"confectionery", {{"gummy candies", "caramel sweets"}}},
      {"dietetic foods, food supplements, fortified foods", {{"protein powder", "vitamin supplement"}}},
      {"fats and oils", {{"olive oil", "table margarine"}}},
      {"feed materials", {{"cattle feed mix", "feed pellets"}}},
      {"food additives and flavourings", {{"vanilla flavoring", "spice extract"}}},
      {"food contact materials", {{"plastic storage containers", "coated baking paper"}}},
      {"fruits and vegetables", {{"fresh spinach", "frozen berries"}}},
      {"herbs and spices", {{"ground paprika", "dried oregano"}}},
      {"honey and royal jelly", {{"raw honey jars", "royal jelly capsules"}}},
      {"ices and desserts", {{"vanilla ice cream", "frozen dessert cups"}}},
      {"meat, egg and dairy products", {{"chicken fillets", "soft cheese"}}},
      {"non-alcoholic beverages", {{"apple juice", "energy drink"}}},
      {"nuts, nut products and seeds", {{"roasted almonds", "sesame seeds"}}},
      {"other food products/mixed", {{"ready meal trays", "mixed gift hampers"}}},
      {"pet feed", {{"dry dog food", "cat treat sticks"}}},
      {"prepared dishes and snacks", {{"potato chips", "frozen pizza"}}},
      {"seafood", {{"smoked salmon", "canned tuna"}}},
      {"soups, broths, sauces and condiments", {{"instant soup mix", "tomato sauce"}}},
      {"sugars and syrups", {{"maple syrup", "cane sugar"}}},
  };
  return lex;
}

const std::vector<std::string>& countries() {
  static const std::vector<std::string> v = {"us", "uk", "de", "fr", "au",
                                             "ca", "it", "es", "nl", "jp"};
  return v;
}

// Reference-study train marginals. Hazard counts are the ten quoted
// before-counts (sum 5082); quoted product counts cover 2050 rows and the
// remaining nine classes share the other 3032.
std::map<std::string, size_t> train_hazard_counts() {
  std::map<std::string, size_t> counts;
  for (const auto& [label, pair] : foodaug::paper_quoted_pairs(Task::hazard_category))
    counts[label] = pair.first;
  return counts;
}

std::map<std::string, size_t> train_product_counts() {
  std::map<std::string, size_t> counts;
  for (const auto& [label, pair] : foodaug::paper_quoted_pairs(Task::product_category))
    counts[label] = pair.first;
  counts["cereals and bakery products"] = 900;
  counts["fruits and vegetables"] = 650;
  counts["prepared dishes and snacks"] = 450;
  counts["seafood"] = 350;
  counts["nuts, nut products and seeds"] = 280;
  counts["soups, broths, sauces and condiments"] = 180;
  counts["cocoa and cocoa preparations, coffee and tea"] = 120;
  counts["dietetic foods, food supplements, fortified foods"] = 70;
  counts["ices and desserts"] = 32;
  return counts;
}

// Largest-remainder apportionment of `total` over the given weights.
std::map<std::string, size_t> apportion(const std::map<std::string, size_t>& weights,
                                        size_t total) {
  size_t weight_sum = 0;
  for (const auto& [label, w] : weights) weight_sum += w;
  std::map<std::string, size_t> out;
  std::vector<std::pair<double, std::string>> remainders;
  size_t assigned = 0;
  for (const auto& [label, w] : weights) {
    double exact = static_cast<double>(w) * total / weight_sum;
    size_t base = static_cast<size_t>(exact);
    out[label] = base;
    assigned += base;
    remainders.push_back({exact - base, label});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first > b.first;
                     return a.second < b.second;
                   });
  for (size_t i = 0; assigned < total; ++i, ++assigned) ++out[remainders[i % remainders.size()].second];
  return out;
}

std::vector<std::string> expand_labels(const std::map<std::string, size_t>& counts) {
  std::vector<std::string> labels;
  for (const auto& [label, count] : counts)
    for (size_t i = 0; i < count; ++i) labels.push_back(label);
  return labels;
}

std::string pick(const std::vector<std::string>& v, std::mt19937_64& rng) {
  return v[rng() % v.size()];
}

void write_incident_file(const std::filesystem::path& path, const std::string& tag,
                         const std::map<std::string, size_t>& hazard_counts,
                         const std::map<std::string, size_t>& product_counts,
                         uint64_t seed) {
  std::vector<std::string> hazards = expand_labels(hazard_counts);
  std::vector<std::string> products = expand_labels(product_counts);
  if (hazards.size() != products.size())
    throw std::runtime_error("marginal size mismatch for " + path.string());
  std::mt19937_64 rng(seed);
  std::shuffle(hazards.begin(), hazards.end(), rng);
  std::shuffle(products.begin(), products.end(), rng);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  foodaug::write_csv_row(out, {"year", "month", "day", "country", "title", "text",
                               "hazard-category", "product-category", "hazard",
                               "product"});

  static const std::vector<std::string> verbs = {
      "was detected in", "was confirmed in", "prompted a recall of",
      "was traced to", "was reported in"};
  static const std::vector<std::string> closers = {
      "distribution has been suspended while authorities review the supplier records",
      "the producer issued a voluntary withdrawal covering all affected lots",
      "retailers were instructed to remove remaining stock from shelves",
      "no illnesses have been reported and the investigation is ongoing",
      "consumers are urged to return the product to the point of purchase"};

  for (size_t i = 0; i < hazards.size(); ++i) {
    const std::string& hazard = hazards[i];
    const std::string& product = products[i];
    std::string hazard_phrase = pick(hazard_lexicon().at(hazard).phrases, rng);
    std::string product_phrase = pick(product_lexicon().at(product).phrases, rng);
    char serial[32];
    std::snprintf(serial, sizeof(serial), "%s-%05zu", tag.c_str(), i + 1);
    int year = 2012 + static_cast<int>(rng() % 11);
    int month = 1 + static_cast<int>(rng() % 12);
    int day = 1 + static_cast<int>(rng() % 28);
    std::string country = pick(countries(), rng);

    std::string title = "recall notice " + std::string(serial) + ": " +
                        product_phrase + " affected by " + hazard_phrase;
    std::string text =
        "case " + std::string(serial) + ": " + hazard_phrase + " " +
        pick(verbs, rng) + " " + product_phrase +
        " during a routine inspection at a " + country +
        " facility, and follow-up laboratory testing of retained batch samples "
        "confirmed the initial finding; " +
        pick(closers, rng) + ".";

    foodaug::write_csv_row(
        out, {std::to_string(year), std::to_string(month), std::to_string(day),
              country, title, text, hazard, product,
              hazard + " subtype " + std::to_string(1 + rng() % 3),
              product_phrase});
  }
}

// ---------------------------------------------------------------------------
// Small 6-class pipeline fixture.

struct FixtureClass {
  std::string label;
  std::string stem;       // stem for the class's private vocabulary
  int confuser = -1;      // minority classes borrow tokens from this class
};

const std::vector<FixtureClass>& fixture_classes() {
  static const std::vector<FixtureClass> classes = {
      {"spoilage", "spor", -1},   {"residue", "resi", -1},
      {"device fault", "devi", -1}, {"mislabeling", "misl", -1},
      {"toxin", "toxi", 0},       {"tampering", "tamp", 1},
  };
  return classes;
}

std::vector<std::string> class_vocab(const FixtureClass& c) {
  static const std::vector<std::string> suffixes = {
      "anta", "belo", "cavi", "dola", "erin", "fusa", "gale", "hira", "ilo",
      "jura", "kemi", "lons", "mira", "nodo", "opal", "pira", "quan", "rosk"};
  std::vector<std::string> vocab;
  for (const auto& s : suffixes) vocab.push_back(c.stem + s);
  return vocab;
}

const std::vector<std::string>& fixture_shared_vocab() {
  static const std::vector<std::string> v = {
      "facility", "inspection", "batch", "supplier", "routine", "storage",
      "sample", "complaint", "review", "notice", "report", "shipment",
      "warehouse", "carton", "label", "officer", "audit", "record",
      "process", "line", "operator", "shift", "control", "check"};
  return v;
}

void write_fixture_file(const std::filesystem::path& path, const std::string& tag,
                        const std::vector<size_t>& class_counts, uint64_t seed) {
  static const std::vector<std::string> fixture_products = {"bakery", "dairy",
                                                            "produce"};
  std::mt19937_64 rng(seed);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  foodaug::write_csv_row(out, {"year", "month", "day", "country", "title", "text",
                               "hazard-category", "product-category"});
  size_t serial = 0;
  for (size_t ci = 0; ci < fixture_classes().size(); ++ci) {
    const FixtureClass& cls = fixture_classes()[ci];
    std::vector<std::string> core = class_vocab(cls);
    std::vector<std::string> confuser =
        cls.confuser >= 0 ? class_vocab(fixture_classes()[cls.confuser])
                          : std::vector<std::string>{};
    for (size_t i = 0; i < class_counts[ci]; ++i) {
      ++serial;
      char id[32];
      std::snprintf(id, sizeof(id), "%s%04zu", tag.c_str(), serial);
      std::vector<std::string> words;
      for (int w = 0; w < 7; ++w) words.push_back(pick(core, rng));
      size_t filler = confuser.empty() ? 10 : 6;
      for (size_t w = 0; w < filler; ++w)
        words.push_back(pick(fixture_shared_vocab(), rng));
      for (size_t w = 0; !confuser.empty() && w < 4; ++w)
        words.push_back(pick(confuser, rng));
      std::shuffle(words.begin(), words.end(), rng);
      std::string text = "case " + std::string(id) + " findings:";
      for (const auto& w : words) text += " " + w;
      std::string title = "incident " + std::string(id) + " " + pick(core, rng);
      std::string product = fixture_products[serial % fixture_products.size()];
      foodaug::write_csv_row(out, {"2023", std::to_string(1 + serial % 12),
                                   std::to_string(1 + serial % 28), "us", title,
                                   text, cls.label, product});
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path out_dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(out_dir);

  auto hazard_train = train_hazard_counts();
  auto product_train = train_product_counts();
  write_incident_file(out_dir / "incidents_train.csv", "trn", hazard_train,
                      product_train, 20250101);
  write_incident_file(out_dir / "incidents_dev.csv", "dev",
                      apportion(hazard_train, 565), apportion(product_train, 565),
                      20250202);
  write_incident_file(out_dir / "incidents_test.csv", "tst",
                      apportion(hazard_train, 997), apportion(product_train, 997),
                      20250303);

  write_fixture_file(out_dir / "fixture_train.csv", "ftr",
                     {150, 140, 110, 90, 5, 5}, 411);
  write_fixture_file(out_dir / "fixture_dev.csv", "fdv", {17, 17, 17, 17, 16, 16},
                     412);
  write_fixture_file(out_dir / "fixture_test.csv", "fts", {17, 17, 17, 17, 16, 16},
                     413);

  std::cout << "fixtures written to " << out_dir.string() << "\n";
  return 0;
}
