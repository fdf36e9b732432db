#include <catch2/catch_amalgamated.hpp>

#include "foodaug/text.hpp"

using namespace foodaug;

TEST_CASE("normalize lowercases and collapses whitespace") {
  CHECK(normalize("  Hello   World \t") == "hello world");
  CHECK(normalize("") == "");
  CHECK(normalize(" \n ") == "");
  CHECK(normalize("a") == "a");
}

TEST_CASE("tokenize splits on non-alphanumerics and lowercases") {
  CHECK(tokenize("Recall: milk-protein found!") ==
        std::vector<std::string>{"recall", "milk", "protein", "found"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("123 abc") == std::vector<std::string>{"123", "abc"});
}

TEST_CASE("jaccard over token sets") {
  auto a = token_set("a b c d");
  auto b = token_set("a b c e");
  CHECK(jaccard(a, b) == Catch::Approx(3.0 / 5.0));
  CHECK(jaccard(a, a) == 1.0);
  CHECK(jaccard(token_set(""), token_set("")) == 1.0);
  CHECK(jaccard(token_set("a"), token_set("")) == 0.0);
}

TEST_CASE("levenshtein distance basics") {
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("allergen", "allergens") == 1);
  CHECK(normalized_edit_distance("", "") == 0.0);
  CHECK(normalized_edit_distance("abc", "abc") == 0.0);
  CHECK(normalized_edit_distance("xqzzw", "fraud") == 1.0);
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(fnv1a64("") == 1469598103934665603ull);
  CHECK(fnv1a64("a") == fnv1a64("a"));
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(hex64(0).size() == 16);
}
