#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "foodaug/imbalance.hpp"
#include "helpers.hpp"

using namespace foodaug;

namespace {

LabelTaxonomy two_labels() {
  return LabelTaxonomy(Task::hazard_category, {"a", "b"});
}

}  // namespace

TEST_CASE("build_plan with explicit targets") {
  LabelTaxonomy tax(Task::hazard_category, {"migration", "allergens"});
  Distribution dist{{"migration", 3}, {"allergens", 1854}};

  AugmentationPlan plan = build_plan(
      dist, tax,
      TargetPolicy::explicit_targets({{"migration", 129}, {"allergens", 1854}}));
  CHECK(plan.entries.at("migration").deficit == 126);
  CHECK(plan.entries.at("allergens").deficit == 0);
  CHECK(plan.total_target() == plan.total_before() + plan.total_deficit());
}

TEST_CASE("build_plan floor policy") {
  Distribution dist{{"a", 50}, {"b", 150}};
  AugmentationPlan plan = build_plan(dist, two_labels(), TargetPolicy::floor_of(100));
  CHECK(plan.entries.at("a").deficit == 50);
  CHECK(plan.entries.at("b").deficit == 0);
  CHECK(plan.entries.at("b").target == 150);
}

TEST_CASE("build_plan multiplier policy respects the cap and never deletes") {
  Distribution dist{{"a", 10}, {"b", 300}};
  AugmentationPlan plan =
      build_plan(dist, two_labels(), TargetPolicy::multiplier_of(2.0, 400));
  CHECK(plan.entries.at("a").target == 20);
  CHECK(plan.entries.at("b").target == 400);
  CHECK_THROWS_AS(TargetPolicy::multiplier_of(0.5), Error);
}

TEST_CASE("explicit target outside the taxonomy is an error") {
  Distribution dist{{"a", 1}, {"b", 2}};
  CHECK_THROWS_AS(build_plan(dist, two_labels(),
                             TargetPolicy::explicit_targets({{"zz", 10}})),
                  Error);
}

TEST_CASE("explicit target below the current count plans no deletion") {
  Distribution dist{{"a", 150}, {"b", 10}};
  AugmentationPlan plan = build_plan(
      dist, two_labels(), TargetPolicy::explicit_targets({{"a", 100}}));
  CHECK(plan.entries.at("a").deficit == 0);
  CHECK(plan.total_deficit() == 0);
}

TEST_CASE("distribution must cover the taxonomy") {
  Distribution dist{{"a", 1}};
  CHECK_THROWS_AS(build_plan(dist, two_labels(), TargetPolicy::floor_of(5)), Error);
}

TEST_CASE("reference plan reproduces every quoted before/after pair") {
  AugmentationPlan hazard = paper_reference_plan(Task::hazard_category);
  CHECK(hazard.total_before() == 5082);
  CHECK(hazard.total_target() == 6514);
  CHECK(hazard.total_deficit() == 1432);
  CHECK(hazard.entries.at("migration").before == 3);
  CHECK(hazard.entries.at("migration").target == 129);
  CHECK(hazard.entries.at("food additives and flavourings").target == 144);
  CHECK(hazard.entries.at("organoleptic aspects").target == 229);
  CHECK(hazard.entries.at("packaging defect").target == 216);
  CHECK(hazard.entries.at("other hazard").target == 194);
  CHECK(hazard.entries.at("chemical").target == 523);
  CHECK(hazard.entries.at("fraud").target == 447);
  CHECK(hazard.entries.at("foreign bodies").target == 680);
  CHECK(hazard.entries.at("biological").target == 1910);
  CHECK(hazard.entries.at("allergens").target == 2042);

  AugmentationPlan product = paper_reference_plan(Task::product_category);
  CHECK(product.entries.at("herbs and spices").deficit == 10);
  CHECK(product.entries.at("sugars and syrups").before == 5);
  CHECK(product.entries.at("sugars and syrups").target == 105);
  CHECK(product.entries.at("meat, egg and dairy products").target == 1504);
  // Labels the study never quotes stay at deficit 0.
  CHECK(product.entries.at("seafood").deficit == 0);
  CHECK(product.entries.at("fruits and vegetables").deficit == 0);
  CHECK(product.entries.size() == 22);
}

TEST_CASE("reference plan filled from a distribution covers unquoted labels") {
  Corpus train = testutil::incidents(Split::train);
  Distribution dist = class_distribution(train, Task::product_category);
  AugmentationPlan plan = paper_reference_plan(Task::product_category, dist);
  CHECK(plan.total_before() == 5082);
  CHECK(plan.entries.at("seafood").before == dist.at("seafood"));
  CHECK(plan.entries.at("seafood").deficit == 0);
  CHECK(plan.entries.at("sugars and syrups").before == 5);  // quoted wins
}

TEST_CASE("imbalance report") {
  SECTION("reference hazard counts give a 618x ratio") {
    Distribution dist;
    for (const auto& [label, pair] : paper_quoted_pairs(Task::hazard_category))
      dist[label] = pair.first;
    ImbalanceReport rep = imbalance_report(dist);
    CHECK(rep.max_min_ratio == Catch::Approx(1854.0 / 3.0));
    CHECK(rep.max_min_ratio == Catch::Approx(618.0));
    CHECK(rep.rows.front().label == "allergens");
    CHECK(rep.rows.back().label == "migration");
    CHECK(rep.total == 5082);
  }

  SECTION("uniform distribution has ratio 1") {
    ImbalanceReport rep = imbalance_report({{"a", 10}, {"b", 10}});
    CHECK(rep.max_min_ratio == 1.0);
  }

  SECTION("single class is degenerate but defined") {
    ImbalanceReport rep = imbalance_report({{"a", 7}});
    CHECK(rep.max_min_ratio == 1.0);
  }

  SECTION("rows are sorted descending") {
    ImbalanceReport rep = imbalance_report({{"a", 1}, {"b", 9}, {"c", 5}});
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].count == 9);
    CHECK(rep.rows[1].count == 5);
    CHECK(rep.rows[2].count == 1);
    CHECK(rep.rows[0].share == Catch::Approx(0.6));
  }
}

TEST_CASE("raising a target never lowers any deficit") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 200; ++round) {
    size_t k = 2 + rng() % 8;
    std::vector<std::string> labels;
    Distribution dist;
    std::map<std::string, size_t> targets;
    for (size_t i = 0; i < k; ++i) {
      std::string label = "l" + std::to_string(i);
      labels.push_back(label);
      dist[label] = rng() % 200;
      targets[label] = rng() % 300;
    }
    LabelTaxonomy tax(Task::hazard_category, labels);
    AugmentationPlan base =
        build_plan(dist, tax, TargetPolicy::explicit_targets(targets));

    std::string bumped = labels[rng() % k];
    auto raised = targets;
    raised[bumped] += 1 + rng() % 50;
    AugmentationPlan more =
        build_plan(dist, tax, TargetPolicy::explicit_targets(raised));

    for (const auto& label : labels) {
      CHECK(more.entries.at(label).deficit >= base.entries.at(label).deficit);
      CHECK(base.entries.at(label).deficit ==
            std::max<long long>(0, static_cast<long long>(base.entries.at(label).target) -
                                        static_cast<long long>(dist.at(label))));
    }
  }
}

TEST_CASE("plan files round-trip") {
  testutil::TempDir tmp("plan");
  AugmentationPlan plan = paper_reference_plan(Task::hazard_category);
  write_plan(plan, tmp.str("h.plan"));
  AugmentationPlan back = read_plan(tmp.str("h.plan"));
  CHECK(back.task == plan.task);
  CHECK(back.entries.size() == plan.entries.size());
  CHECK(back.entries.at("migration").deficit == 126);
  CHECK(back.total_target() == 6514);
}
