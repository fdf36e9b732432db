#include <catch2/catch_amalgamated.hpp>

#include "foodaug/corpus.hpp"
#include "helpers.hpp"

using namespace foodaug;
using testutil::TempDir;

TEST_CASE("bundled incident corpora load with the documented sizes") {
  Corpus train = testutil::incidents(Split::train);
  Corpus dev = testutil::incidents(Split::dev);
  Corpus test = testutil::incidents(Split::test);
  CHECK(train.size() == 5082);
  CHECK(dev.size() == 565);
  CHECK(test.size() == 997);
  for (const auto& s : train.samples) {
    CHECK(s.provenance == Provenance::original);
    CHECK_FALSE(s.parent_id.has_value());
  }
  // Subtask-2 columns ride along in source_meta, never as labels.
  CHECK(train.samples.front().source_meta.count("hazard") == 1);
  CHECK(train.samples.front().source_meta.count("country") == 1);
}

TEST_CASE("class distribution matches the reference counts on the train file") {
  Corpus train = testutil::incidents(Split::train);
  Distribution hazard = class_distribution(train, Task::hazard_category);
  Distribution product = class_distribution(train, Task::product_category);
  CHECK(hazard.at("migration") == 3);
  CHECK(hazard.at("allergens") == 1854);
  CHECK(product.at("sugars and syrups") == 5);
  CHECK(distribution_total(hazard) == train.size());
  CHECK(distribution_total(product) == train.size());
}

TEST_CASE("header-only CSV loads as an empty corpus") {
  TempDir tmp("corpus");
  testutil::spit(tmp.str("empty.csv"),
                 "year,month,day,country,title,text,hazard-category,"
                 "product-category\n");
  Corpus c = load_corpus(tmp.str("empty.csv"), Split::train,
                         testutil::toy_taxonomies());
  CHECK(c.size() == 0);
  Distribution d = class_distribution(c, Task::hazard_category);
  CHECK(d.size() == 4);
  CHECK(distribution_total(d) == 0);
}

TEST_CASE("missing required column raises a schema error naming it") {
  TempDir tmp("corpus");
  testutil::spit(tmp.str("bad.csv"),
                 "year,month,day,country,title,hazard-category,product-category\n");
  try {
    load_corpus(tmp.str("bad.csv"), Split::train, testutil::toy_taxonomies());
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
    CHECK(std::string(e.what()).find("text") != std::string::npos);
  }
}

TEST_CASE("row with an out-of-taxonomy label") {
  TempDir tmp("corpus");
  std::string csv =
      "year,month,day,country,title,text,hazard-category,product-category\n"
      "2020,1,1,us,ok title,ok body,alpha,x\n"
      "2020,1,2,us,bad title,bad body,unknown-label,x\n"
      "2020,1,3,us,ok title 2,ok body 2,beta,y\n";
  testutil::spit(tmp.str("rows.csv"), csv);

  SECTION("strict mode aborts with the row index") {
    try {
      load_corpus(tmp.str("rows.csv"), Split::train, testutil::toy_taxonomies());
      FAIL("expected validation error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::validation);
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }

  SECTION("lenient mode skips and counts") {
    LoadReport report;
    Corpus c = load_corpus(tmp.str("rows.csv"), Split::train,
                           testutil::toy_taxonomies(), LoadMode::lenient, &report);
    CHECK(c.size() == 2);
    CHECK(report.rows_read == 3);
    REQUIRE(report.skipped.size() == 1);
    CHECK(report.skipped[0].row == 2);
  }
}

TEST_CASE("quoted CSV fields keep commas and newlines") {
  TempDir tmp("corpus");
  std::string csv =
      "year,month,day,country,title,text,hazard-category,product-category\n"
      "2020,1,1,us,\"title, with comma\",\"line one\nline two\",alpha,x\n";
  testutil::spit(tmp.str("quoted.csv"), csv);
  Corpus c = load_corpus(tmp.str("quoted.csv"), Split::train,
                         testutil::toy_taxonomies());
  REQUIRE(c.size() == 1);
  CHECK(c.samples[0].title == "title, with comma");
  CHECK(c.samples[0].text == "line one\nline two");
}

TEST_CASE("label comparison is case and whitespace insensitive") {
  TempDir tmp("corpus");
  std::string csv =
      "year,month,day,country,title,text,hazard-category,product-category\n"
      "2020,1,1,us,t,b,  ALPHA ,X\n";
  testutil::spit(tmp.str("case.csv"), csv);
  Corpus c = load_corpus(tmp.str("case.csv"), Split::train,
                         testutil::toy_taxonomies());
  REQUIRE(c.size() == 1);
  CHECK(c.samples[0].hazard_label == "alpha");
  CHECK(c.samples[0].product_label == "x");
}

TEST_CASE("serialization round-trip is the identity") {
  TempDir tmp("corpus");
  Corpus c{Split::train, {}, testutil::toy_taxonomies()};
  c.samples.push_back(testutil::make_sample("a1", "First", "body one", "alpha", "x"));
  c.samples.push_back(testutil::make_sample("a2", "Second", "body two", "beta", "y"));
  c.samples.push_back(testutil::make_sample("a3", "Third", "body three", "gamma", "x"));
  c.samples[0].source_meta = {{"country", "us"}, {"year", "2020"}};

  SECTION("plain corpus") {
    write_corpus(c, tmp.str("c.corpus"));
    Corpus back = read_corpus(tmp.str("c.corpus"));
    CHECK(back == c);
  }

  SECTION("synthetic sample keeps its parent id") {
    Sample syn = testutil::make_sample("s1", "Variant", "variant body", "alpha", "x");
    syn.provenance = Provenance::synthetic;
    syn.parent_id = "a1";
    c.samples.push_back(syn);
    write_corpus(c, tmp.str("c.corpus"));
    Corpus back = read_corpus(tmp.str("c.corpus"));
    CHECK(back == c);
    CHECK(back.samples.back().parent_id == std::optional<std::string>("a1"));
  }

  SECTION("rewriting produces identical bytes") {
    write_corpus(c, tmp.str("one.corpus"));
    write_corpus(read_corpus(tmp.str("one.corpus")), tmp.str("two.corpus"));
    CHECK(testutil::slurp(tmp.str("one.corpus")) ==
          testutil::slurp(tmp.str("two.corpus")));
  }
}

TEST_CASE("reading a record without a text field fails with the line number") {
  TempDir tmp("corpus");
  Corpus c{Split::train, {}, testutil::toy_taxonomies()};
  c.samples.push_back(testutil::make_sample("a1", "First", "body one", "alpha", "x"));
  write_corpus(c, tmp.str("c.corpus"));
  std::string content = testutil::slurp(tmp.str("c.corpus"));
  auto pos = content.find("\"text\"");
  REQUIRE(pos != std::string::npos);
  content.replace(pos, 6, "\"tixt\"");
  testutil::spit(tmp.str("broken.corpus"), content);
  try {
    read_corpus(tmp.str("broken.corpus"));
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("text") != std::string::npos);
  }
}

TEST_CASE("corpus invariants") {
  auto taxonomies = testutil::toy_taxonomies();

  SECTION("duplicate ids are rejected") {
    Corpus c{Split::train, {}, taxonomies};
    c.samples.push_back(testutil::make_sample("dup", "T", "b", "alpha", "x"));
    c.samples.push_back(testutil::make_sample("dup", "U", "c", "beta", "y"));
    CHECK_THROWS_AS(c.validate(), Error);
  }

  SECTION("dev and test may not contain synthetic samples") {
    Corpus c{Split::dev, {}, taxonomies};
    Sample syn = testutil::make_sample("s", "T", "b", "alpha", "x");
    syn.provenance = Provenance::synthetic;
    syn.parent_id = "p";
    c.samples.push_back(syn);
    CHECK_THROWS_AS(c.validate(), Error);
  }

  SECTION("provenance and parent_id must agree") {
    Sample s = testutil::make_sample("s", "T", "b", "alpha", "x");
    s.parent_id = "p";  // original with a parent
    CHECK_THROWS_AS(s.validate(taxonomies), Error);
  }

  SECTION("empty title or text is invalid") {
    Sample s = testutil::make_sample("s", "  ", "b", "alpha", "x");
    CHECK_THROWS_AS(s.validate(taxonomies), Error);
  }
}

TEST_CASE("distribution sums equal corpus size on random corpora") {
  std::mt19937_64 rng(7);
  auto taxonomies = testutil::toy_taxonomies();
  for (int round = 0; round < 20; ++round) {
    Corpus c{Split::train, {}, taxonomies};
    size_t n = rng() % 60;
    for (size_t i = 0; i < n; ++i) {
      c.samples.push_back(testutil::make_sample(
          "id" + std::to_string(i), "t" + std::to_string(i),
          "body " + std::to_string(rng() % 1000),
          taxonomies.hazard.label(rng() % taxonomies.hazard.size()),
          taxonomies.product.label(rng() % taxonomies.product.size())));
    }
    for (Task task : {Task::hazard_category, Task::product_category}) {
      Distribution d = class_distribution(c, task);
      CHECK(distribution_total(d) == c.size());
      CHECK(d.size() == c.taxonomy(task).size());
    }
  }
}
