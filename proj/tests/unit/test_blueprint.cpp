#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "justify/blueprint.hpp"
#include "justify/errors.hpp"

using namespace justify;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "coarse": [{"id": "c", "label": "C"}],
    "fine": [{"id": "f", "label": "F", "coarse_id": "c", "physical_evidence": "", "dictionary": []}],
    "entity_rules": []
  })");
}

}  // namespace

TEST(Taxonomy, AirbnbShape) {
  const auto& t = fx::resources().taxonomy;
  ASSERT_EQ(t.coarse_dims().size(), 5u);
  std::size_t presented = 0;
  for (const auto& c : t.coarse_dims()) presented += c.presented;
  EXPECT_EQ(presented, 4u);
  EXPECT_FALSE(t.find_coarse("search_on_website")->presented);
  EXPECT_EQ(t.fine_dims().size(), 12u);
  EXPECT_EQ(t.fine_dims_of("in_apartment").size(), 6u);
  EXPECT_EQ(t.coarse_of("host"), "host_appreciation");
  EXPECT_FALSE(t.coarse_of("nope"));
}

TEST(Taxonomy, Lookup) {
  const auto& t = fx::resources().taxonomy;
  EXPECT_EQ(lookup_dimension("oven", t), "kitchen");
  EXPECT_EQ(lookup_dimension("kitchen", t), "kitchen");
  EXPECT_EQ(lookup_dimension("table", t), "kitchen");
  EXPECT_FALSE(lookup_dimension("xylophone", t));
}

TEST(Taxonomy, EveryDictionaryTermRoundTrips) {
  const auto& t = fx::resources().taxonomy;
  for (const auto& [fine, terms] : t.dictionaries()) {
    for (const auto& term : terms) EXPECT_EQ(t.lookup_dimension(term), fine) << term;
  }
}

TEST(Taxonomy, MinimalWithEmptyDictionary) {
  const auto t = load_taxonomy(minimal());
  EXPECT_EQ(t.fine_dims().size(), 1u);
  EXPECT_FALSE(t.lookup_dimension("anything"));
}

TEST(Taxonomy, DanglingCoarseId) {
  auto j = minimal();
  j["fine"][0]["coarse_id"] = "food";
  EXPECT_THROW(load_taxonomy(j), IntegrityError);
}

TEST(Taxonomy, DuplicateTermAcrossDictionaries) {
  auto j = minimal();
  j["fine"][0]["dictionary"] = {"oven"};
  j["fine"].push_back({{"id", "g"}, {"label", "G"}, {"coarse_id", "c"}, {"dictionary", {"oven"}}});
  EXPECT_THROW(load_taxonomy(j), IntegrityError);
}

TEST(Taxonomy, DuplicateIds) {
  auto j = minimal();
  j["fine"].push_back(j["fine"][0]);
  EXPECT_THROW(load_taxonomy(j), IntegrityError);
}

TEST(Taxonomy, SchemaErrors) {
  EXPECT_THROW(load_taxonomy(json::array()), SchemaError);
  auto j = minimal();
  j.erase("coarse");
  EXPECT_THROW(load_taxonomy(j), SchemaError);
  j = minimal();
  j["coarse"][0]["label"] = "";
  EXPECT_THROW(load_taxonomy(j), IntegrityError);
  j = minimal();
  j["fine"][0]["coarse_id"] = 7;
  EXPECT_THROW(load_taxonomy(j), SchemaError);
}

TEST(Taxonomy, JsonRoundTrip) {
  const auto& t = fx::resources().taxonomy;
  EXPECT_EQ(load_taxonomy(to_json(t)), t);
}

TEST(Taxonomy, VocabularyHasCues) {
  const auto v = fx::resources().taxonomy.vocabulary();
  EXPECT_TRUE(v.count("host"));
  EXPECT_TRUE(v.count("neighborhood"));
  EXPECT_TRUE(v.count("oven"));
}

TEST(Taxonomy, MissingFile) {
  EXPECT_THROW(load_taxonomy_file("/nonexistent/taxonomy.json"), IoError);
}
