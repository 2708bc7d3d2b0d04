#include "support.hpp"

using namespace testing;

TEST_CASE("quantifier family: sentence and kinds") {
  CHECK(quantifier_family_sentence(1) == "every n1 arrived");
  CHECK(quantifier_family_sentence(3) == "every n1 thinks some n2 thinks some n3 arrived");
  json k = quantifier_family_kinds(2);
  CHECK(k["quantifier_kinds"]["np1"] == "forall");
  CHECK(k["quantifier_kinds"]["np2"] == "exists");
  CHECK(ReadingEquivalence::from_json(k).production == "q");
  CHECK_THROWS_AS(make_quantifier_family(0), PreconditionError);
}

TEST_CASE("quantifier family: k noun phrases scope in k! ways") {
  std::size_t fact = 1;
  for (int k = 1; k <= 5; ++k) {
    fact *= static_cast<std::size_t>(k);
    SynchGrammar gs = make_quantifier_family(k);
    ParseTree tau = parse_one(gs.left(), quantifier_family_sentence(k));
    ParseForest pi = parse_to_forest(gs, tau);
    CAPTURE(k);
    CHECK(count_trees(pi) == fact);
    // a reading is the set of existentials scoping over the universal
    auto eq = ReadingEquivalence::from_json(quantifier_family_kinds(k));
    CHECK(count_readings(gs.right(), enumerate_trees(pi, fact).trees, eq) == std::size_t{1} << (k - 1));
  }
}

TEST_CASE("reading equivalence: bad documents") {
  CHECK_THROWS_AS(ReadingEquivalence::from_json(json::array()), SchemaError);
  CHECK_THROWS_AS(ReadingEquivalence::from_json(json{{"quantifier_kinds", {{"np1", 3}}}}), SchemaError);
  CHECK_THROWS_AS(ReadingEquivalence::from_json(json{{"quantifier_kinds", json::object()}}), SchemaError);
}

TEST_CASE("fixture directory override") {
  CHECK(fixture_path("G_ab.json").size() > std::string("G_ab.json").size());
  CHECK_NOTHROW(fixture_grammar("G_ab.json"));
}
