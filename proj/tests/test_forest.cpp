#include "support.hpp"

using namespace testing;

namespace {

// forest trees equal the oracle's, in the same canonical order
void check_against_oracle(const Grammar& g, std::uint32_t q) {
  CAPTURE(g.name());
  CAPTURE(q);
  ParseForest pi = build_forest_q(g, q);
  auto oracle = enumerate_derivations(g, DerivationBound::vectors(q));
  CHECK(count_trees(pi) == oracle.size());
  TreeList got = enumerate_trees(pi, oracle.size() + 1);
  CHECK_FALSE(got.truncated);
  REQUIRE(got.trees.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    CHECK(same_structure(got.trees[i], oracle[i]));
    CHECK(contains_tree(pi, oracle[i]));
    CHECK(check_parse_tree(g, got.trees[i]).accepted());
  }
  CHECK_FALSE(audit_forest(pi).has_value());
}

} // namespace

TEST_CASE("forest: equals the oracle on every fixture") {
  for (const auto& name : plain_fixtures())
    for (std::uint32_t q = 1; q <= 6; ++q) check_against_oracle(fixture_grammar(name), q);
  for (const auto& name : synch_fixtures()) {
    SynchGrammar gs = fixture_synch(name);
    for (std::uint32_t q = 1; q <= 5; ++q) {
      check_against_oracle(gs.left(), q);
      check_against_oracle(gs.right(), q);
    }
  }
}

TEST_CASE("forest: G_ab with five instances") {
  Grammar g = fixture_grammar("G_ab.json");
  ParseForest pi = build_forest_q(g, 5);
  CHECK(count_trees(pi) == 5);
  CHECK(pi.roots.size() == 5);
  for (int r : pi.roots) CHECK(pi.or_nodes[r].nonterminal == "S");
  CHECK_THROWS_AS(build_forest_q(g, 0), PreconditionError);
  CHECK(build_forest_q(g, 1).roots.size() == 1);
}

TEST_CASE("forest: dominance prunes the wrong order") {
  Grammar g = fixture_grammar("G_dom.json");
  ParseForest pi = build_forest_q(g, 3);
  REQUIRE(count_trees(pi) == 1);
  TreeList t = enumerate_trees(pi, 10);
  CHECK(yield_string(t.trees[0]) == "a c");
}

TEST_CASE("forest: shared subtrees keep the forest small") {
  Grammar g = fixture_grammar("G_catalan.json");
  std::size_t prev_nodes = 0;
  for (std::uint32_t q : {9u, 13u, 17u}) {
    ParseForest pi = build_forest_q(g, q);
    const BigCount n = count_trees(pi);
    CAPTURE(q);
    CHECK(n > BigCount(pi.node_count()));
    CHECK(pi.node_count() > prev_nodes);
    prev_nodes = pi.node_count();
  }
  // catalan numbers summed over odd sizes up to 17
  CHECK(count_trees(build_forest_q(g, 17)) == BigCount(1 + 1 + 2 + 5 + 14 + 42 + 132 + 429 + 1430));
}

TEST_CASE("forest: enumeration truncates and respects the tree cap") {
  Grammar g = fixture_grammar("G_catalan.json");
  ParseForest pi = build_forest_q(g, 11);
  TreeList some = enumerate_trees(pi, 5);
  CHECK(some.truncated);
  CHECK(some.trees.size() == 5);
  auto oracle = enumerate_derivations(g, DerivationBound::vectors(11));
  for (std::size_t i = 0; i < 5; ++i) CHECK(same_structure(some.trees[i], oracle[i]));

  Limits tight;
  tight.max_trees = 10;
  CHECK_THROWS_AS(enumerate_trees(pi, 1000, tight), ResourceError);
  CHECK_NOTHROW(enumerate_trees(pi, 10, tight));
}

TEST_CASE("forest: trees outside the bound are not contained") {
  Grammar g = fixture_grammar("G_ab.json");
  ParseForest pi = build_forest_q(g, 3);
  auto bigger = enumerate_derivations(g, DerivationBound::vectors(4));
  int outside = 0;
  for (const auto& t : bigger) outside += contains_tree(pi, t) ? 0 : 1;
  CHECK(outside == 1);
}

TEST_CASE("forest: prune is idempotent") {
  SynchGrammar gs = fixture_synch("quantifier_scope.json");
  ParseForest pi = build_forest_q(gs.right(), 5);
  ParseForest again = prune(pi);
  CHECK(again.node_count() == pi.node_count());
  CHECK(again.arc_count() == pi.arc_count());
  CHECK(forest_to_json(again) == forest_to_json(pi));
}

TEST_CASE("forest: audit detects broken arcs") {
  Grammar g = fixture_grammar("G_ab.json");
  ParseForest pi = build_forest_q(g, 3);
  REQUIRE_FALSE(audit_forest(pi).has_value());
  ParseForest bad = pi;
  for (auto& a : bad.and_nodes)
    if (!a.children.empty()) {
      a.children.pop_back();
      break;
    }
  CHECK(audit_forest(bad).has_value());
  bad = pi;
  bad.or_nodes[bad.roots[0]].choices.push_back(static_cast<int>(bad.and_nodes.size()) + 7);
  CHECK(audit_forest(bad).has_value());
}

TEST_CASE("forest: unsupported dominance shape") {
  Grammar g = fixture_grammar("G_dom.json");
  GrammarData d = g.data();
  // p1-p2, p1-p3 and p2-p3 form a triangle
  d.vectors[0].productions[0].dominance.push_back({1, "p3"});
  d.vectors[0].productions[1].rhs = {"a", "A"};
  d.vectors[0].productions[1].heir = 1;
  d.vectors[0].productions[1].dominance.push_back({1, "p3"});
  Grammar cyc(d);
  CHECK_THROWS_AS(require_supported_dominance(cyc), UnsupportedGrammar);
  CHECK_THROWS_AS(build_forest_q(cyc, 3), UnsupportedGrammar);
  CHECK_NOTHROW(require_supported_dominance(g));
}

TEST_CASE("forest: json and dot") {
  Grammar g = fixture_grammar("G_ab.json");
  ParseForest pi = build_forest_q(g, 2);
  json j = forest_to_json(pi);
  CHECK(j["or_nodes"].size() == pi.or_nodes.size());
  CHECK(j["and_nodes"].size() == pi.and_nodes.size());
  CHECK(j["roots"].size() == 2);
  for (const auto& o : j["or_nodes"]) {
    CHECK(o.contains("nonterminal"));
    CHECK(o.contains("multiset"));
    CHECK(o.contains("choices"));
  }
  const std::string dot = forest_to_dot(pi);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("S") != std::string::npos);
}

TEST_CASE("forest: table cap") {
  Limits tight;
  tight.max_table = 5;
  CHECK_THROWS_AS(build_forest_q(fixture_grammar("G_catalan.json"), 15, tight), ResourceError);
}
