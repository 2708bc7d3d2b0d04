#include "support.hpp"

using namespace testing;

TEST_CASE("compound names") {
  CHECK(compound_name("S", "T") == "L⟨S|T⟩");
  CHECK(compound_name("S", "") == "L⟨S|_⟩");
  CHECK(compound_name("", "T") == "L⟨_|T⟩");
}

TEST_CASE("compile: a single pair fuses into one vector") {
  Compilation c = compile_left_projection(fixture_synch("Gs_single.json"));
  const Grammar& g = c.grammar;
  REQUIRE(g.vectors().size() == 1);
  CHECK(c.report.variants == 1);
  CHECK(g.start() == "L⟨S|S⟩");
  const Production& p = g.vectors()[0].productions.at(0);
  CHECK(p.lhs == "L⟨S|S⟩");
  CHECK(p.rhs == std::vector<std::string>{"a"});
  CHECK(p.role == Role::synchronous);
  CHECK(c.origins.at(0).fused);
  CHECK(language_sample(g, SampleBound::vectors(3)) == std::vector<std::string>{"a"});
}

TEST_CASE("compile: output is a valid lexicalized grammar") {
  for (const auto& name : synch_fixtures()) {
    Compilation c = compile_left_projection(fixture_synch(name));
    CAPTURE(name);
    CHECK_MESSAGE(validate_uvgdl(c.grammar).ok(), validate_uvgdl(c.grammar).to_string());
    CHECK(c.origins.size() == static_cast<std::size_t>(c.grammar.production_count()));
    CHECK(c.report.variants == c.grammar.vectors().size());
    CHECK(load_grammar(dump_grammar(c.grammar)) == c.grammar);
  }
}

TEST_CASE("compile: language equals the left projection") {
  for (const auto& name : synch_fixtures()) {
    SynchGrammar gs = fixture_synch(name);
    Compilation c = compile_left_projection(gs);
    for (std::uint32_t q = 1; q <= 5; ++q) {
      CAPTURE(name);
      CAPTURE(q);
      CHECK(language_sample(c.grammar, SampleBound::vectors(q)) == left_projection_sample(gs, SampleBound::vectors(q)));
    }
  }
}

TEST_CASE("compile: Gs_ab_extra projects to a^n x b^n") {
  SynchGrammar gs = fixture_synch("Gs_ab_extra.json");
  Compilation c = compile_left_projection(gs);
  CHECK(language_sample(c.grammar, SampleBound::length(3)) ==
        std::vector<std::string>{"$", "a $ b", "a c b", "c"});
}

TEST_CASE("compile: compiled trees project onto accepted left trees") {
  for (const auto& name : synch_fixtures()) {
    SynchGrammar gs = fixture_synch(name);
    Compilation c = compile_left_projection(gs);
    for (const auto& t : enumerate_trees(build_forest_q(c.grammar, 6), 5000).trees) {
      ParseTree l = project_compiled_tree(gs, c, t);
      CAPTURE(tree_to_string(c.grammar, t));
      CHECK(check_parse_tree(gs.left(), l).accepted());
      CHECK(yield_string(l) == yield_string(t));
    }
  }
}

TEST_CASE("compile: variant cap") {
  Limits tight;
  tight.max_variants = 2;
  CHECK_THROWS_AS(compile_left_projection(fixture_synch("Gs_ab.json"), tight), ResourceError);
}

TEST_CASE("language_sample: G_ab by tokens") {
  Grammar g = fixture_grammar("G_ab.json");
  CHECK(language_sample(g, SampleBound::length(5)) == std::vector<std::string>{"$", "a $ b", "a a $ b b"});
  CHECK(language_sample(g, SampleBound::vectors(2)) == std::vector<std::string>{"$", "a $ b"});
}

TEST_CASE("left_projection_sample: Gs_ab") {
  SynchGrammar gs = fixture_synch("Gs_ab.json");
  CHECK(left_projection_sample(gs, SampleBound::vectors(3)) == std::vector<std::string>{"$", "a $ b", "a a $ b b"});
}
