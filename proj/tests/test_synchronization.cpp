#include "support.hpp"

using namespace testing;

namespace {

// The unique open handle with this symbol on one side.
int open_handle(const SyncDerivationState& s, Side side, const std::string& symbol) {
  int found = -1;
  for (std::size_t h = 0; h < s.handles.size(); ++h) {
    const Handle& x = s.handles[h];
    if (x.side != side || x.symbol != symbol || x.production) continue;
    REQUIRE_MESSAGE(found < 0, "several open " << symbol << " handles");
    found = static_cast<int>(h);
  }
  REQUIRE_MESSAGE(found >= 0, "no open " << symbol << " handle");
  return found;
}

std::string form_string(const SyncDerivationState& s, Side side) {
  std::string out;
  for (const auto& item : s.form(side)) {
    if (!out.empty()) out += ' ';
    out += item.terminal ? *item.terminal : s.handles[item.handle].symbol;
  }
  return out;
}

// S -> A A on both sides with heirless async productions for A.
SynchGrammar heirless() {
  const json side = json::parse(R"({
    "name": "h", "terminals": ["a", "c", "s"], "nonterminals": ["S", "A"], "start": "S",
    "vectors": [{"id": "v", "lexeme": "s", "productions": [
      {"id": "p1", "lhs": "S", "rhs": ["s", "A", "A"], "role": "sync"},
      {"id": "p2", "lhs": "A", "rhs": ["a"], "role": "async"},
      {"id": "p3", "lhs": "A", "rhs": ["c"], "role": "async"}]}]})");
  json doc = {{"left", side}, {"right", side}};
  doc["pairs"] = json::parse(R"([{"left_vector": "v", "right_vector": "v", "links": [
      {"left": ["p1", 1], "right": ["p1", 1]}, {"left": ["p1", 2], "right": ["p1", 2]}]}])");
  return load_synch(doc);
}

VectorDerivationTree shape(const std::vector<int>& parent) {
  VectorDerivationTree g;
  g.nodes.resize(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    g.nodes[i].pair = 0;
    g.nodes[i].instance = static_cast<int>(i);
    if (parent[i] < 0) g.root = static_cast<int>(i);
    else g.nodes[parent[i]].children.push_back(static_cast<int>(i));
  }
  return g;
}

} // namespace

TEST_CASE("step: a $ b against b $ a") {
  SynchGrammar gs = fixture_synch("Gs_ab.json");
  SyncDerivationState s = initial_state(gs);
  CHECK(s.live_count() == 1);
  CHECK(form_string(s, Side::left) == "S");
  CHECK_FALSE(s.finished());

  s = step(gs, s, AsyncApply{Side::left, "v1", 0, "p1", s.left_root});
  CHECK(form_string(s, Side::left) == "a S B");
  CHECK(s.live_count() == 1);
  CHECK(s.pending_count() == 1);
  // the start link moved onto the heir
  CHECK(s.handles[open_handle(s, Side::left, "B")].links.size() == 1);
  CHECK_FALSE(audit_links(s).has_value());

  s = step(gs, s, AsyncApply{Side::right, "w1", 0, "r1", s.right_root});
  CHECK(form_string(s, Side::right) == "b S A");
  CHECK(s.live_count() == 2);
  CHECK(s.pending_count() == 0);

  s = step(gs, s, SyncApply{1, 1, open_handle(s, Side::left, "S"), open_handle(s, Side::right, "S")});
  CHECK(s.live_count() == 1);
  s = step(gs, s, SyncApply{0, 0, open_handle(s, Side::left, "B"), open_handle(s, Side::right, "A")});
  CHECK(s.live_count() == 0);
  CHECK(s.finished());
  CHECK(form_string(s, Side::left) == "a $ b");
  CHECK(form_string(s, Side::right) == "b $ a");
  CHECK(check_parse_tree(gs.left(), derived_tree(gs, s, Side::left)).accepted());
  CHECK(same_structure(derived_tree(gs, s, Side::right), parse_one(gs.right(), "b $ a")));
}

TEST_CASE("step: illegal actions") {
  SynchGrammar gs = fixture_synch("Gs_ab.json");
  SyncDerivationState s0 = initial_state(gs);
  // sync on the roots with the wrong pair
  CHECK_THROWS_AS(step(gs, s0, SyncApply{0, 0, s0.left_root, s0.right_root}), StepError);
  // production of the wrong lhs
  CHECK_THROWS_AS(step(gs, s0, AsyncApply{Side::left, "v1", 0, "p2", s0.left_root}), StepError);
  // an unknown vector
  CHECK_THROWS_AS(step(gs, s0, AsyncApply{Side::left, "zz", 0, "p1", s0.left_root}), StepError);
  // instance ids must be fresh or existing
  CHECK_THROWS_AS(step(gs, s0, AsyncApply{Side::left, "v1", 5, "p1", s0.left_root}), StepError);

  SyncDerivationState s1 = step(gs, s0, AsyncApply{Side::left, "v1", 0, "p1", s0.left_root});
  // the S handle carries only a pending end
  CHECK_THROWS_AS(step(gs, s1, SyncApply{1, 1, open_handle(s1, Side::left, "S"), s1.right_root}), StepError);
  // rewriting a handle twice
  CHECK_THROWS_AS(step(gs, s1, AsyncApply{Side::left, "v1", 1, "p1", s1.left_root}), StepError);
  // a production already used by its instance
  CHECK_THROWS_AS(step(gs, s1, AsyncApply{Side::left, "v1", 0, "p1", open_handle(s1, Side::left, "S")}),
                  StepError);
  CHECK_THROWS_AS(derived_tree(gs, s1, Side::left), PreconditionError);
}

TEST_CASE("step: heirless async production cannot carry a link") {
  SynchGrammar gs = heirless();
  SyncDerivationState s = initial_state(gs);
  s = step(gs, s, SyncApply{0, 0, s.left_root, s.right_root});
  CHECK(s.live_count() == 2);
  const int a = s.handles[s.left_root].children[1].handle;
  CHECK_THROWS_AS(step(gs, s, AsyncApply{Side::left, "v", 0, "p2", a}), StepError);
  // and so no pair of trees is ever synchronous
  for (const auto& l : enumerate_derivations(gs.left(), DerivationBound::vectors(3)))
    for (const auto& r : enumerate_derivations(gs.right(), DerivationBound::vectors(3)))
      CHECK_FALSE(check_sync_derivation(gs, l, r).accepted);
}

TEST_CASE("check: accepting and rejecting pairs") {
  SynchGrammar gs = fixture_synch("Gs_ab.json");
  SyncVerdict ok = check_sync_derivation(gs, parse_one(gs.left(), "a $ b"), parse_one(gs.right(), "b $ a"));
  CHECK(ok.accepted);
  CHECK(ok.steps.size() == 4);
  CHECK(ok.left_instances->instances == 2);

  SyncVerdict no = check_sync_derivation(gs, parse_one(gs.left(), "a $ b"), parse_one(gs.right(), "$"));
  CHECK_FALSE(no.accepted);
  CHECK_FALSE(no.code.empty());
  CHECK(check_sync_derivation(gs, parse_one(gs.left(), "$"), parse_one(gs.right(), "$")).accepted);
  CHECK_FALSE(
      check_sync_derivation(gs, parse_one(gs.left(), "a a $ b b"), parse_one(gs.right(), "b $ a")).accepted);

  SynchGrammar ex = fixture_synch("Gs_ab_extra.json");
  CHECK(check_sync_derivation(ex, parse_one(ex.left(), "a c b"), parse_one(ex.right(), "b d a")).accepted);
  CHECK_FALSE(check_sync_derivation(ex, parse_one(ex.left(), "a c b"), parse_one(ex.right(), "b $ a")).accepted);
}

TEST_CASE("check: witness steps replay to the same trees") {
  for (const auto& name : synch_fixtures()) {
    SynchGrammar gs = fixture_synch(name);
    auto lefts = enumerate_derivations(gs.left(), DerivationBound::vectors(4));
    auto rights = enumerate_derivations(gs.right(), DerivationBound::vectors(4));
    int accepted = 0;
    for (const auto& l : lefts)
      for (const auto& r : rights) {
        SyncVerdict v = check_sync_derivation(gs, l, r);
        for (std::uint64_t seed : {1u, 7u, 99u}) CHECK(check_sync_derivation(gs, l, r, seed).accepted == v.accepted);
        if (!v.accepted) continue;
        ++accepted;
        SyncDerivationState s = initial_state(gs);
        for (const auto& a : v.steps) {
          s = step(gs, s, a);
          REQUIRE_FALSE(audit_links(s).has_value());
        }
        CHECK(s.finished());
        CHECK(same_structure(derived_tree(gs, s, Side::left), l));
        CHECK(same_structure(derived_tree(gs, s, Side::right), r));
      }
    CAPTURE(name);
    CHECK(accepted > 0);
  }
}

TEST_CASE("check: seeded orders reach the same trees") {
  SynchGrammar gs = fixture_synch("quantifier_scope.json");
  ParseTree l = parse_one(gs.left(), "every man thinks some official said some Norwegian arrived");
  const json golden = fixture_json("golden/sentence1.right.json");
  ParseTree r = tree_from_json(gs.right(), golden["trees"][0]);
  SyncVerdict a = check_sync_derivation(gs, l, r, 0);
  SyncVerdict b = check_sync_derivation(gs, l, r, 12345);
  REQUIRE(a.accepted);
  REQUIRE(b.accepted);
  CHECK(a.steps.size() == b.steps.size());
  SyncDerivationState s = initial_state(gs);
  for (const auto& x : b.steps) s = step(gs, s, x);
  CHECK(same_structure(derived_tree(gs, s, Side::right), r));
  CHECK(steps_to_json(gs, a.steps).size() == a.steps.size());
  CHECK(action_to_json(gs, a.steps[0]).is_object());
}

TEST_CASE("vdt: chain for a a $ b b") {
  SynchGrammar gs = fixture_synch("Gs_ab.json");
  VectorDerivationTree g = vector_derivation_tree(gs, Side::left, parse_one(gs.left(), "a a $ b b"));
  REQUIRE(g.size() == 3);
  const VdtNode& root = g.nodes[g.root];
  CHECK(root.lexeme == "a");
  REQUIRE(root.children.size() == 1);
  const VdtNode& mid = g.nodes[root.children[0]];
  CHECK(mid.lexeme == "a");
  REQUIRE(mid.children.size() == 1);
  CHECK(g.nodes[mid.children[0]].lexeme == "$");
  CHECK(g.nodes[mid.children[0]].children.empty());

  VectorDerivationTree h = vector_derivation_tree(gs, Side::right, parse_one(gs.right(), "b b $ a a"));
  CHECK(vdt_isomorphic(g, h));
  CHECK_FALSE(vdt_isomorphic(g, vector_derivation_tree(gs, Side::right, parse_one(gs.right(), "b $ a"))));
  CHECK(vdt_to_json(g)["lexeme"] == "a");
  CHECK(vdt_to_dot(g).rfind("digraph", 0) == 0);
}

TEST_CASE("vdt: sentence with six vector instances") {
  SynchGrammar gs = fixture_synch("quantifier_scope.json");
  ParseTree l = parse_one(gs.left(), "every man thinks some official said some Norwegian arrived");
  VectorDerivationTree g = vector_derivation_tree(gs, Side::left, l);
  CHECK(g.size() == 6);
  json j = vdt_to_json(g);
  CHECK(j["lexeme"] == "thinks");
  CHECK(j["children"].size() == 2);
  const json rights = fixture_json("golden/sentence1.right.json");
  for (const auto& rj : rights["trees"]) {
    ParseTree r = tree_from_json(gs.right(), rj);
    CHECK(vdt_isomorphic(g, vector_derivation_tree(gs, Side::right, r)));
  }
}

TEST_CASE("vdt: isomorphism is unordered but respects shape and labels") {
  VectorDerivationTree chain = shape({-1, 0, 1});
  VectorDerivationTree star = shape({-1, 0, 0});
  CHECK_FALSE(vdt_isomorphic(chain, star));
  CHECK(vdt_isomorphic(chain, shape({1, 2, -1})));
  CHECK(vdt_isomorphic(shape({-1, 0, 0, 1}), shape({-1, 0, 0, 2})));
  VectorDerivationTree relabelled = shape({-1, 0, 1});
  relabelled.nodes[2].pair = 1;
  CHECK_FALSE(vdt_isomorphic(chain, relabelled));
}

TEST_CASE("vdt: synchronous pairs have isomorphic trees") {
  for (const auto& name : synch_fixtures()) {
    SynchGrammar gs = fixture_synch(name);
    auto lefts = enumerate_derivations(gs.left(), DerivationBound::vectors(5));
    auto rights = enumerate_derivations(gs.right(), DerivationBound::vectors(5));
    for (const auto& l : lefts)
      for (const auto& r : rights) {
        SyncVerdict v = check_sync_derivation(gs, l, r);
        if (!v.accepted) continue;
        CHECK(vdt_isomorphic(vector_derivation_tree(gs, Side::left, l, v.left_instances),
                             vector_derivation_tree(gs, Side::right, r, v.right_instances)));
      }
  }
}
