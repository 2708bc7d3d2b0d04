#include "suvg/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>

#ifndef SUVG_FIXTURE_DIR
#define SUVG_FIXTURE_DIR "fixtures"
#endif

namespace suvg {

std::string fixture_dir() {
  if (const char* d = std::getenv("SUVG_FIXTURES"); d && *d) return d;
  return SUVG_FIXTURE_DIR;
}

std::string fixture_path(const std::string& name) { return fixture_dir() + "/" + name; }

namespace {

json production(const std::string& id, const std::string& lhs, std::vector<std::string> rhs, bool sync,
                std::optional<int> heir = std::nullopt, json dominance = json::array()) {
  json p = {{"id", id}, {"lhs", lhs}, {"rhs", std::move(rhs)}, {"role", sync ? "sync" : "async"},
            {"dominance", std::move(dominance)}};
  if (heir) p["heir"] = *heir;
  return p;
}

std::string det(int i) { return i == 1 ? "every" : "some"; }
std::string noun(int i) { return "n" + std::to_string(i); }
std::string var(int i) { return "x" + std::to_string(i); }

} // namespace

std::string quantifier_family_sentence(int k) {
  std::string s;
  for (int i = 1; i <= k; ++i) s += det(i) + " " + noun(i) + (i < k ? " thinks " : " arrived");
  return s;
}

json quantifier_family_kinds(int k) {
  json kinds = json::object();
  for (int i = 1; i <= k; ++i) kinds["np" + std::to_string(i)] = i == 1 ? "forall" : "exists";
  return {{"quantifier_kinds", kinds}, {"quantifier_production", "q"}};
}

SynchGrammar make_quantifier_family(int k) {
  if (k < 1) throw PreconditionError("quantifier family needs at least one noun phrase");
  json lt = json::array({"every", "some", "thinks", "arrived"});
  json rt = json::array({"forall", "exists", "think", "arrive"});
  for (int i = 1; i <= k; ++i) {
    lt.push_back(noun(i));
    rt.push_back(noun(i));
    rt.push_back(var(i));
  }
  json lv = json::array(), rv = json::array(), pairs = json::array();
  const json two = json::array({{{"left", {"v", 0}}, {"right", {"v", 1}}}, {{"left", {"v", 2}}, {"right", {"v", 2}}}});
  const json one = json::array({{{"left", {"v", 0}}, {"right", {"v", 1}}}});
  auto verb = [&](const std::string& id, const std::string& word, const std::string& pred, bool matrix, bool embeds) {
    std::vector<std::string> l = {"NP", word}, r = {pred, "E"};
    if (embeds) {
      l.push_back("C");
      r.push_back("S");
    }
    lv.push_back({{"id", id}, {"lexeme", word}, {"productions", {production("v", matrix ? "S" : "C", l, true)}}});
    rv.push_back({{"id", id}, {"lexeme", pred}, {"productions", {production("v", matrix ? "T" : "S", r, true)}}});
    pairs.push_back({{"left_vector", id}, {"right_vector", id}, {"links", embeds ? two : one}});
  };
  verb("think_m", "thinks", "think", true, true);
  verb("think_e", "thinks", "think", false, true);
  verb("arrive_m", "arrived", "arrive", true, false);
  verb("arrive_e", "arrived", "arrive", false, false);
  for (int i = 1; i <= k; ++i) {
    const std::string id = "np" + std::to_string(i);
    lv.push_back({{"id", id}, {"lexeme", det(i) + " " + noun(i)},
                  {"productions", {production("n", "NP", {det(i), noun(i)}, true)}}});
    const std::string q = i == 1 ? "forall" : "exists";
    rv.push_back({{"id", id}, {"lexeme", q + " " + var(i)},
                  {"productions", {production("q", "T", {q, var(i), noun(i), "T"}, false, 3,
                                              json::array({{{"occ", 3}, {"target", "v"}}})),
                                   production("v", "E", {var(i)}, true)}}});
    pairs.push_back({{"left_vector", id}, {"right_vector", id}, {"links", json::array()}});
  }
  json doc = {{"left", {{"name", "syntax" + std::to_string(k)}, {"terminals", lt},
                        {"nonterminals", {"S", "C", "NP"}}, {"start", "S"}, {"vectors", lv}}},
              {"right", {{"name", "semantics" + std::to_string(k)}, {"terminals", rt},
                         {"nonterminals", {"T", "S", "E"}}, {"start", "T"}, {"vectors", rv}}},
              {"pairs", pairs}};
  return load_synch(doc);
}

ReadingEquivalence ReadingEquivalence::from_json(const json& j) {
  ReadingEquivalence eq;
  if (!j.is_object() || !j.contains("quantifier_kinds") || !j["quantifier_kinds"].is_object())
    throw SchemaError("quantifier_kinds", "expected an object mapping vector ids to kinds");
  for (auto it = j["quantifier_kinds"].begin(); it != j["quantifier_kinds"].end(); ++it) {
    if (!it.value().is_string()) throw SchemaError("quantifier_kinds." + it.key(), "expected a string");
    eq.kinds[it.key()] = it.value().get<std::string>();
  }
  if (!j.contains("quantifier_production") || !j["quantifier_production"].is_string())
    throw SchemaError("quantifier_production", "expected a string");
  eq.production = j["quantifier_production"].get<std::string>();
  return eq;
}

std::vector<std::string> reading_key(const Grammar& right, const ParseTree& t, const ReadingEquivalence& eq) {
  std::vector<std::string> prefix;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& n) {
    if (n.is_leaf()) return;
    const std::string& vid = right.vector(n.production.vector).id;
    if (right.production(n.production).id == eq.production && eq.kinds.count(vid)) prefix.push_back(vid);
    for (const auto& c : n.children) walk(c);
  };
  walk(t);
  // adjacent quantifiers of one kind commute
  for (std::size_t i = 0; i < prefix.size();) {
    std::size_t j = i + 1;
    while (j < prefix.size() && eq.kinds.at(prefix[j]) == eq.kinds.at(prefix[i])) ++j;
    std::sort(prefix.begin() + i, prefix.begin() + j);
    i = j;
  }
  return prefix;
}

std::size_t count_readings(const Grammar& right, const std::vector<ParseTree>& trees, const ReadingEquivalence& eq) {
  std::set<std::vector<std::string>> keys;
  for (const auto& t : trees) keys.insert(reading_key(right, t, eq));
  return keys.size();
}

} // namespace suvg
