#include "suvg/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace suvg {

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string get_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaError(join(path, key), "expected a string");
  return v.get<std::string>();
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<int>();
}

std::vector<std::string> get_strings(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  const std::string p = join(path, key);
  if (!v.is_array()) throw SchemaError(p, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw SchemaError(p + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

const json& get_array(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaError(join(path, key), "expected an array");
  return v;
}

Production load_production(const json& j, const std::string& path, const std::set<std::string>& symbols) {
  Production p;
  p.id = get_string(j, "id", path);
  p.lhs = get_string(j, "lhs", path);
  if (!symbols.count(p.lhs)) throw SchemaError(path + ".lhs", "undeclared symbol '" + p.lhs + "'");
  p.rhs = get_strings(j, "rhs", path);
  for (std::size_t i = 0; i < p.rhs.size(); ++i)
    if (!symbols.count(p.rhs[i]))
      throw SchemaError(path + ".rhs[" + std::to_string(i) + "]", "undeclared symbol '" + p.rhs[i] + "'");
  const std::string role = get_string(j, "role", path);
  if (role == "sync") p.role = Role::synchronous;
  else if (role == "async") p.role = Role::asynchronous;
  else throw SchemaError(path + ".role", "expected \"sync\" or \"async\"");
  if (auto it = j.find("heir"); it != j.end() && !it->is_null()) p.heir = get_int(*it, path + ".heir");
  if (auto it = j.find("dominance"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(path + ".dominance", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string dpath = path + ".dominance[" + std::to_string(k) + "]";
      DominanceLink dl;
      dl.occurrence = get_int(field((*it)[k], "occ", dpath), dpath + ".occ");
      dl.target = get_string((*it)[k], "target", dpath);
      p.dominance.push_back(std::move(dl));
    }
  }
  return p;
}

} // namespace

Grammar load_grammar(const json& doc) {
  GrammarData d;
  d.name = get_string(doc, "name", "");
  d.terminals = get_strings(doc, "terminals", "");
  d.nonterminals = get_strings(doc, "nonterminals", "");
  d.start = get_string(doc, "start", "");

  std::set<std::string> symbols;
  for (std::size_t i = 0; i < d.terminals.size(); ++i)
    if (!symbols.insert(d.terminals[i]).second)
      throw SchemaError("terminals[" + std::to_string(i) + "]", "duplicate id '" + d.terminals[i] + "'");
  for (std::size_t i = 0; i < d.nonterminals.size(); ++i)
    if (!symbols.insert(d.nonterminals[i]).second)
      throw SchemaError("nonterminals[" + std::to_string(i) + "]", "duplicate id '" + d.nonterminals[i] + "'");
  if (std::find(d.nonterminals.begin(), d.nonterminals.end(), d.start) == d.nonterminals.end())
    throw SchemaError("start", "undeclared nonterminal '" + d.start + "'");

  const json& vecs = get_array(doc, "vectors", "");
  std::set<std::string> vids;
  for (std::size_t v = 0; v < vecs.size(); ++v) {
    const std::string vpath = "vectors[" + std::to_string(v) + "]";
    Vector vec;
    vec.id = get_string(vecs[v], "id", vpath);
    if (!vids.insert(vec.id).second) throw SchemaError(vpath + ".id", "duplicate id '" + vec.id + "'");
    vec.lexeme = get_string(vecs[v], "lexeme", vpath);
    const json& prods = get_array(vecs[v], "productions", vpath);
    std::set<std::string> pids;
    for (std::size_t p = 0; p < prods.size(); ++p) {
      const std::string ppath = vpath + ".productions[" + std::to_string(p) + "]";
      Production prod = load_production(prods[p], ppath, symbols);
      if (!pids.insert(prod.id).second) throw SchemaError(ppath + ".id", "duplicate id '" + prod.id + "'");
      vec.productions.push_back(std::move(prod));
    }
    for (std::size_t p = 0; p < vec.productions.size(); ++p)
      for (std::size_t k = 0; k < vec.productions[p].dominance.size(); ++k)
        if (!pids.count(vec.productions[p].dominance[k].target))
          throw SchemaError(vpath + ".productions[" + std::to_string(p) + "].dominance[" + std::to_string(k) + "].target",
                            "dangling production reference '" + vec.productions[p].dominance[k].target + "'");
    d.vectors.push_back(std::move(vec));
  }
  return Grammar(std::move(d));
}

SynchGrammar load_synch(const json& doc) {
  Grammar left, right;
  try {
    left = load_grammar(field(doc, "left", ""));
  } catch (const SchemaError& e) {
    throw SchemaError("left." + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
  try {
    right = load_grammar(field(doc, "right", ""));
  } catch (const SchemaError& e) {
    throw SchemaError("right." + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
  const json& pairs = get_array(doc, "pairs", "");
  std::vector<VectorPair> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string ppath = "pairs[" + std::to_string(k) + "]";
    VectorPair pr;
    pr.left_vector = get_string(pairs[k], "left_vector", ppath);
    pr.right_vector = get_string(pairs[k], "right_vector", ppath);
    auto lv = left.vector_index(pr.left_vector);
    auto rv = right.vector_index(pr.right_vector);
    if (!lv) throw SchemaError(ppath + ".left_vector", "dangling vector reference '" + pr.left_vector + "'");
    if (!rv) throw SchemaError(ppath + ".right_vector", "dangling vector reference '" + pr.right_vector + "'");
    const json& links = get_array(pairs[k], "links", ppath);
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string lpath = ppath + ".links[" + std::to_string(i) + "]";
      auto occ = [&](const char* key, const Grammar& g, int vec) {
        const json& a = field(links[i], key, lpath);
        const std::string op = lpath + "." + key;
        if (!a.is_array() || a.size() != 2 || !a[0].is_string())
          throw SchemaError(op, "expected [productionId, occ]");
        OccurrenceRef ref{a[0].get<std::string>(), get_int(a[1], op + "[1]")};
        if (!g.production_index(vec, ref.production))
          throw SchemaError(op, "dangling production reference '" + ref.production + "'");
        return ref;
      };
      SyncLink link;
      link.left = occ("left", left, *lv);
      link.right = occ("right", right, *rv);
      pr.links.push_back(std::move(link));
    }
    out.push_back(std::move(pr));
  }
  return SynchGrammar(std::move(left), std::move(right), std::move(out));
}

std::variant<Grammar, SynchGrammar> load_document(const json& doc) {
  if (doc.is_object() && doc.contains("left") && doc.contains("right")) return load_synch(doc);
  return load_grammar(doc);
}

json dump_grammar(const Grammar& g) {
  const GrammarData& d = g.data();
  json vecs = json::array();
  for (const auto& v : d.vectors) {
    json prods = json::array();
    for (const auto& p : v.productions) {
      json jp = {{"id", p.id}, {"lhs", p.lhs}, {"rhs", p.rhs},
                 {"role", p.role == Role::synchronous ? "sync" : "async"}};
      if (p.heir) jp["heir"] = *p.heir;
      json dom = json::array();
      for (const auto& dl : p.dominance) dom.push_back({{"occ", dl.occurrence}, {"target", dl.target}});
      jp["dominance"] = std::move(dom);
      prods.push_back(std::move(jp));
    }
    vecs.push_back({{"id", v.id}, {"lexeme", v.lexeme}, {"productions", std::move(prods)}});
  }
  return {{"name", d.name}, {"terminals", d.terminals}, {"nonterminals", d.nonterminals},
          {"start", d.start}, {"vectors", std::move(vecs)}};
}

json dump_synch(const SynchGrammar& gs) {
  json pairs = json::array();
  for (const auto& pr : gs.pairs()) {
    json links = json::array();
    for (const auto& l : pr.links)
      links.push_back({{"left", json::array({l.left.production, l.left.position})},
                       {"right", json::array({l.right.production, l.right.position})}});
    pairs.push_back({{"left_vector", pr.left_vector}, {"right_vector", pr.right_vector}, {"links", std::move(links)}});
  }
  return {{"left", dump_grammar(gs.left())}, {"right", dump_grammar(gs.right())}, {"pairs", std::move(pairs)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
}

} // namespace suvg
