#include "suvg/forest.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace suvg {

std::size_t ParseForest::arc_count() const {
  std::size_t n = 0;
  for (const auto& o : or_nodes) n += o.choices.size();
  for (const auto& a : and_nodes) n += a.children.size();
  return n;
}

void require_supported_dominance(const Grammar& g) {
  for (int v = 0; v < static_cast<int>(g.vectors().size()); ++v) {
    const auto& prods = g.vector(v).productions;
    std::vector<int> parent(prods.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
    for (int p = 0; p < static_cast<int>(prods.size()); ++p)
      for (const auto& dl : prods[p].dominance) {
        auto t = g.production_index(v, dl.target);
        if (!t) continue;
        const int a = root(p), b = root(*t);
        if (a == b)
          throw UnsupportedGrammar("unsupported-grammar: dominance links of vector " + g.vector(v).id +
                                   " do not form a forest (production " + prods[p].id + ")");
        parent[a] = b;
      }
  }
}

namespace {

class ForestBuilder {
public:
  ForestBuilder(const Grammar& g, std::uint32_t q, const Limits& limits) : g_(g), q_(q), limits_(limits) {
    for (const auto& n : g.data().nonterminals) nt_index_.emplace(n, static_cast<int>(nt_index_.size()));
    for (int i = 0; i < g.production_count(); ++i) {
      const Production& p = g.production(g.unflat(i));
      Info info;
      info.lhs = nt_index_.at(p.lhs);
      for (int k = 0; k < static_cast<int>(p.rhs.size()); ++k)
        if (g.is_nonterminal(p.rhs[k])) {
          info.positions.push_back(k);
          info.child_nt.push_back(nt_index_.at(p.rhs[k]));
        }
      info_.push_back(std::move(info));
    }
    std::size_t widest = 0;
    for (const auto& v : g.vectors()) widest = std::max(widest, v.productions.size());
    max_size_ = static_cast<int>(widest * q);
    by_size_.assign(nt_index_.size(), std::vector<std::vector<int>>(max_size_ + 1));
  }

  ParseForest run() {
    pi_.grammar = g_;
    for (int s = 1; s <= max_size_; ++s) {
      for (int i = 0; i < g_.production_count(); ++i) {
        Multiset acc(g_.production_count(), 0);
        std::vector<int> kids;
        combine(i, 0, s - 1, acc, kids, s);
      }
    }
    for (int o = 0; o < static_cast<int>(pi_.or_nodes.size()); ++o)
      if (pi_.or_nodes[o].nonterminal == g_.start() && g_.balanced(pi_.or_nodes[o].f)) pi_.roots.push_back(o);
    return prune(std::move(pi_));
  }

private:
  struct Info {
    int lhs = -1;
    std::vector<int> positions;
    std::vector<int> child_nt;
  };

  int size_of(const Multiset& f) const { return static_cast<int>(std::accumulate(f.begin(), f.end(), 0u)); }

  // Chooses child or-nodes for production `pi` whose sizes sum to `remaining`.
  void combine(int pi, std::size_t child, int remaining, Multiset& acc, std::vector<int>& kids, int level) {
    const Info& info = info_[pi];
    const std::size_t k = info.positions.size();
    if (child == k) {
      if (remaining != 0) return;
      emit(pi, acc, kids, level);
      return;
    }
    const int later = static_cast<int>(k - child - 1);  // each later child has size >= 1
    const int lo = child + 1 == k ? remaining : 1;
    const int hi = remaining - later;
    for (int s = lo; s <= hi; ++s) {
      for (int o : by_size_[info.child_nt[child]][s]) {
        const Multiset cf = pi_.or_nodes[o].f;  // emit() may grow or_nodes
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cf[i];
        if (g_.instance_count(acc) <= q_) {
          kids.push_back(o);
          combine(pi, child + 1, remaining - s, acc, kids, level);
          kids.pop_back();
        }
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= cf[i];
      }
    }
  }

  void emit(int pi, const Multiset& acc, const std::vector<int>& kids, int level) {
    Multiset f = acc;
    f[pi] += 1;
    if (g_.instance_count(f) > q_) return;
    const ProdRef pr = g_.unflat(pi);
    const Production& p = g_.production(pr);
    const Info& info = info_[pi];
    for (const auto& dl : p.dominance) {
      auto pos = std::find(info.positions.begin(), info.positions.end(), dl.occurrence);
      if (pos == info.positions.end()) return;
      const Multiset& cf = pi_.or_nodes[kids[pos - info.positions.begin()]].f;
      auto t = g_.production_index(pr.vector, dl.target);
      if (!t) return;
      if (cf[g_.flat({pr.vector, *t})] < 1 + cf[pi]) return;
    }
    auto key = std::make_pair(info.lhs, f);
    auto it = table_.find(key);
    int o;
    if (it == table_.end()) {
      o = static_cast<int>(pi_.or_nodes.size());
      pi_.or_nodes.push_back({p.lhs, f, "", {}});
      table_.emplace(std::move(key), o);
      by_size_[info.lhs][level].push_back(o);
    } else {
      o = it->second;
    }
    pi_.or_nodes[o].choices.push_back(static_cast<int>(pi_.and_nodes.size()));
    pi_.and_nodes.push_back({pr, std::move(f), kids});
    if (pi_.node_count() > limits_.max_table) throw ResourceError("forest table exceeded the configured cap");
  }

  const Grammar& g_;
  std::uint32_t q_;
  const Limits& limits_;
  std::map<std::string, int> nt_index_;
  std::vector<Info> info_;
  int max_size_ = 0;
  std::vector<std::vector<std::vector<int>>> by_size_;
  std::map<std::pair<int, Multiset>, int> table_;
  ParseForest pi_;
};

} // namespace

ParseForest build_forest_q(const Grammar& g, std::uint32_t q, const Limits& limits) {
  if (q < 1) throw PreconditionError("build_forest_q requires q >= 1");
  require_supported_dominance(g);
  ForestBuilder b(g, q, limits);
  return b.run();
}

ParseForest prune(ParseForest pi) {
  const std::size_t no = pi.or_nodes.size(), na = pi.and_nodes.size();
  // bottom-up liveness: an and-node lives iff all children live; an or-node iff some choice lives
  std::vector<char> or_live(no, 0), and_live(na, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < na; ++a) {
      if (and_live[a]) continue;
      const auto& ch = pi.and_nodes[a].children;
      if (std::all_of(ch.begin(), ch.end(), [&](int o) { return or_live[o] != 0; })) {
        and_live[a] = 1;
        changed = true;
      }
    }
    for (std::size_t o = 0; o < no; ++o) {
      if (or_live[o]) continue;
      const auto& ch = pi.or_nodes[o].choices;
      if (std::any_of(ch.begin(), ch.end(), [&](int a) { return and_live[a] != 0; })) {
        or_live[o] = 1;
        changed = true;
      }
    }
  }
  // top-down reachability from live roots
  std::vector<char> or_reach(no, 0), and_reach(na, 0);
  std::vector<int> stack;
  for (int r : pi.roots)
    if (or_live[r] && !or_reach[r]) {
      or_reach[r] = 1;
      stack.push_back(r);
    }
  while (!stack.empty()) {
    const int o = stack.back();
    stack.pop_back();
    for (int a : pi.or_nodes[o].choices) {
      if (!and_live[a] || and_reach[a]) continue;
      and_reach[a] = 1;
      for (int c : pi.and_nodes[a].children)
        if (!or_reach[c]) {
          or_reach[c] = 1;
          stack.push_back(c);
        }
    }
  }
  std::vector<int> or_map(no, -1), and_map(na, -1);
  ParseForest out;
  out.grammar = std::move(pi.grammar);
  for (std::size_t o = 0; o < no; ++o)
    if (or_reach[o]) {
      or_map[o] = static_cast<int>(out.or_nodes.size());
      out.or_nodes.push_back(std::move(pi.or_nodes[o]));
    }
  for (std::size_t a = 0; a < na; ++a)
    if (and_reach[a]) {
      and_map[a] = static_cast<int>(out.and_nodes.size());
      out.and_nodes.push_back(std::move(pi.and_nodes[a]));
    }
  for (auto& o : out.or_nodes) {
    std::vector<int> ch;
    for (int a : o.choices)
      if (a >= 0 && and_map[a] >= 0) ch.push_back(and_map[a]);
    o.choices = std::move(ch);
  }
  for (auto& a : out.and_nodes)
    for (int& c : a.children) c = or_map[c];
  const Grammar& g = out.grammar;
  for (auto& o : out.or_nodes)
    std::sort(o.choices.begin(), o.choices.end(), [&](int x, int y) {
      const auto& ax = out.and_nodes[x];
      const auto& ay = out.and_nodes[y];
      const int rx = g.rank(g.flat(ax.production)), ry = g.rank(g.flat(ay.production));
      if (rx != ry) return rx < ry;
      return ax.children < ay.children;
    });
  for (int r : pi.roots)
    if (r >= 0 && or_map[r] >= 0) out.roots.push_back(or_map[r]);
  std::sort(out.roots.begin(), out.roots.end());
  out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
  return out;
}

BigCount count_trees(const ParseForest& pi) {
  std::vector<std::optional<BigCount>> memo(pi.or_nodes.size());
  std::function<BigCount(int)> count_or = [&](int o) -> BigCount {
    if (memo[o]) return *memo[o];
    BigCount total = 0;
    for (int a : pi.or_nodes[o].choices) {
      BigCount prod = 1;
      for (int c : pi.and_nodes[a].children) {
        prod *= count_or(c);
        if (prod == 0) break;
      }
      total += prod;
    }
    memo[o] = total;
    return total;
  };
  BigCount total = 0;
  for (int r : pi.roots) total += count_or(r);
  return total;
}

namespace {

class TreeEnumerator {
public:
  TreeEnumerator(const ParseForest& pi, std::size_t limit) : pi_(pi), limit_(limit), memo_(pi.or_nodes.size()) {}

  const std::vector<ParseTree>& or_trees(int o) {
    if (memo_[o]) return *memo_[o];
    std::vector<ParseTree> all;
    for (int a : pi_.or_nodes[o].choices) {
      auto trees = and_trees(a);
      for (auto& t : trees) all.push_back(std::move(t));
    }
    sort_canonical(pi_.grammar, all);
    if (all.size() > limit_) all.resize(limit_);
    memo_[o] = std::move(all);
    return *memo_[o];
  }

private:
  std::vector<ParseTree> and_trees(int a) {
    const AndNode& node = pi_.and_nodes[a];
    std::vector<const std::vector<ParseTree>*> lists;
    for (int c : node.children) lists.push_back(&or_trees(c));
    std::vector<ParseTree> out;
    std::vector<const ParseTree*> chosen;
    product(node, lists, 0, chosen, out);
    return out;
  }

  void product(const AndNode& node, const std::vector<const std::vector<ParseTree>*>& lists, std::size_t i,
               std::vector<const ParseTree*>& chosen, std::vector<ParseTree>& out) {
    if (out.size() >= limit_) return;
    if (i == lists.size()) {
      ParseTree t;
      t.production = node.production;
      const Production& p = pi_.grammar.production(node.production);
      std::size_t k = 0;
      for (const auto& s : p.rhs) {
        if (pi_.grammar.is_nonterminal(s)) t.children.push_back(*chosen[k++]);
        else t.children.push_back(ParseTree::leaf(s));
      }
      out.push_back(std::move(t));
      return;
    }
    for (const auto& sub : *lists[i]) {
      chosen.push_back(&sub);
      product(node, lists, i + 1, chosen, out);
      chosen.pop_back();
      if (out.size() >= limit_) return;
    }
  }

  const ParseForest& pi_;
  std::size_t limit_;
  std::vector<std::optional<std::vector<ParseTree>>> memo_;
};

} // namespace

TreeList enumerate_trees(const ParseForest& pi, std::size_t limit, const Limits& limits) {
  TreeList out;
  const BigCount total = count_trees(pi);
  out.truncated = total > BigCount(limit);
  if (limit > limits.max_trees && total > BigCount(limits.max_trees))
    throw ResourceError("forest holds more trees than the configured cap");
  if (limit == 0) return out;
  TreeEnumerator e(pi, limit);
  std::vector<ParseTree> all;
  for (int r : pi.roots)
    for (const auto& t : e.or_trees(r)) all.push_back(t);
  sort_canonical(pi.grammar, all);
  if (all.size() > limit) all.resize(limit);
  for (auto& t : all) {
    Verdict v = check_parse_tree(pi.grammar, t, limits);
    if (v.witness) t = apply_instances(t, *v.witness);
    out.trees.push_back(annotate_multisets(pi.grammar, std::move(t)));
  }
  return out;
}

bool contains_tree(const ParseForest& pi, const ParseTree& t) {
  if (t.is_leaf()) return false;
  if (structural_defect(pi.grammar, t)) return false;
  const ParseTree a = annotate_multisets(pi.grammar, t);
  std::function<bool(int, const ParseTree&)> match = [&](int o, const ParseTree& n) -> bool {
    const OrNode& on = pi.or_nodes[o];
    if (on.nonterminal != pi.grammar.production(n.production).lhs || on.f != *n.multiset) return false;
    for (int c : on.choices) {
      const AndNode& an = pi.and_nodes[c];
      if (an.production != n.production) continue;
      std::size_t k = 0;
      bool ok = true;
      for (const auto& child : n.children) {
        if (child.is_leaf()) continue;
        if (k >= an.children.size() || !match(an.children[k++], child)) {
          ok = false;
          break;
        }
      }
      if (ok && k == an.children.size()) return true;
    }
    return false;
  };
  return std::any_of(pi.roots.begin(), pi.roots.end(), [&](int r) { return match(r, a); });
}

std::optional<std::string> audit_forest(const ParseForest& pi) {
  const Grammar& g = pi.grammar;
  const int no = static_cast<int>(pi.or_nodes.size());
  const int na = static_cast<int>(pi.and_nodes.size());
  for (int r : pi.roots)
    if (r < 0 || r >= no) return "root " + std::to_string(r) + " is not an or-node";
  for (int o = 0; o < no; ++o) {
    if (pi.or_nodes[o].choices.empty()) return "or-node " + std::to_string(o) + " has no choices";
    for (int a : pi.or_nodes[o].choices) {
      if (a < 0 || a >= na) return "or-node " + std::to_string(o) + " points outside the and-nodes";
      if (g.production(pi.and_nodes[a].production).lhs != pi.or_nodes[o].nonterminal)
        return "and-node " + std::to_string(a) + " does not expand the nonterminal of or-node " + std::to_string(o);
    }
  }
  for (int a = 0; a < na; ++a) {
    const AndNode& an = pi.and_nodes[a];
    const Production& p = g.production(an.production);
    std::size_t k = 0;
    for (const auto& s : p.rhs) {
      if (!g.is_nonterminal(s)) continue;
      if (k >= an.children.size()) return "and-node " + std::to_string(a) + " lacks a child for '" + s + "'";
      const int c = an.children[k++];
      if (c < 0 || c >= no) return "and-node " + std::to_string(a) + " points outside the or-nodes";
      if (pi.or_nodes[c].nonterminal != s) return "and-node " + std::to_string(a) + " child order does not match rhs";
    }
    if (k != an.children.size()) return "and-node " + std::to_string(a) + " has surplus children";
  }
  // acyclicity over or-nodes (and-nodes are pass-through)
  std::vector<int> state(no, 0);
  std::function<bool(int)> cyclic = [&](int o) {
    if (state[o] == 1) return true;
    if (state[o] == 2) return false;
    state[o] = 1;
    for (int a : pi.or_nodes[o].choices)
      for (int c : pi.and_nodes[a].children)
        if (cyclic(c)) return true;
    state[o] = 2;
    return false;
  };
  for (int o = 0; o < no; ++o)
    if (cyclic(o)) return std::string("forest contains a cycle");
  return std::nullopt;
}

json forest_to_json(const ParseForest& pi) {
  const Grammar& g = pi.grammar;
  json ors = json::array(), ands = json::array();
  for (std::size_t o = 0; o < pi.or_nodes.size(); ++o) {
    const auto& n = pi.or_nodes[o];
    json j = {{"id", o}, {"nonterminal", n.nonterminal}, {"multiset", multiset_to_json(g, n.f)}};
    if (!n.tag.empty()) j["tag"] = n.tag;
    j["choices"] = n.choices;
    ors.push_back(std::move(j));
  }
  for (std::size_t a = 0; a < pi.and_nodes.size(); ++a) {
    const auto& n = pi.and_nodes[a];
    ands.push_back({{"id", a},
                    {"vector", g.vector(n.production.vector).id},
                    {"production", g.production(n.production).id},
                    {"multiset", multiset_to_json(g, n.f)},
                    {"children", n.children}});
  }
  return {{"or_nodes", std::move(ors)}, {"and_nodes", std::move(ands)}, {"roots", pi.roots}};
}

std::string forest_to_dot(const ParseForest& pi) {
  const Grammar& g = pi.grammar;
  std::ostringstream os;
  os << "digraph forest {\n";
  for (std::size_t o = 0; o < pi.or_nodes.size(); ++o) {
    os << "  o" << o << " [shape=ellipse,label=\"" << pi.or_nodes[o].nonterminal << " #" << o;
    if (!pi.or_nodes[o].tag.empty()) os << "\\n" << pi.or_nodes[o].tag;
    os << "\"";
    if (std::find(pi.roots.begin(), pi.roots.end(), static_cast<int>(o)) != pi.roots.end()) os << ",peripheries=2";
    os << "];\n";
  }
  for (std::size_t a = 0; a < pi.and_nodes.size(); ++a)
    os << "  a" << a << " [shape=box,label=\"" << g.describe(pi.and_nodes[a].production) << "\"];\n";
  for (std::size_t o = 0; o < pi.or_nodes.size(); ++o)
    for (int a : pi.or_nodes[o].choices) os << "  o" << o << " -> a" << a << ";\n";
  for (std::size_t a = 0; a < pi.and_nodes.size(); ++a)
    for (std::size_t k = 0; k < pi.and_nodes[a].children.size(); ++k)
      os << "  a" << a << " -> o" << pi.and_nodes[a].children[k] << " [label=\"" << k << "\"];\n";
  os << "}\n";
  return os.str();
}

} // namespace suvg
