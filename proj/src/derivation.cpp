#include "suvg/derivation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace suvg {

bool same_structure(const ParseTree& a, const ParseTree& b) {
  if (a.is_leaf() || b.is_leaf()) return a.terminal == b.terminal;
  if (a.production != b.production || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(a.children[i], b.children[i])) return false;
  return true;
}

namespace {

void collect_key(const Grammar& g, const ParseTree& t, std::vector<int>& out) {
  if (t.is_leaf()) return;
  out.push_back(g.rank(g.flat(t.production)));
  for (const auto& c : t.children) collect_key(g, c, out);
}

} // namespace

std::vector<int> preorder_key(const Grammar& g, const ParseTree& t) {
  std::vector<int> k;
  collect_key(g, t, k);
  return k;
}

bool canonical_less(const Grammar& g, const ParseTree& a, const ParseTree& b) {
  return preorder_key(g, a) < preorder_key(g, b);
}

void sort_canonical(const Grammar& g, std::vector<ParseTree>& trees) {
  std::vector<std::pair<std::vector<int>, std::size_t>> keyed;
  keyed.reserve(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) keyed.emplace_back(preorder_key(g, trees[i]), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<ParseTree> out;
  out.reserve(trees.size());
  for (auto& [k, i] : keyed) out.push_back(std::move(trees[i]));
  trees = std::move(out);
}

namespace {

void collect_yield(const ParseTree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(*t.terminal);
    return;
  }
  for (const auto& c : t.children) collect_yield(c, out);
}

} // namespace

std::vector<std::string> yield(const ParseTree& t) {
  std::vector<std::string> out;
  collect_yield(t, out);
  return out;
}

std::string yield_string(const ParseTree& t) {
  std::string s;
  for (const auto& w : yield(t)) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

int internal_node_count(const ParseTree& t) {
  if (t.is_leaf()) return 0;
  int n = 1;
  for (const auto& c : t.children) n += internal_node_count(c);
  return n;
}

namespace {

// Internal nodes in preorder with subtree intervals.
struct FlatNode {
  const ParseTree* node;
  int parent;
  int end;                  // one past the last internal descendant
  std::vector<int> child;   // internal index per rhs position, -1 for leaves
};

void flatten_into(const ParseTree& t, int parent, std::vector<FlatNode>& out) {
  const int self = static_cast<int>(out.size());
  out.push_back({&t, parent, 0, std::vector<int>(t.children.size(), -1)});
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (t.children[i].is_leaf()) continue;
    out[self].child[i] = static_cast<int>(out.size());
    flatten_into(t.children[i], self, out);
  }
  out[self].end = static_cast<int>(out.size());
}

std::vector<FlatNode> flatten(const ParseTree& t) {
  std::vector<FlatNode> out;
  if (!t.is_leaf()) flatten_into(t, -1, out);
  return out;
}

void apply_into(ParseTree& t, const InstanceAssignment& a, int& idx) {
  if (t.is_leaf()) return;
  t.instance = a.instance.at(idx++);
  for (auto& c : t.children) apply_into(c, a, idx);
}

} // namespace

ParseTree apply_instances(const ParseTree& t, const InstanceAssignment& a) {
  ParseTree out = t;
  int idx = 0;
  apply_into(out, a, idx);
  return out;
}

std::optional<std::string> structural_defect(const Grammar& g, const ParseTree& t) {
  if (t.is_leaf()) return std::nullopt;
  const ProdRef pr = t.production;
  if (pr.vector < 0 || pr.vector >= static_cast<int>(g.vectors().size()) || pr.production < 0 ||
      pr.production >= static_cast<int>(g.vector(pr.vector).productions.size()))
    return std::string("node refers to an unknown production");
  const Production& p = g.production(pr);
  if (t.children.size() != p.rhs.size())
    return "node " + g.describe(pr) + " has " + std::to_string(t.children.size()) + " children, rhs has " +
           std::to_string(p.rhs.size());
  for (std::size_t i = 0; i < p.rhs.size(); ++i) {
    const ParseTree& c = t.children[i];
    if (g.is_terminal(p.rhs[i])) {
      if (!c.is_leaf() || *c.terminal != p.rhs[i])
        return "child " + std::to_string(i) + " of " + g.describe(pr) + " should be terminal '" + p.rhs[i] + "'";
      continue;
    }
    if (c.is_leaf()) return "child " + std::to_string(i) + " of " + g.describe(pr) + " should be nonterminal '" + p.rhs[i] + "'";
    if (auto d = structural_defect(g, c)) return d;
    if (g.production(c.production).lhs != p.rhs[i])
      return "child " + std::to_string(i) + " of " + g.describe(pr) + " has lhs '" + g.production(c.production).lhs +
             "', expected '" + p.rhs[i] + "'";
  }
  return std::nullopt;
}

ParseTree annotate_multisets(const Grammar& g, ParseTree t) {
  if (t.is_leaf()) return t;
  Multiset f(g.production_count(), 0);
  f[g.flat(t.production)] += 1;
  for (auto& c : t.children) {
    c = annotate_multisets(g, std::move(c));
    if (c.multiset)
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += (*c.multiset)[i];
  }
  t.multiset = std::move(f);
  return t;
}

Verdict hall_filter(const Grammar& g, const ParseTree& t) {
  const ParseTree a = t.multiset ? t : annotate_multisets(g, t);
  const auto nodes = flatten(a);
  for (const auto& n : nodes) {
    const ProdRef pr = n.node->production;
    const Production& p = g.production(pr);
    for (const auto& dl : p.dominance) {
      const int c = n.child.at(dl.occurrence);
      if (c < 0) continue;
      auto target = g.production_index(pr.vector, dl.target);
      if (!target) continue;
      const Multiset& fc = *nodes[c].node->multiset;
      const auto owed = 1 + fc[g.flat(pr)];
      const auto have = fc[g.flat(ProdRef{pr.vector, *target})];
      if (have < owed)
        return Verdict::reject("hall", "scope below " + g.describe(pr) + " holds " + std::to_string(have) + " uses of " +
                                           dl.target + " but owes " + std::to_string(owed));
    }
  }
  return Verdict::accept({});
}

namespace {

// Backtracking search over instance groupings of one vector.
class VectorGrouping {
public:
  VectorGrouping(const Grammar& g, const std::vector<FlatNode>& nodes, int vector, std::size_t& steps,
                 std::size_t budget)
      : g_(g), nodes_(nodes), vector_(vector), steps_(steps), budget_(budget) {
    const int np = static_cast<int>(g.vector(vector).productions.size());
    uses_.assign(np, {});
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      const ProdRef pr = nodes[i].node->production;
      if (pr.vector == vector) uses_[pr.production].push_back(i);
    }
    // anchor on the synchronous production when there is one
    const int anchor = g.sync_production(vector).value_or(0);
    k_ = static_cast<int>(uses_[anchor].size());
    // breadth-first over the undirected link graph so constraints bind early
    std::vector<bool> seen(np, false);
    std::deque<int> queue{anchor};
    seen[anchor] = true;
    auto neighbours = [&](int p) {
      std::vector<int> out;
      for (const auto& dl : g.vector(vector).productions[p].dominance)
        if (auto t = g.production_index(vector, dl.target)) out.push_back(*t);
      for (int q = 0; q < np; ++q)
        for (const auto& dl : g.vector(vector).productions[q].dominance)
          if (dl.target == g.vector(vector).productions[p].id) out.push_back(q);
      return out;
    };
    while (order_.size() < static_cast<std::size_t>(np)) {
      if (queue.empty()) {
        for (int p = 0; p < np; ++p)
          if (!seen[p]) {
            seen[p] = true;
            queue.push_back(p);
            break;
          }
      }
      const int p = queue.front();
      queue.pop_front();
      order_.push_back(p);
      for (int q : neighbours(p))
        if (!seen[q]) {
          seen[q] = true;
          queue.push_back(q);
        }
    }
    use_of_.assign(np, std::vector<int>(k_, -1));
    assigned_.assign(np, false);
  }

  // Calls visit(node -> group) for each complete grouping; stops when it returns false.
  bool run(const std::function<bool(const std::vector<std::pair<int, int>>&)>& visit) {
    for (int g = 0; g < k_; ++g) use_of_[order_[0]][g] = uses_[order_[0]][g];
    assigned_[order_[0]] = true;
    if (!links_ok(order_[0], -1)) return true;
    return assign_production(1, visit);
  }

private:
  bool in_scope(int carrier_node, int occ, int target_node) const {
    const int c = nodes_[carrier_node].child.at(occ);
    if (c < 0) return false;
    return target_node >= c && target_node < nodes_[c].end;
  }

  // Dominance links between production p (in group g, or all groups when g < 0)
  // and productions already assigned.
  bool links_ok(int p, int g) const {
    const auto& prods = g_.vector(vector_).productions;
    auto check_group = [&](int grp) {
      for (const auto& dl : prods[p].dominance) {
        auto t = g_.production_index(vector_, dl.target);
        if (!t || !assigned_[*t]) continue;
        if (!in_scope(use_of_[p][grp], dl.occurrence, use_of_[*t][grp])) return false;
      }
      for (int q = 0; q < static_cast<int>(prods.size()); ++q) {
        if (!assigned_[q] || q == p) continue;
        for (const auto& dl : prods[q].dominance)
          if (dl.target == prods[p].id && !in_scope(use_of_[q][grp], dl.occurrence, use_of_[p][grp])) return false;
      }
      return true;
    };
    if (g >= 0) return check_group(g);
    for (int grp = 0; grp < k_; ++grp)
      if (!check_group(grp)) return false;
    return true;
  }

  bool assign_production(std::size_t idx, const std::function<bool(const std::vector<std::pair<int, int>>&)>& visit) {
    if (idx == order_.size()) {
      std::vector<std::pair<int, int>> out;
      for (std::size_t p = 0; p < use_of_.size(); ++p)
        for (int grp = 0; grp < k_; ++grp) out.emplace_back(use_of_[p][grp], grp);
      return visit(out);
    }
    const int p = order_[idx];
    std::vector<bool> taken(k_, false);
    return assign_use(idx, p, 0, taken, visit);
  }

  bool assign_use(std::size_t idx, int p, int i, std::vector<bool>& taken,
                  const std::function<bool(const std::vector<std::pair<int, int>>&)>& visit) {
    if (i == k_) {
      assigned_[p] = true;
      const bool go_on = assign_production(idx + 1, visit);
      assigned_[p] = false;
      return go_on;
    }
    for (int grp = 0; grp < k_; ++grp) {
      if (taken[grp]) continue;
      if (++steps_ > budget_) throw ResourceError("instance-assignment search budget exceeded");
      use_of_[p][grp] = uses_[p][i];
      assigned_[p] = true;
      const bool ok = links_ok(p, grp);
      assigned_[p] = false;
      if (ok) {
        // links to p itself are only checked once every use has a group
        taken[grp] = true;
        const bool go_on = assign_use(idx, p, i + 1, taken, visit);
        taken[grp] = false;
        if (!go_on) {
          use_of_[p][grp] = -1;
          return false;
        }
      }
      use_of_[p][grp] = -1;
    }
    return true;
  }

  const Grammar& g_;
  const std::vector<FlatNode>& nodes_;
  int vector_;
  std::size_t& steps_;
  std::size_t budget_;
  int k_ = 0;
  std::vector<std::vector<int>> uses_;
  std::vector<int> order_;
  std::vector<std::vector<int>> use_of_;
  std::vector<bool> assigned_;
};

InstanceAssignment renumber(const std::vector<int>& temp) {
  InstanceAssignment a;
  a.instance.assign(temp.size(), -1);
  std::map<int, int> fresh;
  for (std::size_t i = 0; i < temp.size(); ++i) {
    auto [it, inserted] = fresh.emplace(temp[i], static_cast<int>(fresh.size()));
    a.instance[i] = it->second;
  }
  a.instances = static_cast<int>(fresh.size());
  return a;
}

} // namespace

void for_each_instance_assignment(const Grammar& g, const ParseTree& t,
                                  const std::function<bool(const InstanceAssignment&)>& visit,
                                  const Limits& limits) {
  const auto nodes = flatten(t);
  std::size_t steps = 0;
  // per-vector solutions as (node, group) lists
  std::vector<std::vector<std::vector<std::pair<int, int>>>> per_vector;
  std::vector<int> offsets;
  int offset = 0;
  for (int v = 0; v < static_cast<int>(g.vectors().size()); ++v) {
    VectorGrouping search(g, nodes, v, steps, limits.search_budget);
    std::vector<std::vector<std::pair<int, int>>> sols;
    search.run([&](const std::vector<std::pair<int, int>>& s) {
      sols.push_back(s);
      if (sols.size() > limits.max_trees) throw ResourceError("too many instance groupings");
      return true;
    });
    if (sols.empty()) return;
    int k = 0;
    for (const auto& [node, grp] : sols.front()) k = std::max(k, grp + 1);
    offsets.push_back(offset);
    offset += k;
    per_vector.push_back(std::move(sols));
  }
  std::vector<int> temp(nodes.size(), -1);
  std::function<bool(std::size_t)> product = [&](std::size_t v) {
    if (v == per_vector.size()) return visit(renumber(temp));
    for (const auto& sol : per_vector[v]) {
      for (const auto& [node, grp] : sol) temp[node] = offsets[v] + grp;
      if (!product(v + 1)) return false;
    }
    return true;
  };
  product(0);
}

Verdict check_parse_tree(const Grammar& g, const ParseTree& t, const Limits& limits) {
  if (t.is_leaf()) return Verdict::malformed("root is a terminal leaf");
  if (auto d = structural_defect(g, t)) return Verdict::malformed(*d);
  if (g.production(t.production).lhs != g.start())
    return Verdict::reject("start-mismatch", "root is not labeled with the start symbol");
  const ParseTree a = annotate_multisets(g, t);
  if (!g.balanced(*a.multiset)) {
    for (int v = 0; v < static_cast<int>(g.vectors().size()); ++v) {
      const auto& prods = g.vector(v).productions;
      for (int p = 1; p < static_cast<int>(prods.size()); ++p)
        if ((*a.multiset)[g.flat({v, p})] != (*a.multiset)[g.flat({v, 0})])
          return Verdict::reject("vector-count", "productions of vector " + g.vector(v).id + " used unequally");
    }
  }
  if (Verdict h = hall_filter(g, a); !h.accepted()) return Verdict::reject("dominance", h.message);
  std::optional<InstanceAssignment> found;
  for_each_instance_assignment(
      g, a,
      [&](const InstanceAssignment& w) {
        found = w;
        return false;
      },
      limits);
  if (!found) return Verdict::reject("dominance", "no instance grouping satisfies every dominance link");
  return Verdict::accept(std::move(*found));
}

// ---------------------------------------------------------------------------
// Brute-force enumeration over leftmost derivations.

namespace {

class LeftmostEnumerator {
public:
  LeftmostEnumerator(const Grammar& g, const DerivationBound& b, const Limits& limits)
      : g_(g), bound_(b), limits_(limits), f_(g.production_count(), 0), vcount_(g.vectors().size(), 0) {
    if (b.target) cap_ = static_cast<std::uint32_t>(b.target->size()) * b.instances_per_terminal;
    else cap_ = b.max_vectors.value_or(0);
  }

  std::vector<ParseTree> run() {
    stack_.push_back({-1, 0});
    dfs(0, 0);
    sort_canonical(g_, out_);
    return std::move(out_);
  }

private:
  struct Node {
    ProdRef prod;
    std::vector<int> kids;
  };
  struct Slot {
    int parent;
    int pos;
  };

  const std::string& symbol(const Slot& s) const {
    if (s.parent < 0) return g_.start();
    return g_.production(arena_[s.parent].prod).rhs[s.pos];
  }

  void dfs(std::size_t tpos, std::size_t pending_terminals) {
    if (++steps_ > limits_.search_budget) throw ResourceError("derivation enumeration search budget exceeded");
    if (stack_.empty()) {
      if (bound_.target && tpos != bound_.target->size()) return;
      emit();
      return;
    }
    const Slot slot = stack_.back();
    stack_.pop_back();
    const std::string& sym = symbol(slot);
    if (!g_.is_nonterminal(sym)) {
      if (!bound_.target || (tpos < bound_.target->size() && (*bound_.target)[tpos] == sym))
        dfs(tpos + 1, pending_terminals - 1);
      stack_.push_back(slot);
      return;
    }
    for (const ProdRef pr : g_.productions_for(sym)) {
      const Production& p = g_.production(pr);
      const int fi = g_.flat(pr);
      f_[fi] += 1;
      const std::uint32_t old = vcount_[pr.vector];
      vcount_[pr.vector] = std::max(old, f_[fi]);
      total_ += vcount_[pr.vector] - old;
      std::size_t terms = 0;
      for (const auto& s : p.rhs)
        if (!g_.is_nonterminal(s)) ++terms;
      const bool fits_string =
          !bound_.target || pending_terminals + terms + tpos <= bound_.target->size();
      if (total_ <= cap_ && fits_string) {
        const int id = static_cast<int>(arena_.size());
        arena_.push_back({pr, std::vector<int>(p.rhs.size(), -1)});
        if (slot.parent >= 0) arena_[slot.parent].kids[slot.pos] = id;
        for (int i = static_cast<int>(p.rhs.size()) - 1; i >= 0; --i) stack_.push_back({id, i});
        dfs(tpos, pending_terminals + terms);
        stack_.resize(stack_.size() - p.rhs.size());
        if (slot.parent >= 0) arena_[slot.parent].kids[slot.pos] = -1;
        arena_.pop_back();
      }
      total_ -= vcount_[pr.vector] - old;
      vcount_[pr.vector] = old;
      f_[fi] -= 1;
    }
    stack_.push_back(slot);
  }

  ParseTree build(int id) const {
    ParseTree t;
    t.production = arena_[id].prod;
    const Production& p = g_.production(t.production);
    for (std::size_t i = 0; i < p.rhs.size(); ++i) {
      if (arena_[id].kids[i] < 0) t.children.push_back(ParseTree::leaf(p.rhs[i]));
      else t.children.push_back(build(arena_[id].kids[i]));
    }
    return t;
  }

  void emit() {
    if (!g_.balanced(f_)) return;
    ParseTree t = build(0);
    Verdict v = check_parse_tree(g_, t, limits_);
    if (!v.accepted()) return;
    if (out_.size() >= limits_.max_trees) throw ResourceError("derivation enumeration exceeded the tree cap");
    out_.push_back(annotate_multisets(g_, apply_instances(t, *v.witness)));
  }

  const Grammar& g_;
  const DerivationBound& bound_;
  const Limits& limits_;
  std::uint32_t cap_ = 0;
  Multiset f_;
  std::vector<std::uint32_t> vcount_;
  std::uint32_t total_ = 0;
  std::vector<Node> arena_;
  std::vector<Slot> stack_;
  std::vector<ParseTree> out_;
  std::size_t steps_ = 0;
};

} // namespace

std::vector<ParseTree> enumerate_derivations(const Grammar& g, const DerivationBound& bound, const Limits& limits) {
  if (!bound.target && !bound.max_vectors) throw PreconditionError("enumerate_derivations needs a bound");
  LeftmostEnumerator e(g, bound, limits);
  return e.run();
}

std::vector<std::string> tokenize(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// ---------------------------------------------------------------------------

json multiset_to_json(const Grammar& g, const Multiset& f) {
  std::vector<std::tuple<std::string, std::string, std::uint32_t>> rows;
  for (int i = 0; i < static_cast<int>(f.size()); ++i) {
    if (f[i] == 0) continue;
    const ProdRef pr = g.unflat(i);
    rows.emplace_back(g.vector(pr.vector).id, g.production(pr).id, f[i]);
  }
  std::sort(rows.begin(), rows.end());
  json out = json::array();
  for (auto& [v, p, c] : rows) out.push_back(json::array({v, p, c}));
  return out;
}

json tree_to_json(const Grammar& g, const ParseTree& t) {
  if (t.is_leaf()) return {{"terminal", *t.terminal}};
  json kids = json::array();
  for (const auto& c : t.children) kids.push_back(tree_to_json(g, c));
  json j = {{"vector", g.vector(t.production.vector).id}, {"production", g.production(t.production).id}};
  if (t.instance >= 0) j["instance"] = t.instance;
  j["children"] = std::move(kids);
  if (t.multiset) j["multiset"] = multiset_to_json(g, *t.multiset);
  return j;
}

namespace {

ParseTree tree_from_json_at(const Grammar& g, const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (auto it = j.find("terminal"); it != j.end()) {
    if (!it->is_string()) throw SchemaError(path + ".terminal", "expected a string");
    return ParseTree::leaf(it->get<std::string>());
  }
  for (const char* key : {"vector", "production"})
    if (!j.contains(key) || !j[key].is_string()) throw SchemaError(path + "." + key, "missing required field");
  auto pr = g.find(j["vector"].get<std::string>(), j["production"].get<std::string>());
  if (!pr) throw SchemaError(path, "unknown production " + j["vector"].get<std::string>() + "/" + j["production"].get<std::string>());
  ParseTree t;
  t.production = *pr;
  if (auto it = j.find("instance"); it != j.end() && it->is_number_integer()) t.instance = it->get<int>();
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(path + ".children", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      t.children.push_back(tree_from_json_at(g, (*it)[i], path + ".children[" + std::to_string(i) + "]"));
  }
  return t;
}

void dot_nodes(const Grammar& g, const ParseTree& t, int& next, std::ostringstream& os) {
  const int self = next++;
  if (t.is_leaf()) {
    os << "  n" << self << " [shape=plaintext,label=\"" << *t.terminal << "\"];\n";
    return;
  }
  os << "  n" << self << " [label=\"" << g.production(t.production).lhs << "\\n" << g.describe(t.production);
  if (t.instance >= 0) os << " #" << t.instance;
  os << "\"];\n";
  for (const auto& c : t.children) {
    const int child = next;
    dot_nodes(g, c, next, os);
    os << "  n" << self << " -> n" << child << ";\n";
  }
}

void bracket(const Grammar& g, const ParseTree& t, std::ostringstream& os) {
  if (t.is_leaf()) {
    os << *t.terminal;
    return;
  }
  os << '(' << g.production(t.production).lhs << '[' << g.describe(t.production) << ']';
  for (const auto& c : t.children) {
    os << ' ';
    bracket(g, c, os);
  }
  os << ')';
}

} // namespace

ParseTree tree_from_json(const Grammar& g, const json& j) { return tree_from_json_at(g, j, "tree"); }

std::string tree_to_dot(const Grammar& g, const ParseTree& t) {
  std::ostringstream os;
  os << "digraph tree {\n";
  int next = 0;
  dot_nodes(g, t, next, os);
  os << "}\n";
  return os.str();
}

std::string tree_to_string(const Grammar& g, const ParseTree& t) {
  std::ostringstream os;
  bracket(g, t, os);
  return os.str();
}

} // namespace suvg
