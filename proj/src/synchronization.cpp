#include "suvg/synchronization.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace suvg {

bool PairInstance::complete() const {
  auto all = [](const std::vector<char>& v) { return std::all_of(v.begin(), v.end(), [](char c) { return c != 0; }); };
  return all(used_left) && all(used_right);
}

std::vector<FormItem> SyncDerivationState::form(Side side) const {
  std::vector<FormItem> out;
  std::function<void(int)> walk = [&](int h) {
    const Handle& hd = handles[h];
    if (!hd.production) {
      out.push_back({std::nullopt, h});
      return;
    }
    for (const auto& c : hd.children) {
      if (c.terminal) out.push_back(c);
      else walk(c.handle);
    }
  };
  const int root = side == Side::left ? left_root : right_root;
  if (root >= 0) walk(root);
  return out;
}

std::size_t SyncDerivationState::live_count() const {
  return static_cast<std::size_t>(std::count_if(links.begin(), links.end(), [](const Link& l) { return l.live(); }));
}

std::size_t SyncDerivationState::pending_count() const {
  return static_cast<std::size_t>(std::count_if(links.begin(), links.end(), [](const Link& l) { return l.pending(); }));
}

bool SyncDerivationState::finished() const {
  if (live_count() || pending_count()) return false;
  for (const auto& i : instances)
    if (!i.complete() || i.consumed_link < 0) return false;
  return std::all_of(handles.begin(), handles.end(), [](const Handle& h) { return h.production.has_value(); });
}

namespace {

int find_link(const SynchGrammar& gs, int pair, Side side, const std::string& prod, int pos) {
  const auto& links = gs.pairs()[pair].links;
  for (int j = 0; j < static_cast<int>(links.size()); ++j) {
    const OccurrenceRef& r = side == Side::left ? links[j].left : links[j].right;
    if (r.production == prod && r.position == pos) return j;
  }
  return -1;
}

std::optional<int>& end_of(Link& l, Side s) { return s == Side::left ? l.left : l.right; }

std::vector<char>& used_of(PairInstance& i, Side s) { return s == Side::left ? i.used_left : i.used_right; }

PairInstance fresh_instance(const SynchGrammar& gs, int pair) {
  PairInstance i;
  i.pair = pair;
  i.used_left.assign(gs.left().vector(gs.vector_of(pair, Side::left)).productions.size(), 0);
  i.used_right.assign(gs.right().vector(gs.vector_of(pair, Side::right)).productions.size(), 0);
  i.link_ids.assign(gs.pairs()[pair].links.size(), -1);
  return i;
}

int resolve_instance(const SynchGrammar& gs, SyncDerivationState& s, int id, int pair) {
  if (id == static_cast<int>(s.instances.size())) {
    s.instances.push_back(fresh_instance(gs, pair));
    return id;
  }
  if (id < 0 || id > static_cast<int>(s.instances.size()))
    throw StepError("unknown pair instance " + std::to_string(id));
  if (s.instances[id].pair != pair)
    throw StepError("pair instance " + std::to_string(id) + " belongs to another vector pair");
  return id;
}

void check_open(const SyncDerivationState& s, int h, Side side) {
  if (h < 0 || h >= static_cast<int>(s.handles.size())) throw StepError("unknown handle " + std::to_string(h));
  if (s.handles[h].side != side) throw StepError("handle " + std::to_string(h) + " is on the " + side_name(s.handles[h].side) + " side");
  if (s.handles[h].production) throw StepError("handle " + std::to_string(h) + " is already rewritten");
}

// Rewrites handle h and introduces this production's own links.
void rewrite(const SynchGrammar& gs, SyncDerivationState& s, int h, Side side, ProdRef pr, int inst) {
  const Grammar& g = gs.side(side);
  const Production& p = g.production(pr);
  if (p.lhs != s.handles[h].symbol)
    throw StepError("production " + g.describe(pr) + " rewrites " + p.lhs + ", handle " + std::to_string(h) +
                    " is " + s.handles[h].symbol);
  char& used = used_of(s.instances[inst], side)[pr.production];
  if (used) throw StepError("instance " + std::to_string(inst) + " already used " + g.describe(pr));
  used = 1;
  s.handles[h].production = pr;
  s.handles[h].instance = inst;
  std::vector<FormItem> kids;
  for (int k = 0; k < static_cast<int>(p.rhs.size()); ++k) {
    if (!g.is_nonterminal(p.rhs[k])) {
      kids.push_back({p.rhs[k], -1});
      continue;
    }
    Handle c;
    c.side = side;
    c.symbol = p.rhs[k];
    c.parent = h;
    c.position = k;
    kids.push_back({std::nullopt, static_cast<int>(s.handles.size())});
    s.handles.push_back(std::move(c));
  }
  s.handles[h].children = kids;
  const int pair = s.instances[inst].pair;
  for (int k = 0; k < static_cast<int>(p.rhs.size()); ++k) {
    if (kids[k].terminal || (p.heir && *p.heir == k)) continue;
    const int j = find_link(gs, pair, side, p.id, k);
    if (j < 0) continue;
    int& id = s.instances[inst].link_ids[j];
    if (id < 0) {
      id = static_cast<int>(s.links.size());
      Link l;
      l.instance = inst;
      l.index = j;
      s.links.push_back(l);
    }
    auto& e = end_of(s.links[id], side);
    if (e) throw StepError("link " + std::to_string(id) + " introduced twice on the " + side_name(side) + " side");
    e = kids[k].handle;
    s.handles[kids[k].handle].links.push_back(id);
  }
}

void apply_async(const SynchGrammar& gs, SyncDerivationState& s, const AsyncApply& a) {
  const Grammar& g = gs.side(a.side);
  auto v = g.vector_index(a.vector);
  if (!v) throw StepError("unknown vector '" + a.vector + "'");
  auto pi = g.production_index(*v, a.production);
  if (!pi) throw StepError("unknown production '" + a.vector + "/" + a.production + "'");
  const ProdRef pr{*v, *pi};
  const Production& p = g.production(pr);
  if (p.role == Role::synchronous) throw StepError("synchronous production " + g.describe(pr) + " needs SyncApply");
  auto pair = gs.pair_of(a.side, *v);
  if (!pair) throw StepError("vector '" + a.vector + "' is unpaired");
  check_open(s, a.handle, a.side);
  if (!s.handles[a.handle].links.empty() && !p.heir)
    throw StepError("heirless production " + g.describe(pr) + " rewrites a handle carrying a link");
  const int inst = resolve_instance(gs, s, a.instance, *pair);
  rewrite(gs, s, a.handle, a.side, pr, inst);
  if (p.heir) {
    const int heir = s.handles[a.handle].children[*p.heir].handle;
    for (int l : s.handles[a.handle].links) {
      end_of(s.links[l], a.side) = heir;
      s.handles[heir].links.push_back(l);
    }
    s.handles[a.handle].links.clear();
  }
}

void apply_sync(const SynchGrammar& gs, SyncDerivationState& s, const SyncApply& a) {
  if (a.pair < 0 || a.pair >= static_cast<int>(gs.pairs().size())) throw StepError("unknown pair " + std::to_string(a.pair));
  check_open(s, a.left_handle, Side::left);
  check_open(s, a.right_handle, Side::right);
  const auto& lh = s.handles[a.left_handle].links;
  auto it = std::find_if(lh.begin(), lh.end(), [&](int l) {
    return s.links[l].live() && s.links[l].right == a.right_handle;
  });
  if (it == lh.end()) throw StepError("handles " + std::to_string(a.left_handle) + " and " +
                                      std::to_string(a.right_handle) + " are not linked");
  if (lh.size() != 1 || s.handles[a.right_handle].links.size() != 1)
    throw StepError("a synchronously rewritten handle carries a further link");
  const int link = *it;
  const int inst = resolve_instance(gs, s, a.instance, a.pair);
  if (s.instances[inst].consumed_link >= 0)
    throw StepError("instance " + std::to_string(inst) + " already applied its synchronous productions");
  const int lv = gs.vector_of(a.pair, Side::left), rv = gs.vector_of(a.pair, Side::right);
  const ProdRef lp{lv, *gs.left().sync_production(lv)}, rp{rv, *gs.right().sync_production(rv)};
  s.links[link].consumed = true;
  s.handles[a.left_handle].links.clear();
  s.handles[a.right_handle].links.clear();
  s.instances[inst].consumed_link = link;
  rewrite(gs, s, a.left_handle, Side::left, lp, inst);
  rewrite(gs, s, a.right_handle, Side::right, rp, inst);
}

} // namespace

SyncDerivationState initial_state(const SynchGrammar& gs) {
  SyncDerivationState s;
  Handle l, r;
  l.side = Side::left;
  l.symbol = gs.left().start();
  l.links = {0};
  r.side = Side::right;
  r.symbol = gs.right().start();
  r.links = {0};
  s.handles = {l, r};
  s.left_root = 0;
  s.right_root = 1;
  Link start;
  start.left = 0;
  start.right = 1;
  s.links.push_back(start);
  return s;
}

SyncDerivationState step(const SynchGrammar& gs, const SyncDerivationState& s, const Action& a) {
  SyncDerivationState out = s;
  if (auto* sa = std::get_if<SyncApply>(&a)) apply_sync(gs, out, *sa);
  else apply_async(gs, out, std::get<AsyncApply>(a));
  return out;
}

std::optional<std::string> audit_links(const SyncDerivationState& s) {
  std::map<int, int> seen;
  for (int i = 0; i < static_cast<int>(s.links.size()); ++i) {
    const Link& l = s.links[i];
    if (!l.live()) continue;
    if (s.handles[*l.left].side != Side::left || s.handles[*l.right].side != Side::right)
      return "link " + std::to_string(i) + " joins handles on the wrong sides";
    for (int h : {*l.left, *l.right})
      if (!seen.emplace(h, i).second)
        return "handle " + std::to_string(h) + " holds links " + std::to_string(seen[h]) + " and " + std::to_string(i);
  }
  return std::nullopt;
}

ParseTree derived_tree(const SynchGrammar& gs, const SyncDerivationState& s, Side side) {
  std::function<ParseTree(int)> build = [&](int h) {
    const Handle& hd = s.handles[h];
    if (!hd.production) throw PreconditionError("handle " + std::to_string(h) + " (" + hd.symbol + ") is still open");
    ParseTree t;
    t.production = *hd.production;
    t.instance = hd.instance;
    for (const auto& c : hd.children) t.children.push_back(c.terminal ? ParseTree::leaf(*c.terminal) : build(c.handle));
    return t;
  };
  return annotate_multisets(gs.side(side), build(side == Side::left ? s.left_root : s.right_root));
}

namespace {

struct FlatNode {
  const ParseTree* tree = nullptr;
  int parent = -1;
  int position = -1;
  std::vector<int> kids;  // per rhs position, -1 for terminals
};

std::vector<FlatNode> flatten(const ParseTree& t) {
  std::vector<FlatNode> out;
  std::function<int(const ParseTree&, int, int)> walk = [&](const ParseTree& n, int parent, int pos) {
    const int id = static_cast<int>(out.size());
    out.push_back({&n, parent, pos, {}});
    std::vector<int> kids;
    for (int k = 0; k < static_cast<int>(n.children.size()); ++k)
      kids.push_back(n.children[k].is_leaf() ? -1 : walk(n.children[k], id, k));
    out[id].kids = std::move(kids);
    return id;
  };
  if (!t.is_leaf()) walk(t, -1, -1);
  return out;
}

using LinkKey = std::pair<int, int>;  // (introducing instance, link index); (-1,-1) is the start link

// Which link each instance's synchronous production rewrites, traced back
// through heir chains on one side.
struct SideInfo {
  std::vector<int> vec;
  std::vector<int> sync_node;
  std::vector<LinkKey> consumed;
  std::map<LinkKey, int> consumer;
  std::string error;
};

SideInfo side_info(const SynchGrammar& gs, Side side, const std::vector<FlatNode>& nodes, const InstanceAssignment& a) {
  const Grammar& g = gs.side(side);
  SideInfo info;
  info.vec.assign(a.instances, -1);
  info.sync_node.assign(a.instances, -1);
  info.consumed.assign(a.instances, {-2, -2});
  for (int x = 0; x < static_cast<int>(nodes.size()); ++x) {
    const ProdRef pr = nodes[x].tree->production;
    info.vec[a.instance[x]] = pr.vector;
    if (g.production(pr).role == Role::synchronous) info.sync_node[a.instance[x]] = x;
  }
  for (int i = 0; i < a.instances; ++i) {
    const int x = info.sync_node[i];
    if (x < 0) {
      info.error = "instance " + std::to_string(i) + " has no synchronous production";
      return info;
    }
    int y = x;
    LinkKey key{-1, -1};
    while (nodes[y].parent >= 0) {
      const int par = nodes[y].parent;
      const Production& pp = g.production(nodes[par].tree->production);
      if (pp.heir && *pp.heir == nodes[y].position) {
        y = par;
        continue;
      }
      const int intro = a.instance[par];
      auto pair = gs.pair_of(side, nodes[par].tree->production.vector);
      const int j = pair ? find_link(gs, *pair, side, pp.id, nodes[y].position) : -1;
      if (j < 0) {
        info.error = "occurrence " + g.describe(nodes[par].tree->production) + "[" + std::to_string(nodes[y].position) +
                     "] rewritten synchronously carries no link";
        return info;
      }
      key = {intro, j};
      break;
    }
    info.consumed[i] = key;
    if (!info.consumer.emplace(key, i).second) {
      info.error = "two instances rewrite the same link";
      return info;
    }
  }
  return info;
}

struct Attempt {
  bool ok = false;
  std::string code, message;
  std::vector<Action> steps;
};

Attempt correspond_and_replay(const SynchGrammar& gs, const std::vector<FlatNode>& ln, const InstanceAssignment& la,
                              const SideInfo& li, const std::vector<FlatNode>& rn, const InstanceAssignment& ra,
                              const SideInfo& ri, std::uint64_t seed) {
  Attempt out;
  auto fail = [&](std::string code, std::string msg) {
    out.code = std::move(code);
    out.message = std::move(msg);
    return out;
  };
  if (la.instances != ra.instances)
    return fail("pair-instance", "left uses " + std::to_string(la.instances) + " vector instances, right " +
                                     std::to_string(ra.instances));
  const int n = la.instances;
  std::vector<int> l2r(n, -1), r2l(n, -1);
  std::deque<int> queue;
  auto match = [&](int l, int r) {
    if (l2r[l] == r) return true;
    if (l2r[l] >= 0 || r2l[r] >= 0) return false;
    auto pl = gs.pair_of(Side::left, li.vec[l]);
    auto pr = gs.pair_of(Side::right, ri.vec[r]);
    if (!pl || !pr || *pl != *pr) return false;
    l2r[l] = r;
    r2l[r] = l;
    queue.push_back(l);
    return true;
  };
  auto sl = li.consumer.find({-1, -1}), sr = ri.consumer.find({-1, -1});
  if (sl == li.consumer.end() || sr == ri.consumer.end()) return fail("start-link", "start link is never rewritten");
  if (!match(sl->second, sr->second)) return fail("pair-mismatch", "start link rewritten by unpaired vectors");
  while (!queue.empty()) {
    const int l = queue.front();
    queue.pop_front();
    const int r = l2r[l];
    const int pair = *gs.pair_of(Side::left, li.vec[l]);
    for (int j = 0; j < static_cast<int>(gs.pairs()[pair].links.size()); ++j) {
      auto cl = li.consumer.find({l, j});
      auto cr = ri.consumer.find({r, j});
      if (cl == li.consumer.end() || cr == ri.consumer.end())
        return fail("link-unconsumed", "a link of pair instance " + std::to_string(l) + " is never rewritten");
      if (!match(cl->second, cr->second))
        return fail("pair-mismatch", "linked occurrences rewritten by unpaired vector instances");
    }
  }
  for (int l = 0; l < n; ++l)
    if (l2r[l] < 0) return fail("pair-instance", "left instance " + std::to_string(l) + " has no synchronized partner");

  // replay
  SyncDerivationState s = initial_state(gs);
  std::vector<int> lh(ln.size(), -1), rh(rn.size(), -1);
  std::vector<char> ldone(ln.size(), 0), rdone(rn.size(), 0);
  std::vector<int> pid(n, -1);  // pair-instance id of left instance l
  lh[0] = s.left_root;
  rh[0] = s.right_root;
  auto pair_instance = [&](int l) { return pid[l] >= 0 ? pid[l] : pid[l] = static_cast<int>(s.instances.size()); };
  auto expose = [&](const std::vector<FlatNode>& nodes, std::vector<int>& hs, int x) {
    const Handle& h = s.handles[hs[x]];
    for (std::size_t k = 0; k < nodes[x].kids.size(); ++k)
      if (nodes[x].kids[k] >= 0) hs[nodes[x].kids[k]] = h.children[k].handle;
  };
  std::mt19937_64 rng(seed);
  std::size_t remaining = ln.size() + rn.size();
  while (remaining > 0) {
    // (kind, index): 0 left async, 1 right async, 2 sync for left instance
    std::vector<std::pair<int, int>> ready;
    for (int x = 0; x < static_cast<int>(ln.size()); ++x)
      if (!ldone[x] && lh[x] >= 0 && gs.left().production(ln[x].tree->production).role == Role::asynchronous)
        ready.push_back({0, x});
    for (int x = 0; x < static_cast<int>(rn.size()); ++x)
      if (!rdone[x] && rh[x] >= 0 && gs.right().production(rn[x].tree->production).role == Role::asynchronous)
        ready.push_back({1, x});
    for (int l = 0; l < n; ++l) {
      const int x = li.sync_node[l], y = ri.sync_node[l2r[l]];
      if (ldone[x] || lh[x] < 0 || rh[y] < 0) continue;
      const auto& links = s.handles[lh[x]].links;
      if (std::any_of(links.begin(), links.end(), [&](int k) { return s.links[k].live() && s.links[k].right == rh[y]; }))
        ready.push_back({2, l});
    }
    if (ready.empty()) return fail("order", "no step order realizes both trees (cyclic link dependency)");
    const auto [kind, idx] = seed == 0 ? ready.front() : ready[rng() % ready.size()];
    Action act;
    try {
      if (kind == 2) {
        const int x = li.sync_node[idx], y = ri.sync_node[l2r[idx]];
        act = SyncApply{*gs.pair_of(Side::left, li.vec[idx]), pair_instance(idx), lh[x], rh[y]};
        s = step(gs, s, act);
        ldone[x] = rdone[y] = 1;
        remaining -= 2;
        expose(ln, lh, x);
        expose(rn, rh, y);
      } else {
        const bool left = kind == 0;
        const auto& nodes = left ? ln : rn;
        const ProdRef pr = nodes[idx].tree->production;
        const Grammar& g = left ? gs.left() : gs.right();
        const int l = left ? la.instance[idx] : r2l[ra.instance[idx]];
        act = AsyncApply{left ? Side::left : Side::right, g.vector(pr.vector).id, pair_instance(l),
                         g.production(pr).id, (left ? lh : rh)[idx]};
        s = step(gs, s, act);
        (left ? ldone : rdone)[idx] = 1;
        --remaining;
        expose(nodes, left ? lh : rh, idx);
      }
    } catch (const StepError& e) {
      return fail("step", e.what());
    }
    out.steps.push_back(std::move(act));
  }
  if (!s.finished()) return fail("unfinished", "derivation ends with links or incomplete instances");
  out.ok = true;
  return out;
}

} // namespace

SyncVerdict check_sync_derivation(const SynchGrammar& gs, const ParseTree& left, const ParseTree& right,
                                  std::uint64_t seed, const Limits& limits) {
  SyncVerdict out;
  const Verdict lv = check_parse_tree(gs.left(), left, limits);
  if (!lv.accepted()) {
    out.code = "left-" + lv.code;
    out.message = lv.message;
    return out;
  }
  const Verdict rv = check_parse_tree(gs.right(), right, limits);
  if (!rv.accepted()) {
    out.code = "right-" + rv.code;
    out.message = rv.message;
    return out;
  }
  auto collect = [&](const Grammar& g, const ParseTree& t) {
    std::vector<InstanceAssignment> all;
    for_each_instance_assignment(g, t, [&](const InstanceAssignment& a) {
      all.push_back(a);
      return true;
    }, limits);
    return all;
  };
  const auto las = collect(gs.left(), left), ras = collect(gs.right(), right);
  const auto ln = flatten(left), rn = flatten(right);
  std::vector<SideInfo> rinfo;
  for (const auto& ra : ras) rinfo.push_back(side_info(gs, Side::right, rn, ra));
  std::size_t budget = 0;
  out.code = "no-grouping";
  out.message = "no instance grouping links the two trees";
  for (const auto& la : las) {
    const SideInfo li = side_info(gs, Side::left, ln, la);
    if (!li.error.empty()) {
      out.code = "link-trace";
      out.message = "left: " + li.error;
      continue;
    }
    for (std::size_t k = 0; k < ras.size(); ++k) {
      if (++budget > limits.search_budget) throw ResourceError("synchronous check exceeded the search budget");
      if (!rinfo[k].error.empty()) {
        out.code = "link-trace";
        out.message = "right: " + rinfo[k].error;
        continue;
      }
      Attempt a = correspond_and_replay(gs, ln, la, li, rn, ras[k], rinfo[k], seed);
      if (a.ok) {
        out.accepted = true;
        out.code.clear();
        out.message.clear();
        out.steps = std::move(a.steps);
        out.left_instances = la;
        out.right_instances = ras[k];
        return out;
      }
      out.code = a.code;
      out.message = a.message;
    }
  }
  return out;
}

VectorDerivationTree vector_derivation_tree(const SynchGrammar& gs, Side side, const ParseTree& t,
                                            const std::optional<InstanceAssignment>& instances, const Limits& limits) {
  const Grammar& g = gs.side(side);
  InstanceAssignment a;
  if (instances) {
    a = *instances;
  } else {
    const Verdict v = check_parse_tree(g, t, limits);
    if (!v.accepted()) throw PreconditionError("tree rejected (" + v.code + "): " + v.message);
    a = *v.witness;
  }
  const auto nodes = flatten(t);
  if (a.instance.size() != nodes.size()) throw PreconditionError("instance assignment does not fit the tree");
  const SideInfo info = side_info(gs, side, nodes, a);
  if (!info.error.empty()) throw PreconditionError("link provenance: " + info.error);
  VectorDerivationTree out;
  for (int i = 0; i < a.instances; ++i) {
    VdtNode n;
    n.lexeme = g.vector(info.vec[i]).lexeme;
    n.vector = g.vector(info.vec[i]).id;
    n.pair = gs.pair_of(side, info.vec[i]).value_or(-1);
    n.instance = i;
    n.link = info.consumed[i].second;
    out.nodes.push_back(std::move(n));
  }
  for (int i = 0; i < a.instances; ++i) {
    const int parent = info.consumed[i].first;
    if (parent < 0) {
      if (out.root >= 0) throw PreconditionError("two instances rewrite the start link");
      out.root = i;
    } else {
      out.nodes[parent].children.push_back(i);
    }
  }
  if (out.root < 0 && a.instances > 0) throw PreconditionError("no instance rewrites the start link");
  for (auto& n : out.nodes)
    std::sort(n.children.begin(), n.children.end(), [&](int x, int y) {
      return std::tie(out.nodes[x].lexeme, x) < std::tie(out.nodes[y].lexeme, y);
    });
  return out;
}

namespace {

std::string canonical(const VectorDerivationTree& g, int n) {
  std::vector<std::string> kids;
  for (int c : g.nodes[n].children) kids.push_back(canonical(g, c));
  std::sort(kids.begin(), kids.end());
  std::string s = "(" + (g.nodes[n].pair >= 0 ? std::to_string(g.nodes[n].pair) : g.nodes[n].lexeme);
  for (const auto& k : kids) s += k;
  return s + ")";
}

} // namespace

bool vdt_isomorphic(const VectorDerivationTree& a, const VectorDerivationTree& b) {
  if (a.size() != b.size()) return false;
  if (a.root < 0 || b.root < 0) return a.root == b.root;
  return canonical(a, a.root) == canonical(b, b.root);
}

json action_to_json(const SynchGrammar& gs, const Action& a) {
  if (auto* s = std::get_if<SyncApply>(&a))
    return {{"action", "SyncApply"},
            {"pair", s->pair},
            {"left_vector", gs.pairs()[s->pair].left_vector},
            {"right_vector", gs.pairs()[s->pair].right_vector},
            {"instance", s->instance},
            {"left_handle", s->left_handle},
            {"right_handle", s->right_handle}};
  const auto& y = std::get<AsyncApply>(a);
  return {{"action", "AsyncApply"}, {"side", side_name(y.side)}, {"vector", y.vector},
          {"instance", y.instance}, {"production", y.production}, {"handle", y.handle}};
}

json steps_to_json(const SynchGrammar& gs, const std::vector<Action>& steps) {
  json out = json::array();
  for (const auto& a : steps) out.push_back(action_to_json(gs, a));
  return out;
}

json vdt_to_json(const VectorDerivationTree& g) {
  std::function<json(int)> node = [&](int n) {
    json kids = json::array();
    for (int c : g.nodes[n].children) kids.push_back(node(c));
    return json{{"lexeme", g.nodes[n].lexeme}, {"instance", g.nodes[n].instance}, {"children", std::move(kids)}};
  };
  return g.root < 0 ? json(nullptr) : node(g.root);
}

std::string vdt_to_dot(const VectorDerivationTree& g) {
  std::ostringstream os;
  os << "digraph vdt {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    os << "  n" << i << " [label=\"" << g.nodes[i].lexeme << " #" << i << "\"];\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (int c : g.nodes[i].children) os << "  n" << i << " -> n" << c << ";\n";
  os << "}\n";
  return os.str();
}

} // namespace suvg
