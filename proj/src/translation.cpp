#include "suvg/translation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace suvg {

Stage1 stage1(const SynchGrammar& gs, const ParseTree& tau, const Limits& limits) {
  const Verdict v = check_parse_tree(gs.left(), tau, limits);
  if (!v.accepted()) throw PreconditionError("left tree rejected (" + v.code + "): " + v.message);
  Stage1 s;
  s.left_instances = *v.witness;
  s.gamma = vector_derivation_tree(gs, Side::left, tau, s.left_instances, limits);
  s.q = static_cast<std::uint32_t>(s.gamma.size());
  s.pi_q = build_forest_q(gs.right(), s.q, limits);
  return s;
}

namespace {

// What a subderivation at an or-node commits to: the gamma node whose
// synchronous productions rewrite the link carried by the subtree root, and
// the (gamma node, production) uses it pins down.  Uses are encoded as ints.
struct Sig {
  int top = -1;
  std::vector<int> uses;
  auto operator<=>(const Sig&) const = default;
};

struct Choice {
  int and_node = -1;
  std::vector<int> child_sigs;
};

struct SigEntry {
  Sig sig;
  std::vector<Choice> choices;
};

int find_link(const SynchGrammar& gs, int pair, const std::string& prod, int pos) {
  const auto& links = gs.pairs()[pair].links;
  for (int j = 0; j < static_cast<int>(links.size()); ++j)
    if (links[j].right.production == prod && links[j].right.position == pos) return j;
  return -1;
}

// Disjoint union of sorted lists; false on overlap.
bool merge_into(std::vector<int>& acc, const std::vector<int>& add) {
  std::vector<int> out;
  out.reserve(acc.size() + add.size());
  std::size_t i = 0, j = 0;
  while (i < acc.size() || j < add.size()) {
    if (j == add.size() || (i < acc.size() && acc[i] < add[j])) out.push_back(acc[i++]);
    else if (i == acc.size() || add[j] < acc[i]) out.push_back(add[j++]);
    else return false;
  }
  acc = std::move(out);
  return true;
}

class Translator {
public:
  Translator(const ParseForest& pi, const VectorDerivationTree& gamma, const SynchGrammar& gs, const Limits& limits)
      : pi_(pi), gamma_(gamma), gs_(gs), g_(gs.right()), limits_(limits), memo_(pi.or_nodes.size()) {
    const int n = static_cast<int>(gamma.size());
    parent_.assign(n, -1);
    for (int m = 0; m < n; ++m)
      for (int c : gamma.nodes[m].children) parent_[c] = m;
    child_via_.resize(n);
    offset_.resize(n + 1, 0);
    for (int m = 0; m < n; ++m) {
      const int k = gamma.nodes[m].pair;
      if (k < 0) throw PreconditionError("vector derivation tree node " + std::to_string(m) + " is unpaired");
      child_via_[m].assign(gs.pairs()[k].links.size(), -1);
      offset_[m + 1] = offset_[m] + static_cast<int>(g_.vector(gs.vector_of(k, Side::right)).productions.size());
    }
    for (int m = 0; m < n; ++m)
      if (parent_[m] >= 0) child_via_[parent_[m]][gamma.nodes[m].link] = m;

    forced_.assign(g_.production_count(), 0);
    for (int i = 0; i < g_.production_count(); ++i) {
      const ProdRef pr = g_.unflat(i);
      const Production& p = g_.production(pr);
      auto k = gs.pair_of(Side::right, pr.vector);
      bool linked = p.role == Role::synchronous;
      if (k)
        for (int pos = 0; pos < static_cast<int>(p.rhs.size()); ++pos)
          if (!(p.heir && *p.heir == pos) && find_link(gs, *k, p.id, pos) >= 0) linked = true;
      forced_[i] = linked;
    }
    // unpinned productions are placed by counting; that is exact only when each
    // takes part in at most one dominance link
    std::vector<int> touches(g_.production_count(), 0);
    for (int i = 0; i < g_.production_count(); ++i) {
      const ProdRef pr = g_.unflat(i);
      for (const auto& dl : g_.production(pr).dominance) {
        ++touches[i];
        ++touches[g_.flat({pr.vector, *g_.production_index(pr.vector, dl.target)})];
      }
    }
    for (int i = 0; i < g_.production_count(); ++i)
      if (!forced_[i] && touches[i] > 1)
        throw UnsupportedGrammar("unsupported-grammar: unlinked asynchronous production " +
                                 g_.describe(g_.unflat(i)) + " takes part in several dominance links");

    for (int m = 0; m < n; ++m) {
      const int w = gs.vector_of(gamma.nodes[m].pair, Side::right);
      for (int p = 0; p < static_cast<int>(g_.vector(w).productions.size()); ++p)
        if (forced_[g_.flat({w, p})]) full_.push_back(use(m, p));
    }
    std::sort(full_.begin(), full_.end());
  }

  Stage2 run() {
    Stage2 out;
    const int n = static_cast<int>(gamma_.size());
    FamilyAnnotation& fa = out.annotation;
    fa.families.resize(pi_.or_nodes.size());
    for (int o = 0; o < static_cast<int>(pi_.or_nodes.size()); ++o) {
      const auto& entries = sigs(o);
      if (entries.empty()) fa.blocked.push_back(o);
      std::set<std::vector<int>> fams;
      for (const auto& e : entries) fams.insert(family(e.sig));
      fa.families[o].assign(fams.begin(), fams.end());
      fa.max_families = std::max(fa.max_families, fams.size());
      if (static_cast<int>(fams.size()) > n)
        throw std::logic_error("or-node " + std::to_string(o) + " has " + std::to_string(fams.size()) +
                               " families, more than the " + std::to_string(n) + " nodes of the vector derivation tree");
    }

    ParseForest& f = out.forest;
    f.grammar = g_;
    std::map<std::pair<int, int>, int> ids;
    for (int r : pi_.roots) {
      const auto& entries = sigs(r);
      for (int s = 0; s < static_cast<int>(entries.size()); ++s)
        if (entries[s].sig.top == gamma_.root && entries[s].sig.uses == full_) f.roots.push_back(emit(f, ids, r, s));
    }
    out.forest = prune(std::move(out.forest));
    return out;
  }

private:
  int use(int m, int p) const { return offset_[m] + p; }

  std::vector<int> family(const Sig& s) const {
    std::vector<char> in(gamma_.size(), 0);
    for (int m = 0; m < static_cast<int>(gamma_.size()); ++m) {
      const int w = gs_.vector_of(gamma_.nodes[m].pair, Side::right);
      in[m] = std::binary_search(s.uses.begin(), s.uses.end(), use(m, *g_.sync_production(w)));
    }
    std::vector<int> roots;
    for (int m = 0; m < static_cast<int>(gamma_.size()); ++m)
      if (in[m] && (parent_[m] < 0 || !in[parent_[m]])) roots.push_back(m);
    return roots;
  }

  std::string describe(const Sig& s) const {
    std::string out = "top=" + std::to_string(s.top) + " uses=";
    for (std::size_t i = 0; i < s.uses.size(); ++i) {
      auto it = std::upper_bound(offset_.begin(), offset_.end(), s.uses[i]) - 1;
      const int m = static_cast<int>(it - offset_.begin());
      const int w = gs_.vector_of(gamma_.nodes[m].pair, Side::right);
      out += (i ? "," : "") + std::to_string(m) + "/" + g_.vector(w).productions[s.uses[i] - *it].id;
    }
    return out;
  }

  int emit(ParseForest& f, std::map<std::pair<int, int>, int>& ids, int o, int s) {
    if (auto it = ids.find({o, s}); it != ids.end()) return it->second;
    const int id = static_cast<int>(f.or_nodes.size());
    ids.emplace(std::make_pair(o, s), id);
    const SigEntry& e = (*memo_[o])[s];
    f.or_nodes.push_back({pi_.or_nodes[o].nonterminal, pi_.or_nodes[o].f, describe(e.sig), {}});
    for (const auto& c : e.choices) {
      const AndNode& a = pi_.and_nodes[c.and_node];
      std::vector<int> kids;
      for (std::size_t i = 0; i < a.children.size(); ++i) kids.push_back(emit(f, ids, a.children[i], c.child_sigs[i]));
      f.or_nodes[id].choices.push_back(static_cast<int>(f.and_nodes.size()));
      f.and_nodes.push_back({a.production, a.f, std::move(kids)});
    }
    return id;
  }

  const std::vector<SigEntry>& sigs(int o) {
    if (memo_[o]) return *memo_[o];
    std::map<Sig, int> index;
    std::vector<SigEntry> entries;
    for (int a : pi_.or_nodes[o].choices) combine(a, index, entries);
    memo_[o] = std::move(entries);
    return *memo_[o];
  }

  void combine(int a, std::map<Sig, int>& index, std::vector<SigEntry>& entries) {
    const AndNode& an = pi_.and_nodes[a];
    const ProdRef pr = an.production;
    const Production& p = g_.production(pr);
    const int fi = g_.flat(pr);
    auto pair = gs_.pair_of(Side::right, pr.vector);
    if (!pair) return;
    const bool sync = p.role == Role::synchronous;
    if (!sync && !p.heir) return;  // cannot carry the link its handle holds

    struct Slot {
      int position;
      int link;
      const std::vector<SigEntry>* sigs;
    };
    std::vector<Slot> slots;
    int heir_slot = -1;
    {
      std::size_t k = 0;
      for (int pos = 0; pos < static_cast<int>(p.rhs.size()); ++pos) {
        if (!g_.is_nonterminal(p.rhs[pos])) continue;
        const bool heir = p.heir && *p.heir == pos;
        if (heir) heir_slot = static_cast<int>(k);
        const int j = heir ? -1 : find_link(gs_, *pair, p.id, pos);
        if (!heir && j < 0) return;
        slots.push_back({pos, j, &sigs(an.children[k])});
        ++k;
      }
    }
    if (slots.empty() && !sync) return;

    std::vector<int> candidates;
    if (forced_[fi]) {
      for (int m = 0; m < static_cast<int>(gamma_.size()); ++m)
        if (gamma_.nodes[m].pair == *pair) candidates.push_back(m);
    } else {
      candidates.push_back(-1);
    }

    for (int M : candidates) {
      std::vector<int> want(slots.size(), -1);  // required top per slot
      bool ok = true;
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].link >= 0) {
          want[i] = child_via_[M][slots[i].link];
          if (want[i] < 0) ok = false;
        }
      if (!ok) continue;
      // pinned dominance targets per slot
      std::vector<std::vector<int>> need(slots.size());
      if (M >= 0)
        for (const auto& dl : p.dominance) {
          const int t = *g_.production_index(pr.vector, dl.target);
          if (!forced_[g_.flat({pr.vector, t})]) continue;
          for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i].position == dl.occurrence) need[i].push_back(use(M, t));
        }
      std::vector<int> chosen(slots.size(), -1);
      std::vector<int> acc;
      walk(a, M, sync, fi, pr, slots.size(), 0, want, need, chosen, acc, heir_slot, index, entries,
           [&](std::size_t i) -> const std::vector<SigEntry>& { return *slots[i].sigs; });
    }
  }

  template <class Lists>
  void walk(int a, int M, bool sync, int fi, ProdRef pr, std::size_t k, std::size_t i, const std::vector<int>& want,
            const std::vector<std::vector<int>>& need, std::vector<int>& chosen, std::vector<int>& acc, int heir_slot,
            std::map<Sig, int>& index, std::vector<SigEntry>& entries, const Lists& lists) {
    if (++work_ > limits_.search_budget) throw ResourceError("translation exceeded the search budget");
    if (i == k) {
      Sig s;
      s.uses = acc;
      if (M >= 0 && !merge_into(s.uses, {use(M, pr.production)})) return;
      s.top = sync ? M : (*memo_[pi_.and_nodes[a].children[heir_slot]])[chosen[heir_slot]].sig.top;
      auto [it, fresh] = index.emplace(s, static_cast<int>(entries.size()));
      if (fresh) {
        entries.push_back({std::move(s), {}});
        if (++entries_ > limits_.max_table) throw ResourceError("translation table exceeded the configured cap");
      }
      entries[it->second].choices.push_back({a, chosen});
      (void)fi;
      return;
    }
    const auto& list = lists(i);
    for (int s = 0; s < static_cast<int>(list.size()); ++s) {
      const Sig& cs = list[s].sig;
      if (want[i] >= 0 && cs.top != want[i]) continue;
      bool ok = true;
      for (int u : need[i])
        if (!std::binary_search(cs.uses.begin(), cs.uses.end(), u)) ok = false;
      if (!ok) continue;
      std::vector<int> saved = acc;
      if (!merge_into(acc, cs.uses)) {
        acc = std::move(saved);
        continue;
      }
      chosen[i] = s;
      walk(a, M, sync, fi, pr, k, i + 1, want, need, chosen, acc, heir_slot, index, entries, lists);
      acc = std::move(saved);
    }
  }

  const ParseForest& pi_;
  const VectorDerivationTree& gamma_;
  const SynchGrammar& gs_;
  const Grammar& g_;
  const Limits& limits_;
  std::vector<std::optional<std::vector<SigEntry>>> memo_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> child_via_;
  std::vector<int> offset_;
  std::vector<char> forced_;
  std::vector<int> full_;
  std::size_t work_ = 0, entries_ = 0;
};

} // namespace

Stage2 stage2(const ParseForest& pi_q, const VectorDerivationTree& gamma, const SynchGrammar& gs, const Limits& limits) {
  Translator t(pi_q, gamma, gs, limits);
  return t.run();
}

ParseForest parse_to_forest(const SynchGrammar& gs, const ParseTree& tau, const Limits& limits,
                            FamilyAnnotation* annotation) {
  Stage1 s1 = stage1(gs, tau, limits);
  Stage2 s2 = stage2(s1.pi_q, s1.gamma, gs, limits);
  if (annotation) *annotation = std::move(s2.annotation);
  return std::move(s2.forest);
}

std::vector<ParseTree> brute_force_translate(const SynchGrammar& gs, const ParseTree& tau, std::uint32_t q,
                                             const Limits& limits) {
  std::vector<ParseTree> out;
  for (auto& t : enumerate_derivations(gs.right(), DerivationBound::vectors(q), limits))
    if (check_sync_derivation(gs, tau, t, 0, limits).accepted) out.push_back(std::move(t));
  return out;
}

} // namespace suvg
