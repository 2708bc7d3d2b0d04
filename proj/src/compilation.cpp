#include "suvg/compilation.hpp"
#include "suvg/forest.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace suvg {

std::string compound_name(const std::string& left, const std::string& right) {
  return "L⟨" + (left.empty() ? "_" : left) + "|" + (right.empty() ? "_" : right) + "⟩";
}

namespace {

struct Draft {
  Production production;
  ProductionOrigin origin;
};

class Compiler {
public:
  Compiler(const SynchGrammar& gs, const Limits& limits) : gs_(gs), L_(gs.left()), R_(gs.right()), limits_(limits) {}

  Compilation run() {
    Compilation c;
    GrammarData d;
    d.name = L_.name() + "+" + R_.name();
    d.terminals = L_.data().terminals;
    d.start = compound_name(L_.start(), R_.start());
    note_symbol(d.start);
    std::size_t total = 0;
    for (int k = 0; k < static_cast<int>(gs_.pairs().size()); ++k) {
      auto vecs = pair_vectors(k, c.report);
      total += vecs.size();
      if (total > limits_.max_variants) throw ResourceError("compiled vector variants exceed the configured cap");
      for (auto& [vec, origins] : vecs) {
        d.vectors.push_back(std::move(vec));
        for (auto& o : origins) c.origins.push_back(o);
      }
    }
    d.nonterminals = symbols_;
    c.report.variants = total;
    c.grammar = Grammar(std::move(d));
    return c;
  }

private:
  void note_symbol(const std::string& s) {
    if (seen_.insert(s).second) symbols_.push_back(s);
  }

  std::string name_of(Side side, int v, int p) const {
    const Grammar& g = gs_.side(side);
    if (p == *g.sync_production(v)) return "sync";
    return std::string(side == Side::left ? "L." : "R.") + g.vector(v).productions[p].id;
  }

  std::vector<std::pair<Vector, std::vector<ProductionOrigin>>> pair_vectors(int k, CompileReport& report) {
    const VectorPair& vp = gs_.pairs()[k];
    const int lv = gs_.vector_of(k, Side::left), rv = gs_.vector_of(k, Side::right);
    const Vector& V1 = L_.vector(lv);
    const Vector& V2 = R_.vector(rv);
    const int ls = *L_.sync_production(lv), rs = *R_.sync_production(rv);

    // partner symbol of each left linked occurrence; left partner of each right one
    std::map<std::pair<int, int>, std::string> right_symbol;
    std::map<std::pair<int, int>, std::pair<int, int>> left_partner;
    for (const auto& l : vp.links) {
      const int lp = *L_.production_index(lv, l.left.production);
      const int rp = *R_.production_index(rv, l.right.production);
      right_symbol[{lp, l.left.position}] = V2.productions[rp].rhs[l.right.position];
      left_partner[{rp, l.right.position}] = {lp, l.left.position};
    }

    // dominance of right productions, moved onto the left partner occurrence
    std::map<int, std::vector<DominanceLink>> moved;  // keyed by left production (ls stands for the fused one)
    for (int p = 0; p < static_cast<int>(V2.productions.size()); ++p) {
      const Production& rp = V2.productions[p];
      for (const auto& dl : rp.dominance) {
        const std::string target = name_of(Side::right, rv, *R_.production_index(rv, dl.target));
        if (rp.heir && *rp.heir == dl.occurrence) continue;  // stays on the unit step
        auto it = left_partner.find({p, dl.occurrence});
        const std::string where = V2.id + "/" + rp.id + "[" + std::to_string(dl.occurrence) + "]";
        if (it == left_partner.end()) {
          report.notes.push_back("dropped dominance link at " + where + ": occurrence has no left partner");
          continue;
        }
        const int carrier = it->second.first;
        if (name_of(Side::left, lv, carrier) == target) {
          report.notes.push_back("dropped dominance link at " + where + ": it would point at its own carrier");
          continue;
        }
        moved[carrier].push_back({it->second.second, target});
        report.notes.push_back("moved dominance link at " + where + " onto its left partner occurrence");
      }
    }

    auto left_rhs = [&](int p, int heir, const std::string& carry) {
      const Production& lp = V1.productions[p];
      std::vector<std::string> rhs;
      for (int i = 0; i < static_cast<int>(lp.rhs.size()); ++i) {
        const std::string& s = lp.rhs[i];
        if (!L_.is_nonterminal(s)) rhs.push_back(s);
        else if (i == heir) rhs.push_back(compound_name(s, carry));
        else {
          auto it = right_symbol.find({p, i});
          rhs.push_back(compound_name(s, it == right_symbol.end() ? "" : it->second));
        }
        if (L_.is_nonterminal(s)) note_symbol(rhs.back());
      }
      return rhs;
    };
    auto left_dominance = [&](int p) {
      std::vector<DominanceLink> out;
      for (const auto& dl : V1.productions[p].dominance)
        out.push_back({dl.occurrence, name_of(Side::left, lv, *L_.production_index(lv, dl.target))});
      for (const auto& dl : moved[p]) out.push_back(dl);
      return out;
    };

    // one slot per asynchronous production; each option yields a compiled production
    struct Slot {
      std::vector<Draft> options;
    };
    std::vector<Slot> slots;
    {
      Draft fused;
      fused.production.id = "sync";
      fused.production.lhs = compound_name(V1.productions[ls].lhs, V2.productions[rs].lhs);
      fused.production.rhs = left_rhs(ls, -1, "");
      fused.production.role = Role::synchronous;
      fused.production.dominance = left_dominance(ls);
      fused.origin = {k, Side::left, ls, true};
      note_symbol(fused.production.lhs);
      slots.push_back({{fused}});
    }
    for (int p = 0; p < static_cast<int>(V1.productions.size()); ++p) {
      if (p == ls) continue;
      const Production& lp = V1.productions[p];
      Slot slot;
      std::vector<std::string> carries;
      if (lp.heir) carries = R_.data().nonterminals;
      else carries = {""};
      for (const auto& C : carries) {
        Draft d;
        d.production.id = "L." + lp.id;
        d.production.lhs = compound_name(lp.lhs, C);
        d.production.rhs = left_rhs(p, lp.heir ? *lp.heir : -1, C);
        d.production.role = Role::asynchronous;
        d.production.heir = lp.heir;
        d.production.dominance = left_dominance(p);
        d.origin = {k, Side::left, p, false};
        note_symbol(d.production.lhs);
        slot.options.push_back(std::move(d));
      }
      slots.push_back(std::move(slot));
    }
    for (int p = 0; p < static_cast<int>(V2.productions.size()); ++p) {
      if (p == rs) continue;
      const Production& rp = V2.productions[p];
      Slot slot;
      std::vector<std::string> carries;
      if (rp.heir) carries = L_.data().nonterminals;
      else carries = {""};
      for (const auto& A : carries) {
        Draft d;
        d.production.id = "R." + rp.id;
        d.production.lhs = compound_name(A, rp.lhs);
        d.production.role = Role::asynchronous;
        if (rp.heir) {
          d.production.rhs = {compound_name(A, rp.rhs[*rp.heir])};
          d.production.heir = 0;
          note_symbol(d.production.rhs[0]);
          for (const auto& dl : rp.dominance)
            if (dl.occurrence == *rp.heir)
              d.production.dominance.push_back({0, name_of(Side::right, rv, *R_.production_index(rv, dl.target))});
        }
        d.origin = {k, Side::right, p, false};
        note_symbol(d.production.lhs);
        slot.options.push_back(std::move(d));
      }
      slots.push_back(std::move(slot));
    }

    std::size_t count = 1;
    for (const auto& s : slots) {
      count *= s.options.size();
      if (count > limits_.max_variants) throw ResourceError("compiled vector variants exceed the configured cap");
    }
    std::vector<std::pair<Vector, std::vector<ProductionOrigin>>> out;
    std::vector<std::size_t> pick(slots.size(), 0);
    for (std::size_t n = 0; n < count; ++n) {
      Vector v;
      v.id = V1.id + "+" + V2.id + (count > 1 ? "#" + std::to_string(n) : "");
      v.lexeme = V1.lexeme;
      std::vector<ProductionOrigin> origins;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        v.productions.push_back(slots[i].options[pick[i]].production);
        origins.push_back(slots[i].options[pick[i]].origin);
      }
      out.push_back({std::move(v), std::move(origins)});
      for (std::size_t i = slots.size(); i-- > 0;) {
        if (++pick[i] < slots[i].options.size()) break;
        pick[i] = 0;
      }
    }
    return out;
  }

  const SynchGrammar& gs_;
  const Grammar& L_;
  const Grammar& R_;
  const Limits& limits_;
  std::set<std::string> seen_;
  std::vector<std::string> symbols_;
};

} // namespace

Compilation compile_left_projection(const SynchGrammar& gs, const Limits& limits) {
  Compiler c(gs, limits);
  return c.run();
}

namespace {

std::uint32_t vectors_for(const Grammar& g, const SampleBound& b) {
  if (!b.max_vectors && !b.max_length) throw PreconditionError("language sample needs a bound");
  if (b.max_length && !b.max_vectors && validate_uvgdl(g).has("vector-not-lexicalized"))
    throw PreconditionError("a length bound needs a lexicalized grammar");
  std::uint32_t q = b.max_vectors.value_or(UINT32_MAX);
  if (b.max_length) q = std::min(q, *b.max_length);
  return q;
}

bool within(const SampleBound& b, const ParseTree& t) {
  return !b.max_length || yield(t).size() <= *b.max_length;
}

} // namespace

namespace {

// All trees within q instances; the forest is exact and much faster than the
// brute-force enumerator, which remains the fallback for other dominance shapes.
std::vector<ParseTree> bounded_trees(const Grammar& g, std::uint32_t q, const Limits& limits) {
  try {
    require_supported_dominance(g);
  } catch (const UnsupportedGrammar&) {
    return enumerate_derivations(g, DerivationBound::vectors(q), limits);
  }
  // one past the cap so that an overflow throws instead of truncating
  return enumerate_trees(build_forest_q(g, q, limits), limits.max_trees + 1, limits).trees;
}

int top_instance(const ParseTree& t) {
  int m = t.instance;
  for (const auto& c : t.children)
    if (!c.is_leaf()) m = std::max(m, top_instance(c));
  return m;
}

int instances(const ParseTree& t) { return top_instance(t) + 1; }

} // namespace

std::vector<std::string> language_sample(const Grammar& g, const SampleBound& bound, const Limits& limits) {
  const std::uint32_t q = vectors_for(g, bound);
  std::set<std::string> out;
  if (q > 0)
    for (const auto& t : bounded_trees(g, q, limits))
      if (within(bound, t)) out.insert(yield_string(t));
  return {out.begin(), out.end()};
}

std::vector<std::string> left_projection_sample(const SynchGrammar& gs, const SampleBound& bound,
                                                const Limits& limits) {
  const std::uint32_t q = vectors_for(gs.left(), bound);
  if (q == 0) return {};
  std::vector<ParseTree> lefts;
  int widest = 0;
  for (auto& l : bounded_trees(gs.left(), q, limits))
    if (within(bound, l)) {
      widest = std::max(widest, instances(l));
      lefts.push_back(std::move(l));
    }
  if (lefts.empty()) return {};
  std::map<int, std::vector<ParseTree>> right;
  for (auto& t : bounded_trees(gs.right(), static_cast<std::uint32_t>(widest), limits))
    right[instances(t)].push_back(std::move(t));
  std::set<std::string> out;
  for (const auto& l : lefts) {
    const std::string y = yield_string(l);
    if (out.count(y)) continue;
    for (const auto& r : right[instances(l)])
      if (check_sync_derivation(gs, l, r, 0, limits).accepted) {
        out.insert(y);
        break;
      }
  }
  return {out.begin(), out.end()};
}

ParseTree project_compiled_tree(const SynchGrammar& gs, const Compilation& c, const ParseTree& t) {
  std::function<ParseTree(const ParseTree&)> proj = [&](const ParseTree& n) -> ParseTree {
    if (n.is_leaf()) return n;
    const ProductionOrigin& o = c.origins.at(c.grammar.flat(n.production));
    if (o.side == Side::right && !o.fused) {
      for (const auto& ch : n.children)
        if (!ch.is_leaf()) return proj(ch);
      throw PreconditionError("right-side step " + c.grammar.describe(n.production) + " has nothing to contract to");
    }
    ParseTree out;
    const int lv = gs.vector_of(o.pair, Side::left);
    out.production = {lv, o.production};
    for (const auto& ch : n.children) out.children.push_back(proj(ch));
    return out;
  };
  return proj(t);
}

} // namespace suvg
