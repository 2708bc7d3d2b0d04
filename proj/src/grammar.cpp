#include "suvg/grammar.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace suvg {

Limits Limits::from_env() {
  Limits l;
  auto read = [](const char* name, std::size_t& slot) {
    if (const char* v = std::getenv(name)) {
      try {
        slot = static_cast<std::size_t>(std::stoull(v));
      } catch (const std::exception&) {
        // ignore malformed values, keep default
      }
    }
  };
  read("SUVG_MAX_TREES", l.max_trees);
  read("SUVG_MAX_TABLE", l.max_table);
  read("SUVG_SEARCH_BUDGET", l.search_budget);
  return l;
}

Grammar::Grammar(GrammarData data) : data_(std::move(data)) {
  for (const auto& t : data_.terminals) kinds_.emplace(t, SymbolKind::terminal);
  for (const auto& n : data_.nonterminals) kinds_.emplace(n, SymbolKind::nonterminal);

  int total = 0;
  production_ids_.resize(data_.vectors.size());
  for (int v = 0; v < static_cast<int>(data_.vectors.size()); ++v) {
    const Vector& vec = data_.vectors[v];
    vector_ids_.emplace(vec.id, v);
    offset_.push_back(total);
    for (int p = 0; p < static_cast<int>(vec.productions.size()); ++p) {
      production_ids_[v].emplace(vec.productions[p].id, p);
      flat_.push_back(ProdRef{v, p});
      by_lhs_[vec.productions[p].lhs].push_back(ProdRef{v, p});
      ++total;
    }
  }

  std::vector<int> order(flat_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const ProdRef pa = flat_[a], pb = flat_[b];
    const auto& va = data_.vectors[pa.vector];
    const auto& vb = data_.vectors[pb.vector];
    if (va.id != vb.id) return va.id < vb.id;
    return va.productions[pa.production].id < vb.productions[pb.production].id;
  });
  rank_.assign(flat_.size(), 0);
  for (int r = 0; r < static_cast<int>(order.size()); ++r) rank_[order[r]] = r;
}

bool Grammar::is_terminal(std::string_view s) const {
  auto it = kinds_.find(s);
  return it != kinds_.end() && it->second == SymbolKind::terminal;
}

bool Grammar::is_nonterminal(std::string_view s) const {
  auto it = kinds_.find(s);
  return it != kinds_.end() && it->second == SymbolKind::nonterminal;
}

std::optional<int> Grammar::vector_index(std::string_view id) const {
  auto it = vector_ids_.find(id);
  if (it == vector_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Grammar::production_index(int vector, std::string_view id) const {
  if (vector < 0 || vector >= static_cast<int>(production_ids_.size())) return std::nullopt;
  auto it = production_ids_[vector].find(id);
  if (it == production_ids_[vector].end()) return std::nullopt;
  return it->second;
}

std::optional<ProdRef> Grammar::find(std::string_view vector_id, std::string_view prod_id) const {
  auto v = vector_index(vector_id);
  if (!v) return std::nullopt;
  auto p = production_index(*v, prod_id);
  if (!p) return std::nullopt;
  return ProdRef{*v, *p};
}

std::optional<int> Grammar::sync_production(int vector) const {
  const auto& prods = data_.vectors.at(vector).productions;
  for (int p = 0; p < static_cast<int>(prods.size()); ++p)
    if (prods[p].role == Role::synchronous) return p;
  return std::nullopt;
}

std::uint32_t Grammar::vector_count(const Multiset& f, int vector) const {
  std::uint32_t m = 0;
  const int n = static_cast<int>(data_.vectors[vector].productions.size());
  for (int p = 0; p < n; ++p) m = std::max(m, f[offset_[vector] + p]);
  return m;
}

std::uint32_t Grammar::instance_count(const Multiset& f) const {
  std::uint32_t total = 0;
  for (int v = 0; v < static_cast<int>(data_.vectors.size()); ++v) total += vector_count(f, v);
  return total;
}

bool Grammar::balanced(const Multiset& f) const {
  for (int v = 0; v < static_cast<int>(data_.vectors.size()); ++v) {
    const int n = static_cast<int>(data_.vectors[v].productions.size());
    for (int p = 1; p < n; ++p)
      if (f[offset_[v] + p] != f[offset_[v]]) return false;
  }
  return true;
}

const std::vector<ProdRef>& Grammar::productions_for(std::string_view lhs) const {
  static const std::vector<ProdRef> empty;
  auto it = by_lhs_.find(lhs);
  return it == by_lhs_.end() ? empty : it->second;
}

std::string Grammar::describe(ProdRef p) const {
  return vector(p.vector).id + "/" + production(p).id;
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.code == code; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& f : findings) os << f.path << ": [" << f.code << "] " << f.message << '\n';
  return os.str();
}

namespace {

void sort_report(ValidationReport& r) {
  std::stable_sort(r.findings.begin(), r.findings.end(),
                   [](const Finding& a, const Finding& b) { return a.path < b.path; });
}

std::string prod_path(const Vector& v, const Production& p) {
  return "vectors/" + v.id + "/productions/" + p.id;
}

} // namespace

ValidationReport validate_uvgdl(const Grammar& g) {
  ValidationReport r;
  auto add = [&](std::string code, std::string msg, std::string path) {
    r.findings.push_back({std::move(code), std::move(msg), std::move(path)});
  };
  const GrammarData& d = g.data();

  std::set<std::string> seen;
  for (const auto& t : d.terminals)
    if (!seen.insert(t).second) add("duplicate-symbol", "terminal '" + t + "' declared twice", "terminals/" + t);
  std::set<std::string> nts;
  for (const auto& n : d.nonterminals) {
    if (!nts.insert(n).second) add("duplicate-symbol", "nonterminal '" + n + "' declared twice", "nonterminals/" + n);
    if (seen.count(n)) add("symbol-kind-overlap", "'" + n + "' is both terminal and nonterminal", "nonterminals/" + n);
  }
  if (!g.is_nonterminal(d.start)) add("start-invalid", "start symbol '" + d.start + "' is not a declared nonterminal", "start");

  std::set<std::string> vids;
  for (const auto& vec : d.vectors) {
    const std::string vpath = "vectors/" + vec.id;
    if (!vids.insert(vec.id).second) add("duplicate-vector-id", "vector id '" + vec.id + "' repeated", vpath);
    if (vec.productions.empty()) {
      add("empty-vector", "vector has no productions", vpath);
      continue;
    }
    int syncs = 0;
    bool lexical = false;
    std::set<std::string> pids;
    for (const auto& p : vec.productions) {
      if (!pids.insert(p.id).second) add("duplicate-production-id", "production id '" + p.id + "' repeated", prod_path(vec, p));
    }
    for (const auto& p : vec.productions) {
      const std::string ppath = prod_path(vec, p);
      if (p.role == Role::synchronous) ++syncs;
      if (!g.is_nonterminal(p.lhs)) add("lhs-not-nonterminal", "lhs '" + p.lhs + "' is not a declared nonterminal", ppath + "/lhs");
      bool has_nt = false;
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        const auto& s = p.rhs[i];
        if (g.is_terminal(s)) lexical = true;
        else if (g.is_nonterminal(s)) has_nt = true;
        else add("undeclared-symbol", "rhs symbol '" + s + "' is not declared", ppath + "/rhs/" + std::to_string(i));
      }
      auto nt_at = [&](int i) {
        return i >= 0 && i < static_cast<int>(p.rhs.size()) && g.is_nonterminal(p.rhs[i]);
      };
      if (p.role == Role::synchronous && p.heir)
        add("heir-unexpected", "synchronous production carries a heir", ppath + "/heir");
      if (p.role == Role::asynchronous) {
        if (has_nt && !p.heir) add("heir-missing", "asynchronous production with rhs nonterminals has no heir", ppath + "/heir");
        if (!has_nt && p.heir) add("heir-unexpected", "production without rhs nonterminals carries a heir", ppath + "/heir");
        if (has_nt && p.heir && !nt_at(*p.heir))
          add("heir-not-nonterminal", "heir index does not address a nonterminal", ppath + "/heir");
      }
      for (std::size_t k = 0; k < p.dominance.size(); ++k) {
        const auto& dl = p.dominance[k];
        const std::string dpath = ppath + "/dominance/" + std::to_string(k);
        if (!nt_at(dl.occurrence)) add("dominance-occ-invalid", "dominance occurrence does not address a nonterminal", dpath);
        auto it = std::find_if(vec.productions.begin(), vec.productions.end(),
                               [&](const Production& q) { return q.id == dl.target; });
        if (it == vec.productions.end())
          add("dominance-target-unknown", "dominance target '" + dl.target + "' not in vector", dpath);
        else if (it->id == p.id)
          add("dominance-self-link", "dominance link targets its own carrier", dpath);
      }
    }
    if (syncs == 0) add("sync-missing", "vector has no synchronous production", vpath);
    if (syncs > 1) add("sync-not-unique", "synchronous production not unique", vpath);
    if (!lexical) add("vector-not-lexicalized", "vector not lexicalized", vpath);
  }
  sort_report(r);
  return r;
}

Cfg underlying_cfg(const Grammar& g) {
  Cfg cfg;
  cfg.start = g.start();
  for (int i = 0; i < g.production_count(); ++i) {
    const ProdRef pr = g.unflat(i);
    const Production& p = g.production(pr);
    cfg.productions.push_back({p.lhs, p.rhs, pr});
  }
  return cfg;
}

// ---------------------------------------------------------------------------

std::vector<Occurrence> non_heir_occurrences(const Grammar& g, int vector) {
  std::vector<Occurrence> out;
  const auto& prods = g.vector(vector).productions;
  for (int p = 0; p < static_cast<int>(prods.size()); ++p) {
    const Production& prod = prods[p];
    for (int i = 0; i < static_cast<int>(prod.rhs.size()); ++i) {
      if (!g.is_nonterminal(prod.rhs[i])) continue;
      if (prod.role == Role::asynchronous && prod.heir && *prod.heir == i) continue;
      out.push_back({p, i});
    }
  }
  return out;
}

SynchGrammar::SynchGrammar(Grammar left, Grammar right, std::vector<VectorPair> pairs)
    : left_(std::move(left)), right_(std::move(right)), pairs_(std::move(pairs)) {
  left_pair_.assign(left_.vectors().size(), -1);
  right_pair_.assign(right_.vectors().size(), -1);
  for (int k = 0; k < static_cast<int>(pairs_.size()); ++k) {
    const auto& pr = pairs_[k];
    const int lv = left_.vector_index(pr.left_vector).value_or(-1);
    const int rv = right_.vector_index(pr.right_vector).value_or(-1);
    pair_vectors_.emplace_back(lv, rv);
    if (lv >= 0 && left_pair_[lv] < 0) left_pair_[lv] = k;
    if (rv >= 0 && right_pair_[rv] < 0) right_pair_[rv] = k;
    std::map<Occurrence, Occurrence> l2r, r2l;
    if (lv >= 0 && rv >= 0) {
      for (const auto& link : pr.links) {
        auto lp = left_.production_index(lv, link.left.production);
        auto rp = right_.production_index(rv, link.right.production);
        if (!lp || !rp) continue;
        Occurrence lo{*lp, link.left.position}, ro{*rp, link.right.position};
        l2r.emplace(lo, ro);
        r2l.emplace(ro, lo);
      }
    }
    left_to_right_.push_back(std::move(l2r));
    right_to_left_.push_back(std::move(r2l));
  }
}

std::optional<int> SynchGrammar::pair_of(Side s, int vector) const {
  const auto& table = s == Side::left ? left_pair_ : right_pair_;
  if (vector < 0 || vector >= static_cast<int>(table.size()) || table[vector] < 0) return std::nullopt;
  return table[vector];
}

int SynchGrammar::vector_of(int pair, Side s) const {
  return s == Side::left ? pair_vectors_.at(pair).first : pair_vectors_.at(pair).second;
}

std::optional<Occurrence> SynchGrammar::counterpart(int pair, Side s, Occurrence occ) const {
  const auto& table = s == Side::left ? left_to_right_.at(pair) : right_to_left_.at(pair);
  auto it = table.find(occ);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

ValidationReport validate_synch(const SynchGrammar& gs) {
  ValidationReport r;
  auto add = [&](std::string code, std::string msg, std::string path) {
    r.findings.push_back({std::move(code), std::move(msg), std::move(path)});
  };
  const Grammar& L = gs.left();
  const Grammar& R = gs.right();
  std::vector<int> left_uses(L.vectors().size(), 0), right_uses(R.vectors().size(), 0);

  for (int k = 0; k < static_cast<int>(gs.pairs().size()); ++k) {
    const VectorPair& pr = gs.pairs()[k];
    const std::string ppath = "pairs/" + pr.left_vector + "~" + pr.right_vector;
    auto lv = L.vector_index(pr.left_vector);
    auto rv = R.vector_index(pr.right_vector);
    if (!lv) add("pair-unknown-vector", "left vector '" + pr.left_vector + "' not in left grammar", ppath);
    if (!rv) add("pair-unknown-vector", "right vector '" + pr.right_vector + "' not in right grammar", ppath);
    if (lv) ++left_uses[*lv];
    if (rv) ++right_uses[*rv];
    if (!lv || !rv) continue;

    std::set<Occurrence> lhs_need, rhs_need;
    for (auto o : non_heir_occurrences(L, *lv)) lhs_need.insert(o);
    for (auto o : non_heir_occurrences(R, *rv)) rhs_need.insert(o);
    std::set<Occurrence> lhs_seen, rhs_seen;
    for (std::size_t i = 0; i < pr.links.size(); ++i) {
      const auto& link = pr.links[i];
      const std::string lpath = ppath + "/links/" + std::to_string(i);
      auto lp = L.production_index(*lv, link.left.production);
      auto rp = R.production_index(*rv, link.right.production);
      if (!lp || !rp) {
        add("link-invalid-occurrence", "link names an unknown production", lpath);
        continue;
      }
      Occurrence lo{*lp, link.left.position}, ro{*rp, link.right.position};
      if (!lhs_need.count(lo)) add("link-invalid-occurrence", "left end is not a non-heir nonterminal occurrence", lpath);
      if (!rhs_need.count(ro)) add("link-invalid-occurrence", "right end is not a non-heir nonterminal occurrence", lpath);
      if (!lhs_seen.insert(lo).second || !rhs_seen.insert(ro).second)
        add("mapping-not-injective", "mapping not injective", lpath);
    }
    for (auto o : lhs_need)
      if (!lhs_seen.count(o)) {
        add("mapping-not-total-left", "mapping not total on left occurrences", ppath);
        break;
      }
    for (auto o : rhs_need)
      if (!rhs_seen.count(o)) {
        add("mapping-not-total-right", "mapping not total on right occurrences", ppath);
        break;
      }
  }
  auto check_uses = [&](const Grammar& g, const std::vector<int>& uses, const char* side) {
    for (std::size_t v = 0; v < uses.size(); ++v) {
      const std::string vpath = std::string(side) + "/vectors/" + g.vector(static_cast<int>(v)).id;
      if (uses[v] == 0) add("vector-unpaired", "vector appears in no pair", vpath);
      if (uses[v] > 1) add("vector-multiply-paired", "vector appears in more than one pair", vpath);
    }
  };
  check_uses(L, left_uses, "left");
  check_uses(R, right_uses, "right");
  sort_report(r);
  return r;
}

} // namespace suvg
