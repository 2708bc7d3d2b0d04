// Unordered vector grammars with dominance links, and their synchronous
// pairing.  Grammar values are immutable once constructed; the index tables
// are built once in the constructor.

#ifndef SUVG_GRAMMAR_HPP
#define SUVG_GRAMMAR_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "suvg/common.hpp"

namespace suvg {

using json = nlohmann::json;

enum class SymbolKind { terminal, nonterminal };
enum class Role { synchronous, asynchronous };

struct DominanceLink {
  int occurrence = 0;      // rhs position of the linked nonterminal
  std::string target;      // production id within the same vector
  bool operator==(const DominanceLink&) const = default;
};

struct Production {
  std::string id;
  std::string lhs;
  std::vector<std::string> rhs;
  Role role = Role::asynchronous;
  std::optional<int> heir;
  std::vector<DominanceLink> dominance;
  bool operator==(const Production&) const = default;
};

struct Vector {
  std::string id;
  std::string lexeme;
  std::vector<Production> productions;
  bool operator==(const Vector&) const = default;
};

struct GrammarData {
  std::string name;
  std::vector<std::string> terminals;
  std::vector<std::string> nonterminals;
  std::string start;
  std::vector<Vector> vectors;
  bool operator==(const GrammarData&) const = default;
};

// (vector index, production index) inside one grammar.
struct ProdRef {
  int vector = -1;
  int production = -1;
  auto operator<=>(const ProdRef&) const = default;
};

// Dense production-count vector indexed by Grammar::flat().
using Multiset = std::vector<std::uint32_t>;

class Grammar {
public:
  Grammar() = default;
  explicit Grammar(GrammarData data);

  const GrammarData& data() const noexcept { return data_; }
  const std::string& name() const noexcept { return data_.name; }
  const std::string& start() const noexcept { return data_.start; }
  const std::vector<Vector>& vectors() const noexcept { return data_.vectors; }
  const Vector& vector(int v) const { return data_.vectors.at(v); }
  const Production& production(ProdRef p) const {
    return data_.vectors.at(p.vector).productions.at(p.production);
  }

  bool is_terminal(std::string_view s) const;
  bool is_nonterminal(std::string_view s) const;

  std::optional<int> vector_index(std::string_view id) const;
  std::optional<int> production_index(int vector, std::string_view id) const;
  std::optional<ProdRef> find(std::string_view vector_id, std::string_view prod_id) const;

  // Number of productions summed over all vectors; also the Multiset width.
  int production_count() const noexcept { return static_cast<int>(flat_.size()); }
  int flat(ProdRef p) const { return offset_.at(p.vector) + p.production; }
  ProdRef unflat(int i) const { return flat_.at(i); }
  // Position of a production in (vector id, production id) string order.
  int rank(int flat_index) const { return rank_.at(flat_index); }

  // Index of the (first) synchronous production of a vector, if any.
  std::optional<int> sync_production(int vector) const;
  // Vector instances implied by a multiset: max count over the vector's
  // productions (equal counts when the multiset is balanced).
  std::uint32_t vector_count(const Multiset& f, int vector) const;
  std::uint32_t instance_count(const Multiset& f) const;
  bool balanced(const Multiset& f) const;

  // Productions with the given lhs.
  const std::vector<ProdRef>& productions_for(std::string_view lhs) const;

  std::string describe(ProdRef p) const;  // "vector/production"

  bool operator==(const Grammar& o) const { return data_ == o.data_; }

private:
  GrammarData data_;
  std::map<std::string, SymbolKind, std::less<>> kinds_;
  std::map<std::string, int, std::less<>> vector_ids_;
  std::vector<std::map<std::string, int, std::less<>>> production_ids_;
  std::vector<int> offset_;
  std::vector<ProdRef> flat_;
  std::vector<int> rank_;
  std::map<std::string, std::vector<ProdRef>, std::less<>> by_lhs_;
};

struct Finding {
  std::string code;
  std::string message;
  std::string path;
  bool operator==(const Finding&) const = default;
};

// Findings sorted by path.
struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const noexcept { return findings.empty(); }
  bool has(std::string_view code) const;
  std::string to_string() const;
};

ValidationReport validate_uvgdl(const Grammar& g);

struct CfgProduction {
  std::string lhs;
  std::vector<std::string> rhs;
  ProdRef origin;
};

struct Cfg {
  std::string start;
  std::vector<CfgProduction> productions;
};

// Union of all vectors' productions with grouping, heirs and links erased.
Cfg underlying_cfg(const Grammar& g);

// ---------------------------------------------------------------------------
// Synchronous grammars

struct OccurrenceRef {
  std::string production;
  int position = 0;
  bool operator==(const OccurrenceRef&) const = default;
};

struct SyncLink {
  OccurrenceRef left;
  OccurrenceRef right;
  bool operator==(const SyncLink&) const = default;
};

struct VectorPair {
  std::string left_vector;
  std::string right_vector;
  std::vector<SyncLink> links;
  bool operator==(const VectorPair&) const = default;
};

// Occurrence inside a known vector: production index and rhs position.
struct Occurrence {
  int production = -1;
  int position = -1;
  auto operator<=>(const Occurrence&) const = default;
};

enum class Side { left, right };
inline Side other(Side s) { return s == Side::left ? Side::right : Side::left; }
inline const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

class SynchGrammar {
public:
  SynchGrammar() = default;
  SynchGrammar(Grammar left, Grammar right, std::vector<VectorPair> pairs);

  const Grammar& left() const noexcept { return left_; }
  const Grammar& right() const noexcept { return right_; }
  const Grammar& side(Side s) const noexcept { return s == Side::left ? left_ : right_; }
  const std::vector<VectorPair>& pairs() const noexcept { return pairs_; }

  // Pair index owning a vector of the given side.
  std::optional<int> pair_of(Side s, int vector) const;
  int vector_of(int pair, Side s) const;
  // Counterpart occurrence of a linked non-heir occurrence.
  std::optional<Occurrence> counterpart(int pair, Side s, Occurrence occ) const;

  bool operator==(const SynchGrammar& o) const {
    return left_ == o.left_ && right_ == o.right_ && pairs_ == o.pairs_;
  }

private:
  Grammar left_, right_;
  std::vector<VectorPair> pairs_;
  std::vector<int> left_pair_, right_pair_;
  std::vector<std::pair<int, int>> pair_vectors_;
  std::vector<std::map<Occurrence, Occurrence>> left_to_right_, right_to_left_;
};

// Non-heir nonterminal rhs occurrences of a vector, in (production, position) order.
std::vector<Occurrence> non_heir_occurrences(const Grammar& g, int vector);

ValidationReport validate_synch(const SynchGrammar& gs);

// ---------------------------------------------------------------------------
// Documents

Grammar load_grammar(const json& doc);
SynchGrammar load_synch(const json& doc);
std::variant<Grammar, SynchGrammar> load_document(const json& doc);
json dump_grammar(const Grammar& g);
json dump_synch(const SynchGrammar& gs);

json read_json_file(const std::string& path);

} // namespace suvg

#endif
