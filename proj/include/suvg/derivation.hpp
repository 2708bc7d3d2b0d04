// Parse trees of a single UVG-DL: checking vector completeness and dominance
// links, and a brute-force enumerator used as an oracle by the rest of the
// library.

#ifndef SUVG_DERIVATION_HPP
#define SUVG_DERIVATION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "suvg/grammar.hpp"

namespace suvg {

struct ParseTree {
  std::optional<std::string> terminal;  // set on leaves only
  ProdRef production;
  int instance = -1;
  std::vector<ParseTree> children;      // one per rhs symbol, in order
  std::optional<Multiset> multiset;

  bool is_leaf() const noexcept { return terminal.has_value(); }
  static ParseTree leaf(std::string t) {
    ParseTree n;
    n.terminal = std::move(t);
    return n;
  }
};

// Structural equality: productions and leaves only (instances, multisets ignored).
bool same_structure(const ParseTree& a, const ParseTree& b);

// Preorder sequence of production ranks; trees compare lexicographically on it.
std::vector<int> preorder_key(const Grammar& g, const ParseTree& t);
bool canonical_less(const Grammar& g, const ParseTree& a, const ParseTree& b);
void sort_canonical(const Grammar& g, std::vector<ParseTree>& trees);

std::vector<std::string> yield(const ParseTree& t);
std::string yield_string(const ParseTree& t);

int internal_node_count(const ParseTree& t);

// Instance identifier of every internal node, indexed by preorder position
// among internal nodes.  Ids are numbered by first appearance in preorder.
struct InstanceAssignment {
  std::vector<int> instance;
  int instances = 0;
  bool operator==(const InstanceAssignment&) const = default;
};

// Copy of the tree with instance tags taken from the assignment.
ParseTree apply_instances(const ParseTree& t, const InstanceAssignment& a);

struct Verdict {
  enum class Status { accepted, rejected, malformed };
  Status status = Status::rejected;
  std::string code;     // "cfg-invalid", "vector-count", "dominance", "hall", ...
  std::string message;
  std::optional<InstanceAssignment> witness;

  bool accepted() const noexcept { return status == Status::accepted; }
  static Verdict accept(InstanceAssignment w) {
    return {Status::accepted, "", "", std::move(w)};
  }
  static Verdict reject(std::string code, std::string msg) {
    return {Status::rejected, std::move(code), std::move(msg), std::nullopt};
  }
  static Verdict malformed(std::string msg) {
    return {Status::malformed, "malformed", std::move(msg), std::nullopt};
  }
};

// Structural check against the rhs of every node's production.  Returns an
// error message when the tree is malformed.
std::optional<std::string> structural_defect(const Grammar& g, const ParseTree& t);

ParseTree annotate_multisets(const Grammar& g, ParseTree t);

Verdict check_parse_tree(const Grammar& g, const ParseTree& t, const Limits& limits = {});

// Every instance grouping under which all dominance links hold.  The callback
// returns false to stop early.  Throws ResourceError when the search budget
// is exhausted.
void for_each_instance_assignment(const Grammar& g, const ParseTree& t,
                                  const std::function<bool(const InstanceAssignment&)>& visit,
                                  const Limits& limits = {});

// Per-link necessary condition for dominance satisfiability.
Verdict hall_filter(const Grammar& g, const ParseTree& t);

struct DerivationBound {
  std::optional<std::uint32_t> max_vectors;
  std::optional<std::vector<std::string>> target;
  std::uint32_t instances_per_terminal = 1;  // K: instance cap is |w|*K

  static DerivationBound vectors(std::uint32_t q) { return {q, std::nullopt, 1}; }
  static DerivationBound string(std::vector<std::string> w) { return {std::nullopt, std::move(w), 1}; }
};

// All accepted parse trees within the bound, in canonical order, with
// instance tags and multisets filled in.
std::vector<ParseTree> enumerate_derivations(const Grammar& g, const DerivationBound& bound,
                                             const Limits& limits = {});

// Space-separated tokens.
std::vector<std::string> tokenize(const std::string& s);

json tree_to_json(const Grammar& g, const ParseTree& t);
ParseTree tree_from_json(const Grammar& g, const json& j);
json multiset_to_json(const Grammar& g, const Multiset& f);
std::string tree_to_dot(const Grammar& g, const ParseTree& t);
std::string tree_to_string(const Grammar& g, const ParseTree& t);

} // namespace suvg

#endif
