// Ordered bipartite and/or parse forests over a UVG-DL, and the bounded
// construction of the forest of all parse trees with at most q vector
// instances.

#ifndef SUVG_FOREST_HPP
#define SUVG_FOREST_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "suvg/derivation.hpp"

namespace suvg {

using BigCount = boost::multiprecision::cpp_int;

struct OrNode {
  std::string nonterminal;
  Multiset f;
  std::string tag;            // optional refinement label (translation forests)
  std::vector<int> choices;   // and-node ids
};

struct AndNode {
  ProdRef production;
  Multiset f;
  std::vector<int> children;  // or-node ids, one per rhs nonterminal occurrence
};

struct ParseForest {
  Grammar grammar;
  std::vector<OrNode> or_nodes;
  std::vector<AndNode> and_nodes;
  std::vector<int> roots;

  std::size_t node_count() const noexcept { return or_nodes.size() + and_nodes.size(); }
  std::size_t arc_count() const;
  bool empty() const noexcept { return roots.empty(); }
};

// Throws UnsupportedGrammar unless, in every vector, the dominance links form
// a forest when read as undirected edges between productions.
void require_supported_dominance(const Grammar& g);

ParseForest build_forest_q(const Grammar& g, std::uint32_t q, const Limits& limits = {});

// Drops nodes not reachable from the roots and or-nodes left without choices;
// renumbers and sorts choices canonically.
ParseForest prune(ParseForest pi);

struct TreeList {
  std::vector<ParseTree> trees;
  bool truncated = false;
};

// Trees in canonical order, at most `limit`; each carries a witness instance
// grouping and multiset annotations.
TreeList enumerate_trees(const ParseForest& pi, std::size_t limit, const Limits& limits = {});

BigCount count_trees(const ParseForest& pi);

bool contains_tree(const ParseForest& pi, const ParseTree& t);

// Structural audit: bipartite arcs, rhs correspondence, acyclicity, no dead
// choices.  Returns a description of the first defect found.
std::optional<std::string> audit_forest(const ParseForest& pi);

json forest_to_json(const ParseForest& pi);
std::string forest_to_dot(const ParseForest& pi);

} // namespace suvg

#endif
