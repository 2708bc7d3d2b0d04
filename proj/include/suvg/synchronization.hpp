// Synchronous derivations over a SynchUVG-DL: paired derivation state with
// live and pending links, the step relation, checking a pair of parse trees
// for synchrony, and vector derivation trees.

#ifndef SUVG_SYNCHRONIZATION_HPP
#define SUVG_SYNCHRONIZATION_HPP

#include <variant>

#include "suvg/derivation.hpp"

namespace suvg {

// A node of either sentential form.  Terminal items have no handle.
struct FormItem {
  std::optional<std::string> terminal;
  int handle = -1;
};

struct Handle {
  Side side = Side::left;
  std::string symbol;
  int parent = -1;                // handle rewritten to produce this one
  int position = -1;              // rhs position inside the parent
  std::optional<ProdRef> production;  // set once rewritten
  int instance = -1;
  std::vector<FormItem> children;
  std::vector<int> links;         // link ids whose end sits here (unconsumed)
};

// A link end on each side; live when both ends are set, pending when one is.
struct Link {
  int instance = -1;    // pair instance whose productions introduce it; -1 for the start link
  int index = -1;       // position in the pair's link list
  std::optional<int> left, right;
  bool consumed = false;

  bool live() const noexcept { return !consumed && left && right; }
  bool pending() const noexcept { return !consumed && (left.has_value() != right.has_value()); }
};

struct PairInstance {
  int pair = -1;
  std::vector<char> used_left, used_right;  // per production of the paired vectors
  std::vector<int> link_ids;                // per entry of the pair's link list, -1 until introduced
  int consumed_link = -1;                   // link rewritten by the synchronous productions

  bool complete() const;
};

struct SyncDerivationState {
  std::vector<Handle> handles;
  std::vector<Link> links;
  std::vector<PairInstance> instances;
  int left_root = -1, right_root = -1;

  std::vector<FormItem> form(Side s) const;
  std::size_t live_count() const;
  std::size_t pending_count() const;
  bool finished() const;  // no live or pending links, every instance complete, no open handle
};

struct SyncApply {
  int pair = -1;
  int instance = -1;  // existing id, or instances.size() for a fresh instance
  int left_handle = -1;
  int right_handle = -1;
};

struct AsyncApply {
  Side side = Side::left;
  std::string vector;
  int instance = -1;
  std::string production;
  int handle = -1;
};

using Action = std::variant<SyncApply, AsyncApply>;

SyncDerivationState initial_state(const SynchGrammar& gs);

// Throws StepError when the action is not permitted.
SyncDerivationState step(const SynchGrammar& gs, const SyncDerivationState& s, const Action& a);

// Each live link joins distinct handles and no handle holds two live links.
std::optional<std::string> audit_links(const SyncDerivationState& s);

// The tree built so far on one side; throws PreconditionError if a handle is
// still open.
ParseTree derived_tree(const SynchGrammar& gs, const SyncDerivationState& s, Side side);

struct SyncVerdict {
  bool accepted = false;
  std::string code;
  std::string message;
  std::vector<Action> steps;
  std::optional<InstanceAssignment> left_instances, right_instances;
};

// `seed` selects the order in which ready steps are replayed; 0 means the
// fixed leftmost order.
SyncVerdict check_sync_derivation(const SynchGrammar& gs, const ParseTree& left, const ParseTree& right,
                                  std::uint64_t seed = 0, const Limits& limits = {});

struct VdtNode {
  std::string lexeme;
  std::string vector;
  int pair = -1;
  int instance = -1;
  int link = -1;  // entry of the parent's pair link list rewritten by this instance
  std::vector<int> children;
};

struct VectorDerivationTree {
  std::vector<VdtNode> nodes;  // indexed by instance id
  int root = -1;
  std::size_t size() const noexcept { return nodes.size(); }
};

// Uses the witness grouping of check_parse_tree unless one is supplied.
VectorDerivationTree vector_derivation_tree(const SynchGrammar& gs, Side side, const ParseTree& t,
                                            const std::optional<InstanceAssignment>& instances = std::nullopt,
                                            const Limits& limits = {});

// Unordered isomorphism respecting the vector-pair labels.
bool vdt_isomorphic(const VectorDerivationTree& a, const VectorDerivationTree& b);

json action_to_json(const SynchGrammar& gs, const Action& a);
json steps_to_json(const SynchGrammar& gs, const std::vector<Action>& steps);
json vdt_to_json(const VectorDerivationTree& g);
std::string vdt_to_dot(const VectorDerivationTree& g);

} // namespace suvg

#endif
