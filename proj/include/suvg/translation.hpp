// Parse-to-forest translation: from a left parse tree to a forest of every
// right parse tree synchronous with it.

#ifndef SUVG_TRANSLATION_HPP
#define SUVG_TRANSLATION_HPP

#include "suvg/forest.hpp"
#include "suvg/synchronization.hpp"

namespace suvg {

struct Stage1 {
  VectorDerivationTree gamma;
  InstanceAssignment left_instances;
  std::uint32_t q = 0;
  ParseForest pi_q;
};

Stage1 stage1(const SynchGrammar& gs, const ParseTree& tau, const Limits& limits = {});

// Families per or-node of pi_q: each one the set of roots (vector derivation
// tree nodes) of the forest induced by the synchronous productions of a
// subderivation packed at that node.
struct FamilyAnnotation {
  std::vector<std::vector<std::vector<int>>> families;
  std::vector<int> blocked;  // or-nodes of pi_q with no consistent subderivation
  std::size_t max_families = 0;
};

struct Stage2 {
  ParseForest forest;
  FamilyAnnotation annotation;
};

// Throws std::logic_error if some or-node gathers more families than gamma
// has nodes.
Stage2 stage2(const ParseForest& pi_q, const VectorDerivationTree& gamma, const SynchGrammar& gs,
              const Limits& limits = {});

ParseForest parse_to_forest(const SynchGrammar& gs, const ParseTree& tau, const Limits& limits = {},
                            FamilyAnnotation* annotation = nullptr);

// Every right tree with at most q vector instances accepted together with tau.
std::vector<ParseTree> brute_force_translate(const SynchGrammar& gs, const ParseTree& tau, std::uint32_t q,
                                             const Limits& limits = {});

} // namespace suvg

#endif
