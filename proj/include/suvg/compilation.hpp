// Compiling a SynchUVG-DL into one UVG-DL over compound nonterminals whose
// language is the left projection of the synchronous language.

#ifndef SUVG_COMPILATION_HPP
#define SUVG_COMPILATION_HPP

#include "suvg/synchronization.hpp"

namespace suvg {

// "L⟨A|B⟩", with "_" for a missing component.
std::string compound_name(const std::string& left, const std::string& right);

struct ProductionOrigin {
  int pair = -1;
  Side side = Side::left;
  int production = -1;  // index inside that side's vector
  bool fused = false;   // the two synchronous productions
};

struct CompileReport {
  std::size_t variants = 0;  // compiled vectors
  std::vector<std::string> notes;
};

struct Compilation {
  Grammar grammar;
  CompileReport report;
  std::vector<ProductionOrigin> origins;  // indexed by flat production index of `grammar`
};

// Throws ResourceError when the vector variants exceed limits.max_variants.
Compilation compile_left_projection(const SynchGrammar& gs, const Limits& limits = {});

struct SampleBound {
  std::optional<std::uint32_t> max_vectors;
  std::optional<std::uint32_t> max_length;  // tokens

  static SampleBound vectors(std::uint32_t q) { return {q, std::nullopt}; }
  static SampleBound length(std::uint32_t l) { return {std::nullopt, l}; }
};

// Sorted, deduplicated yields (tokens joined by spaces).  A length bound
// needs a lexicalized grammar: every instance then spends a terminal.
std::vector<std::string> language_sample(const Grammar& g, const SampleBound& bound, const Limits& limits = {});

// Left yields of synchronized pairs within the bound, sorted and deduplicated.
std::vector<std::string> left_projection_sample(const SynchGrammar& gs, const SampleBound& bound,
                                                const Limits& limits = {});

// The left tree a compiled tree simulates: right-side unit steps are
// contracted and compiled productions mapped back.
ParseTree project_compiled_tree(const SynchGrammar& gs, const Compilation& c, const ParseTree& t);

} // namespace suvg

#endif
