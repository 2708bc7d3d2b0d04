// Shipped fixture grammars, a generator for quantifier-scope grammars of any
// size, and the reading equivalence on quantifier prefixes.

#ifndef SUVG_FIXTURES_HPP
#define SUVG_FIXTURES_HPP

#include <map>

#include "suvg/grammar.hpp"
#include "suvg/derivation.hpp"

namespace suvg {

// Directory of the shipped fixtures; SUVG_FIXTURES overrides the build-time default.
std::string fixture_dir();
std::string fixture_path(const std::string& name);

// "every n1 thinks some n2 thinks ... some nk arrived" with k noun phrases:
// syntax on the left, scoped logical forms on the right.
SynchGrammar make_quantifier_family(int k);
std::string quantifier_family_sentence(int k);
json quantifier_family_kinds(int k);

// Quantifier kinds per right vector plus the id of the quantifier production.
struct ReadingEquivalence {
  std::map<std::string, std::string> kinds;
  std::string production;

  static ReadingEquivalence from_json(const json& j);
};

// Quantifier prefix of a right tree (vector ids in scope order) with runs of
// the same kind sorted, so that equivalent scopings share one key.
std::vector<std::string> reading_key(const Grammar& right, const ParseTree& t, const ReadingEquivalence& eq);
std::size_t count_readings(const Grammar& right, const std::vector<ParseTree>& trees, const ReadingEquivalence& eq);

} // namespace suvg

#endif
