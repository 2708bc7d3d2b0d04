#ifndef SUVG_TEST_SUPPORT_HPP
#define SUVG_TEST_SUPPORT_HPP

#include "doctest.h"
#include "suvg/compilation.hpp"
#include "suvg/fixtures.hpp"
#include "suvg/translation.hpp"

namespace testing {

using namespace suvg;

inline json fixture_json(const std::string& name) { return read_json_file(fixture_path(name)); }
inline Grammar fixture_grammar(const std::string& name) { return load_grammar(fixture_json(name)); }
inline SynchGrammar fixture_synch(const std::string& name) { return load_synch(fixture_json(name)); }

// The single parse of a space-separated string.
inline ParseTree parse_one(const Grammar& g, const std::string& w) {
  auto trees = enumerate_derivations(g, DerivationBound::string(tokenize(w)));
  REQUIRE_MESSAGE(trees.size() == 1, "\"" << w << "\" has " << trees.size() << " parses");
  return trees.front();
}

inline std::vector<std::string> keys(const Grammar& g, const std::vector<ParseTree>& trees) {
  std::vector<std::string> out;
  for (const auto& t : trees) out.push_back(tree_to_string(g, t));
  std::sort(out.begin(), out.end());
  return out;
}

inline const std::vector<std::string>& synch_fixtures() {
  static const std::vector<std::string> names = {"Gs_single.json", "Gs_ab.json", "Gs_ab_extra.json",
                                                 "quantifier_scope.json"};
  return names;
}

inline const std::vector<std::string>& plain_fixtures() {
  static const std::vector<std::string> names = {"G_ab.json", "G_dom.json", "G_catalan.json"};
  return names;
}

} // namespace testing

#endif
