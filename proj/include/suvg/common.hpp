// Shared error types and resource caps.

#ifndef SUVG_COMMON_HPP
#define SUVG_COMMON_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace suvg {

// Document does not conform to the grammar/tree file schema.  `path` names
// the offending location, e.g. "vectors[1].productions[0].lhs".
class SchemaError : public std::runtime_error {
public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

// A configured cap (trees, search nodes, table entries) was exceeded.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Grammar lies outside the dominance-link shape the forest builder handles.
class UnsupportedGrammar : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Tree does not match the rhs of the production it claims (structural defect).
class MalformedTree : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An operation was called on inputs violating its precondition.
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A synchronous derivation step that is not permitted in the current state.
class StepError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  std::size_t max_trees = 100000;
  std::size_t search_budget = 10000000;
  std::size_t max_table = 1000000;
  std::size_t max_variants = 100000;

  // Defaults overridden by SUVG_MAX_TREES, SUVG_MAX_TABLE, SUVG_SEARCH_BUDGET.
  static Limits from_env();
};

} // namespace suvg

#endif
