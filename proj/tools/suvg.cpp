// suvg: command-line front end.
//
// Exit codes: 0 success, 1 rejection or empty result, 2 usage/I/O/schema,
// 3 resource cap exceeded.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "suvg/compilation.hpp"
#include "suvg/fixtures.hpp"
#include "suvg/translation.hpp"

using namespace suvg;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string format;  // empty: text for validate, json elsewhere
  std::string output;
  std::string side = "left";
  std::string tree_path;
  std::size_t tree_index = 0;
  std::string string;
  std::string right_tree;
  std::string kinds;
  std::optional<std::uint32_t> q;
  std::optional<std::uint32_t> max_vectors;
  std::size_t limit = 1000;
  bool count = false;
  bool report = false;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_trees, max_table, search_budget;

  Limits limits() const {
    Limits l = Limits::from_env();
    if (max_trees) l.max_trees = *max_trees;
    if (max_table) l.max_table = *max_table;
    if (search_budget) l.search_budget = *search_budget;
    return l;
  }
};

json read_doc(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw IoError("cannot open '" + path + "'");
  return read_json_file(path);
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw IoError("cannot write '" + o.output + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw CLI::ValidationError("--side", "expected left or right");
}

SynchGrammar need_synch(const json& doc, const std::string& path) {
  auto d = load_document(doc);
  if (!std::holds_alternative<SynchGrammar>(d)) throw SchemaError("", "'" + path + "' is not a synchronous grammar");
  return std::get<SynchGrammar>(std::move(d));
}

// A plain grammar, or one side of a synchronous one.
Grammar need_grammar(const json& doc, const Options& o) {
  auto d = load_document(doc);
  if (auto* g = std::get_if<Grammar>(&d)) return *g;
  const auto& gs = std::get<SynchGrammar>(d);
  return gs.side(parse_side(o.side));
}

struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tree from --tree (a tree document or {"trees": [...]}) or the unique parse of --string.
ParseTree input_tree(const Grammar& g, const Options& o, const std::string& path, const Limits& limits) {
  if (!path.empty()) {
    json j = read_doc(path);
    if (j.is_object() && j.contains("trees")) {
      if (!j["trees"].is_array() || o.tree_index >= j["trees"].size())
        throw SchemaError("trees", "no tree at index " + std::to_string(o.tree_index));
      return tree_from_json(g, j["trees"][o.tree_index]);
    }
    return tree_from_json(g, j);
  }
  if (o.string.empty()) throw CLI::ValidationError("--tree", "give --tree or --string");
  auto trees = enumerate_derivations(g, DerivationBound::string(tokenize(o.string)), limits);
  if (trees.empty()) throw Rejected("no parse of \"" + o.string + "\"");
  if (trees.size() > 1)
    throw Rejected("\"" + o.string + "\" has " + std::to_string(trees.size()) + " parses; pick one with --tree");
  return trees.front();
}

json trees_doc(const Grammar& g, const std::vector<ParseTree>& trees) {
  json arr = json::array();
  for (const auto& t : trees) arr.push_back(tree_to_json(g, t));
  return {{"count", trees.size()}, {"trees", std::move(arr)}};
}

std::string render_trees(const Grammar& g, const std::vector<ParseTree>& trees, const std::string& format) {
  if (format == "json") return trees_doc(g, trees).dump(2);
  std::string out;
  for (const auto& t : trees) out += format == "dot" ? tree_to_dot(g, t) : tree_to_string(g, t) + "\n";
  return out;
}

std::string render_forest(const ParseForest& pi, const std::string& format) {
  return format == "dot" ? forest_to_dot(pi) : forest_to_json(pi).dump(2);
}

int verdict_exit(const Options& o, const Verdict& v) {
  json j = {{"verdict", v.status == Verdict::Status::malformed ? "malformed" : "rejected"},
            {"code", v.code}, {"message", v.message}};
  emit(o, j.dump(2));
  return 1;
}

int cmd_validate(const Options& o) {
  auto d = load_document(read_doc(o.input));
  ValidationReport r;
  if (auto* g = std::get_if<Grammar>(&d)) {
    r = validate_uvgdl(*g);
  } else {
    const auto& gs = std::get<SynchGrammar>(d);
    for (Side s : {Side::left, Side::right})
      for (auto f : validate_uvgdl(gs.side(s)).findings) {
        f.path = std::string(side_name(s)) + "/" + f.path;
        r.findings.push_back(std::move(f));
      }
    for (auto& f : validate_synch(gs).findings) r.findings.push_back(std::move(f));
  }
  if (o.format == "json") {
    json fs = json::array();
    for (const auto& f : r.findings) fs.push_back({{"code", f.code}, {"message", f.message}, {"path", f.path}});
    emit(o, json{{"ok", r.ok()}, {"findings", fs}}.dump(2));
  } else {
    emit(o, r.ok() ? "ok" : r.to_string());
  }
  return r.ok() ? 0 : 1;
}

int cmd_derive(const Options& o) {
  const Limits limits = o.limits();
  const Grammar g = need_grammar(read_doc(o.input), o);
  DerivationBound b;
  if (!o.string.empty()) b = DerivationBound::string(tokenize(o.string));
  else if (o.max_vectors) b = DerivationBound::vectors(*o.max_vectors);
  else throw CLI::ValidationError("derive", "give --string or --max-vectors");
  std::vector<ParseTree> trees;
  if (!b.max_vectors || *b.max_vectors > 0) trees = enumerate_derivations(g, b, limits);
  emit(o, render_trees(g, trees, o.format));
  return trees.empty() ? 1 : 0;
}

int cmd_translate(const Options& o) {
  const Limits limits = o.limits();
  const SynchGrammar gs = need_synch(read_doc(o.input), o.input);
  const ParseTree tau = input_tree(gs.left(), o, o.tree_path, limits);
  const Verdict v = check_parse_tree(gs.left(), tau, limits);
  if (!v.accepted()) return verdict_exit(o, v);
  FamilyAnnotation fa;
  const ParseForest pi = parse_to_forest(gs, tau, limits, &fa);
  if (!o.kinds.empty()) {
    const auto eq = ReadingEquivalence::from_json(read_doc(o.kinds));
    const auto trees = enumerate_trees(pi, limits.max_trees, limits).trees;
    emit(o, json{{"trees", trees.size()}, {"readings", count_readings(gs.right(), trees, eq)}}.dump(2));
  } else if (o.count) {
    emit(o, count_trees(pi).str());
  } else {
    emit(o, render_forest(pi, o.format));
  }
  return pi.empty() ? 1 : 0;
}

int cmd_vdt(const Options& o) {
  const Limits limits = o.limits();
  const SynchGrammar gs = need_synch(read_doc(o.input), o.input);
  const Side side = parse_side(o.side);
  const ParseTree t = input_tree(gs.side(side), o, o.tree_path, limits);
  const Verdict v = check_parse_tree(gs.side(side), t, limits);
  if (!v.accepted()) return verdict_exit(o, v);
  const auto g = vector_derivation_tree(gs, side, t, v.witness, limits);
  emit(o, o.format == "dot" ? vdt_to_dot(g) : vdt_to_json(g).dump(2));
  return 0;
}

int cmd_forest(const Options& o) {
  const Limits limits = o.limits();
  const Grammar g = need_grammar(read_doc(o.input), o);
  if (!o.q) throw CLI::ValidationError("--q", "required");
  const ParseForest pi = build_forest_q(g, *o.q, limits);
  emit(o, o.count ? count_trees(pi).str() : render_forest(pi, o.format));
  return pi.empty() ? 1 : 0;
}

int cmd_compile(const Options& o) {
  const Limits limits = o.limits();
  const SynchGrammar gs = need_synch(read_doc(o.input), o.input);
  const Compilation c = compile_left_projection(gs, limits);
  emit(o, dump_grammar(c.grammar).dump(2));
  if (o.report) {
    std::cerr << "variants: " << c.report.variants << "\n";
    for (const auto& n : c.report.notes) std::cerr << "note: " << n << "\n";
  }
  return 0;
}

int cmd_enumerate(const Options& o) {
  const Limits limits = o.limits();
  const json doc = read_doc(o.input);
  auto d = load_document(doc);
  ParseForest pi;
  if (auto* gs = std::get_if<SynchGrammar>(&d); gs && !o.q) {
    const ParseTree tau = input_tree(gs->left(), o, o.tree_path, limits);
    const Verdict v = check_parse_tree(gs->left(), tau, limits);
    if (!v.accepted()) return verdict_exit(o, v);
    pi = parse_to_forest(*gs, tau, limits);
  } else {
    if (!o.q) throw CLI::ValidationError("--q", "required for a plain grammar");
    pi = build_forest_q(need_grammar(doc, o), *o.q, limits);
  }
  const TreeList tl = enumerate_trees(pi, o.limit, limits);
  if (o.format == "json") {
    json j = trees_doc(pi.grammar, tl.trees);
    j["total"] = count_trees(pi).str();
    j["truncated"] = tl.truncated;
    emit(o, j.dump(2));
  } else {
    emit(o, render_trees(pi.grammar, tl.trees, o.format));
  }
  return tl.trees.empty() ? 1 : 0;
}

int cmd_check(const Options& o) {
  const Limits limits = o.limits();
  const SynchGrammar gs = need_synch(read_doc(o.input), o.input);
  const ParseTree l = input_tree(gs.left(), o, o.tree_path, limits);
  Options r = o;
  r.string.clear();
  const ParseTree rt = input_tree(gs.right(), r, o.right_tree, limits);
  const SyncVerdict v = check_sync_derivation(gs, l, rt, o.seed, limits);
  json j = {{"accepted", v.accepted}};
  if (v.accepted) j["steps"] = steps_to_json(gs, v.steps);
  else j["code"] = v.code, j["message"] = v.message;
  emit(o, j.dump(2));
  return v.accepted ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"UVG-DL and synchronous UVG-DL toolkit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("input", o.input, "grammar document")->required();
    c->add_option("-o,--output", o.output, "write to a file instead of stdout");
    c->add_option("--max-trees", o.max_trees, "cap on enumerated trees (SUVG_MAX_TREES)");
    c->add_option("--max-table", o.max_table, "cap on table entries (SUVG_MAX_TABLE)");
    c->add_option("--search-budget", o.search_budget, "cap on search steps (SUVG_SEARCH_BUDGET)");
  };
  auto fmt = [&](CLI::App* c, std::vector<std::string> allowed) {
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember(allowed));
  };
  auto tree_opts = [&](CLI::App* c) {
    c->add_option("--tree", o.tree_path, "tree document (or a {\"trees\": [...]} document)");
    c->add_option("--index", o.tree_index, "tree index inside a {\"trees\": [...]} document");
    c->add_option("--string", o.string, "space-separated tokens with a unique parse");
  };

  auto* validate = app.add_subcommand("validate", "check grammar invariants");
  common(validate);
  fmt(validate, {"text", "json"});

  auto* derive = app.add_subcommand("derive", "enumerate parse trees");
  common(derive);
  derive->add_option("--string", o.string, "target string, space-separated tokens");
  derive->add_option("--max-vectors", o.max_vectors, "bound on vector instances");
  derive->add_option("--side", o.side, "side of a synchronous grammar");
  fmt(derive, {"json", "dot", "text"});

  auto* translate = app.add_subcommand("translate", "forest of right trees synchronous with a left tree");
  common(translate);
  tree_opts(translate);
  translate->add_flag("--count", o.count, "print the number of trees only");
  translate->add_option("--readings", o.kinds, "quantifier-kind document; print trees and distinct readings");
  fmt(translate, {"json", "dot"});

  auto* vdt = app.add_subcommand("vdt", "vector derivation tree of a parse tree");
  common(vdt);
  tree_opts(vdt);
  vdt->add_option("--side", o.side, "side the tree belongs to");
  fmt(vdt, {"json", "dot"});

  auto* forest = app.add_subcommand("forest", "forest of all trees with at most q vector instances");
  common(forest);
  forest->add_option("--q", o.q, "bound on vector instances")->required();
  forest->add_option("--side", o.side, "side of a synchronous grammar");
  forest->add_flag("--count", o.count, "print the number of trees only");
  fmt(forest, {"json", "dot"});

  auto* compile = app.add_subcommand("compile", "compile the left projection into one grammar");
  common(compile);
  compile->add_flag("--report", o.report, "print variant count and notes on stderr");

  auto* enumerate = app.add_subcommand("enumerate", "trees of a forest in canonical order");
  common(enumerate);
  tree_opts(enumerate);
  enumerate->add_option("--q", o.q, "bound on vector instances (plain grammars)");
  enumerate->add_option("--side", o.side, "side of a synchronous grammar with --q");
  enumerate->add_option("--limit", o.limit, "at most this many trees");
  fmt(enumerate, {"json", "dot", "text"});

  auto* check = app.add_subcommand("check", "check a pair of trees for synchrony; print the step witness");
  common(check);
  tree_opts(check);
  check->add_option("--right-tree", o.right_tree, "right tree document")->required();
  check->add_option("--seed", o.seed, "step order seed (0: leftmost)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (o.format.empty()) o.format = validate->parsed() ? "text" : "json";

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (derive->parsed()) return cmd_derive(o);
    if (translate->parsed()) return cmd_translate(o);
    if (vdt->parsed()) return cmd_vdt(o);
    if (forest->parsed()) return cmd_forest(o);
    if (compile->parsed()) return cmd_compile(o);
    if (enumerate->parsed()) return cmd_enumerate(o);
    if (check->parsed()) return cmd_check(o);
  } catch (const ResourceError& e) {
    std::cerr << "suvg: resource cap: " << e.what() << "\n";
    return 3;
  } catch (const SchemaError& e) {
    std::cerr << "suvg: schema error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "suvg: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "suvg: " << e.what() << "\n";
    return 2;
  } catch (const Rejected& e) {
    std::cerr << "suvg: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "suvg: internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {  // unsupported grammar, precondition, malformed tree, step
    std::cerr << "suvg: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
