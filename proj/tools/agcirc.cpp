// agcirc - attribute grammar circularity checker
//
// Exit codes: 0 non-circular, 1 circular, 2 usage/parse/validation error,
// 3 resource limit or undecided oracle depth, 4 checkers disagree,
// 5 internal error (a witness failed validation).
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "agcirc/agcirc.hpp"

namespace {

using namespace agcirc;

constexpr int exit_usage = 2;
constexpr int exit_limit = 3;
constexpr int exit_disagree = 4;
constexpr int exit_internal = 5;

std::string read_source(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GrammarError("E_IO", "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t resolve_max_graphs(std::size_t flag) {
  if (flag != 0) return flag;
  if (const char* env = std::getenv("AGCIRC_MAX_GRAPHS")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw GrammarError("E_USAGE", std::string("AGCIRC_MAX_GRAPHS is not a number: ") + env);
    }
  }
  return FixpointOptions{}.max_graphs;
}

struct CheckArgs {
  std::string file;
  std::string algo = "all";
  std::string json;
  std::size_t depth = 0;
  bool reachable = false;
  std::size_t max_graphs = 0;
  std::uint64_t max_nodes = OracleOptions{}.max_nodes;
};

AlgoRun limit_run(std::string algo, const std::string& message) {
  AlgoRun run;
  run.algo = std::move(algo);
  run.outcome = "resource_limit";
  run.error = message;
  return run;
}

int cmd_check(const CheckArgs& args) {
  const AttributeGrammar g = parse_ag(read_source(args.file));
  const std::size_t max_graphs = resolve_max_graphs(args.max_graphs);

  RunReport report;
  report.grammar = summarize(g, args.file);
  const bool all = args.algo == "all";

  if (all || args.algo == "fixpoint") {
    try {
      report.runs.push_back(make_run(g, "fixpoint", is_circular_fixpoint(g, {max_graphs, args.reachable})));
    } catch (const ResourceLimitExceeded& e) {
      report.runs.push_back(limit_run("fixpoint", e.what()));
    }
  }
  if (all || args.algo == "alternation") {
    try {
      AlternationOptions options;
      options.max_tableau = max_graphs;
      options.reachable_only = args.reachable;
      report.runs.push_back(make_run(g, "alternation", check_alternating(g, options)));
    } catch (const ResourceLimitExceeded& e) {
      report.runs.push_back(limit_run("alternation", e.what()));
    }
  }
  if (all || args.algo == "oracle") {
    OracleOptions options;
    options.max_nodes = args.max_nodes;
    options.reachable_only = args.reachable;
    try {
      options.sufficient = sufficient_depth(g, args.reachable, max_graphs);
    } catch (const ResourceLimitExceeded&) {
    }
    if (args.depth != 0) {
      options.max_depth = args.depth;
    } else if (options.sufficient) {
      options.max_depth = *options.sufficient;
    }
    if (args.depth == 0 && !options.sufficient) {
      report.runs.push_back(limit_run("oracle", "sufficient depth not computable within the graph cap; pass --depth"));
    } else {
      try {
        report.runs.push_back(make_run(g, "oracle", oracle_check(g, options)));
      } catch (const ResourceLimitExceeded& e) {
        report.runs.push_back(limit_run("oracle", e.what()));
      }
    }
  }
  report.agreement = runs_agree(report.runs);

  if (!args.json.empty()) {
    const std::string text = to_json(report).dump(2) + "\n";
    if (args.json == "-") {
      std::cout << text;
    } else {
      std::ofstream out(args.json, std::ios::binary);
      if (!out) throw GrammarError("E_IO", "cannot write '" + args.json + "'");
      out << text;
    }
  }
  if (args.json != "-") std::cout << render_text(report);

  for (const auto& run : report.runs)
    if (run.witness && !run.witness->valid) {
      std::cerr << "internal error: " << run.algo << " produced a witness that fails validation\n";
      return exit_internal;
    }
  const int code = exit_code(report);
  if (code == exit_disagree) {
    std::cerr << "E_DISAGREE: checkers disagree on this grammar:\n" << serialize_ag(g);
  }
  return code;
}

int cmd_witness(const std::string& file, std::size_t max_graphs_flag) {
  const AttributeGrammar g = parse_ag(read_source(file));
  Verdict v;
  try {
    FixpointOptions options;
    options.max_graphs = resolve_max_graphs(max_graphs_flag);
    v = is_circular_fixpoint(g, options);
  } catch (const ResourceLimitExceeded& e) {
    std::cerr << e.what() << '\n';
    return exit_limit;
  }
  if (v.outcome != Outcome::circular) {
    std::cerr << "grammar is not circular; no witness\n";
    return exit_usage;
  }
  if (!validate_witness(g, *v.witness)) {
    std::cerr << "internal error: witness fails validation\n";
    return exit_internal;
  }
  std::cout << "tree: " << render_tree(g, v.witness->tree) << '\n'
            << render_tree_indented(g, v.witness->tree) << "cycle: " << render_cycle(*v.witness) << '\n';
  return 0;
}

int cmd_validate(const std::string& file) {
  AttributeGrammar g;
  try {
    g = parse_ag(read_source(file));
  } catch (const GrammarError& e) {
    std::cout << "error " << e.what() << '\n';
    return exit_usage;
  }
  const auto report = validate(g);
  for (const auto& e : report.errors) std::cout << "error " << e.code << ": " << e.message << " (" << e.location << ")\n";
  for (const auto& w : report.warnings)
    std::cout << "warning " << w.code << ": " << w.message << " (" << w.location << ")\n";
  if (report.ok()) std::cout << "ok\n";
  return report.ok() ? 0 : exit_usage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribute grammar circularity checker"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Decide whether a grammar is circular");
  check_cmd->add_option("file", check.file, "Grammar file ('-' for stdin)")->required();
  check_cmd->add_option("--algo", check.algo, "fixpoint | alternation | oracle | all")
      ->check(CLI::IsMember({"fixpoint", "alternation", "oracle", "all"}));
  check_cmd->add_option("--json", check.json, "Write the JSON report to this path ('-' for stdout)");
  check_cmd->add_option("--depth", check.depth, "Oracle tree height (default: sufficient depth)")
      ->check(CLI::PositiveNumber);
  check_cmd->add_flag("--reachable", check.reachable, "Only consider trees rooted at the start symbol");
  check_cmd->add_option("--max-graphs", check.max_graphs, "Cap on stored graphs / tableau entries")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--max-nodes", check.max_nodes, "Cap on oracle tree nodes")->check(CLI::PositiveNumber);

  std::string witness_file;
  std::size_t witness_max_graphs = 0;
  auto* witness_cmd = app.add_subcommand("witness", "Print a validated circularity witness");
  witness_cmd->add_option("file", witness_file, "Grammar file ('-' for stdin)")->required();
  witness_cmd->add_option("--max-graphs", witness_max_graphs, "Cap on stored graphs")->check(CLI::PositiveNumber);

  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a grammar");
  validate_cmd->add_option("file", validate_file, "Grammar file ('-' for stdin)")->required();

  auto* gen_cmd = app.add_subcommand("gen", "Generate a grammar");
  gen_cmd->require_subcommand(1);
  std::string fixture_name;
  auto* gen_fixture_cmd = gen_cmd->add_subcommand("fixture", "EPS, G1 or G2");
  gen_fixture_cmd->add_option("name", fixture_name)->required()->check(CLI::IsMember({"EPS", "G1", "G2"}));
  std::size_t expio_n = 1;
  bool expio_trigger = false;
  auto* gen_expio_cmd = gen_cmd->add_subcommand("expio", "Grammar whose IO set has 2^n graphs");
  gen_expio_cmd->add_option("n", expio_n)->required()->check(CLI::Range(1, 16));
  gen_expio_cmd->add_flag("--trigger", expio_trigger, "Add a circular root production");
  std::uint64_t seed = 0;
  RandomBounds bounds;
  auto* gen_random_cmd = gen_cmd->add_subcommand("random", "Random valid grammar");
  gen_random_cmd->add_option("--seed", seed)->required();
  gen_random_cmd->add_option("--max-nonterminals", bounds.max_nonterminals)->check(CLI::Range(1, 64));
  gen_random_cmd->add_option("--max-inh", bounds.max_inh)->check(CLI::Range(0, 16));
  gen_random_cmd->add_option("--max-syn", bounds.max_syn)->check(CLI::Range(0, 16));
  gen_random_cmd->add_option("--max-productions", bounds.max_productions)->check(CLI::Range(1, 256));
  gen_random_cmd->add_option("--max-rhs", bounds.max_rhs)->check(CLI::Range(0, 16));
  gen_random_cmd->add_option("--terminals", bounds.terminals)->check(CLI::Range(0, 16));
  gen_random_cmd->add_option("--density", bounds.edge_density)->check(CLI::Range(0.0, 1.0));
  gen_random_cmd->add_option("--productivity", bounds.productivity)->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (*check_cmd) return cmd_check(check);
    if (*witness_cmd) return cmd_witness(witness_file, witness_max_graphs);
    if (*validate_cmd) return cmd_validate(validate_file);
    if (*gen_fixture_cmd) std::cout << gen_fixture(fixture_name);
    if (*gen_expio_cmd) std::cout << gen_expio(expio_n, expio_trigger);
    if (*gen_random_cmd) std::cout << gen_random(seed, bounds);
    return 0;
  } catch (const GrammarError& e) {
    std::cerr << "error " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}
