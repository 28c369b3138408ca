// agcirc/report.hpp - run reports for the command-line tool (text and JSON)
#pragma once

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "agcirc/derivation.hpp"
#include "agcirc/grammar.hpp"
#include "agcirc/verdict.hpp"

namespace agcirc {

inline constexpr int report_schema = 1;

struct GrammarSummary {
  std::string file;
  std::size_t nonterminals = 0;
  std::size_t terminals = 0;
  std::size_t productions = 0;
  std::size_t attributes = 0;
  std::size_t edges = 0;

  friend bool operator==(const GrammarSummary&, const GrammarSummary&) = default;
};

inline GrammarSummary summarize(const AttributeGrammar& g, std::string file) {
  GrammarSummary s;
  s.file = std::move(file);
  for (const auto& sym : g.symbols) {
    (sym.is_nonterminal() ? s.nonterminals : s.terminals)++;
    s.attributes += sym.attribute_count();
  }
  s.productions = g.productions.size();
  for (const auto& p : g.productions) s.edges += p.edges.size();
  return s;
}

struct WitnessText {
  std::string tree;                // S:p1(A:p2)
  std::vector<std::string> cycle;  // 0.1:i, 0.1:s
  bool valid = false;

  friend bool operator==(const WitnessText&, const WitnessText&) = default;
};

inline WitnessText describe_witness(const AttributeGrammar& g, const Witness& w) {
  WitnessText out;
  out.tree = render_tree(g, w.tree);
  for (const auto& v : w.cycle) out.cycle.push_back(path_string(v.path) + ":" + v.attr);
  out.valid = validate_witness(g, w);
  return out;
}

struct AlgoRun {
  std::string algo;     // fixpoint | alternation | oracle
  std::string outcome;  // an Outcome name, or "resource_limit"
  std::optional<std::size_t> depth;
  Stats stats;
  std::optional<WitnessText> witness;
  std::string error;

  friend bool operator==(const AlgoRun&, const AlgoRun&) = default;
};

inline AlgoRun make_run(const AttributeGrammar& g, std::string algo, const Verdict& v) {
  AlgoRun run;
  run.algo = std::move(algo);
  run.outcome = to_string(v.outcome);
  if (run.algo == "oracle") run.depth = v.depth;
  run.stats = v.stats;
  if (v.witness) run.witness = describe_witness(g, *v.witness);
  return run;
}

struct RunReport {
  int schema = report_schema;
  GrammarSummary grammar;
  std::vector<AlgoRun> runs;
  bool agreement = true;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// True iff every run finished with the same outcome.
inline bool runs_agree(const std::vector<AlgoRun>& runs) {
  for (const auto& r : runs)
    if (r.outcome != runs.front().outcome) return false;
  return true;
}

/// 0 non-circular, 1 circular, 3 resource limit or undecided depth, 4 circular/non-circular conflict.
inline int exit_code(const RunReport& report) {
  bool circular = false, non_circular = false, incomplete = false;
  for (const auto& r : report.runs) {
    if (r.outcome == "circular")
      circular = true;
    else if (r.outcome == "non_circular")
      non_circular = true;
    else
      incomplete = true;
  }
  if (circular && non_circular) return 4;
  if (incomplete || report.runs.empty()) return 3;
  return circular ? 1 : 0;
}

inline nlohmann::ordered_json to_json(const Stats& s) {
  nlohmann::ordered_json j;
  j["iterations"] = s.iterations;
  j["stored_graphs"] = s.stored_graphs;
  j["counters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.counters) j["counters"][k] = v;
  if (!s.io_sizes.empty()) {
    j["io_sizes"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.io_sizes) j["io_sizes"][k] = v;
  }
  j["elapsed_ms"] = s.elapsed_ms;
  return j;
}

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = r.schema;
  j["grammar"] = {{"file", r.grammar.file},
                  {"nonterminals", r.grammar.nonterminals},
                  {"terminals", r.grammar.terminals},
                  {"productions", r.grammar.productions},
                  {"attributes", r.grammar.attributes},
                  {"edges", r.grammar.edges}};
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& run : r.runs) {
    nlohmann::ordered_json rj;
    rj["algo"] = run.algo;
    rj["outcome"] = run.outcome;
    if (run.depth) rj["depth"] = *run.depth;
    rj["stats"] = to_json(run.stats);
    if (run.witness)
      rj["witness"] = {{"tree", run.witness->tree}, {"cycle", run.witness->cycle}, {"valid", run.witness->valid}};
    if (!run.error.empty()) rj["error"] = run.error;
    j["runs"].push_back(std::move(rj));
  }
  j["agreement"] = r.agreement;
  return j;
}

inline RunReport report_from_json(const nlohmann::ordered_json& j) {
  RunReport r;
  r.schema = j.at("schema").get<int>();
  const auto& gj = j.at("grammar");
  r.grammar.file = gj.at("file").get<std::string>();
  r.grammar.nonterminals = gj.at("nonterminals").get<std::size_t>();
  r.grammar.terminals = gj.at("terminals").get<std::size_t>();
  r.grammar.productions = gj.at("productions").get<std::size_t>();
  r.grammar.attributes = gj.at("attributes").get<std::size_t>();
  r.grammar.edges = gj.at("edges").get<std::size_t>();
  for (const auto& rj : j.at("runs")) {
    AlgoRun run;
    run.algo = rj.at("algo").get<std::string>();
    run.outcome = rj.at("outcome").get<std::string>();
    if (rj.contains("depth")) run.depth = rj.at("depth").get<std::size_t>();
    const auto& sj = rj.at("stats");
    run.stats.iterations = sj.at("iterations").get<std::uint64_t>();
    run.stats.stored_graphs = sj.at("stored_graphs").get<std::uint64_t>();
    run.stats.elapsed_ms = sj.at("elapsed_ms").get<double>();
    for (const auto& [k, v] : sj.at("counters").items()) run.stats.counters.emplace_back(k, v.get<std::uint64_t>());
    if (sj.contains("io_sizes"))
      for (const auto& [k, v] : sj.at("io_sizes").items()) run.stats.io_sizes.emplace_back(k, v.get<std::uint64_t>());
    if (rj.contains("witness")) {
      const auto& wj = rj.at("witness");
      run.witness = WitnessText{wj.at("tree").get<std::string>(), wj.at("cycle").get<std::vector<std::string>>(),
                                wj.at("valid").get<bool>()};
    }
    if (rj.contains("error")) run.error = rj.at("error").get<std::string>();
    r.runs.push_back(std::move(run));
  }
  r.agreement = j.at("agreement").get<bool>();
  return r;
}

inline std::string render_text(const RunReport& r) {
  std::ostringstream out;
  const auto& g = r.grammar;
  out << "grammar " << g.file << ": " << g.nonterminals << " nonterminals, " << g.terminals << " terminals, "
      << g.productions << " productions, " << g.attributes << " attributes, " << g.edges << " edges\n";
  for (const auto& run : r.runs) {
    out << std::left << std::setw(12) << run.algo << ' ' << std::setw(22) << run.outcome;
    if (run.depth) out << " depth=" << *run.depth;
    for (const auto& [k, v] : run.stats.counters) out << ' ' << k << '=' << v;
    out << std::fixed << std::setprecision(3) << "  (" << run.stats.elapsed_ms << " ms)\n";
    if (!run.stats.io_sizes.empty()) {
      out << "    |IO|:";
      for (const auto& [k, v] : run.stats.io_sizes) out << ' ' << k << '=' << v;
      out << '\n';
    }
    if (run.witness) {
      out << "    tree:  " << run.witness->tree << '\n' << "    cycle: ";
      for (const auto& v : run.witness->cycle) out << v << " -> ";
      if (!run.witness->cycle.empty()) out << run.witness->cycle.front();
      out << (run.witness->valid ? "" : "  [INVALID]") << '\n';
    }
    if (!run.error.empty()) out << "    error: " << run.error << '\n';
  }
  if (r.runs.size() > 1) out << "agreement: " << (r.agreement ? "yes" : "NO") << '\n';
  return out.str();
}

}  // namespace agcirc
