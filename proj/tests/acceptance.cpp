// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-agcirc>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "agcirc/agcirc.hpp"

namespace fs = std::filesystem;
using namespace agcirc;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t corpus_size = 1000;
constexpr std::uint64_t oracle_node_budget = 2'000'000;
constexpr double corpus_time_limit_s = 300.0;
constexpr double fixture_time_limit_ms = 1000.0;

int failures = 0;

void report(int number, const std::string& title, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << number << "] " << title << ": " << detail << std::endl;
  if (!pass) ++failures;
}

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

struct WitnessLog {
  std::size_t circular = 0;  // circular verdicts seen
  std::size_t valid = 0;     // of those, with a validating witness
  std::size_t mutants = 0;
  std::size_t mutants_rejected = 0;

  void add(const AttributeGrammar& g, const Verdict& v) {
    if (v.outcome != Outcome::circular) return;
    ++circular;
    if (!v.witness || !validate_witness(g, *v.witness)) return;
    ++valid;
    for (std::size_t i = 0; i < v.witness->cycle.size(); ++i) {
      Witness m = *v.witness;
      m.cycle.erase(m.cycle.begin() + static_cast<std::ptrdiff_t>(i));
      ++mutants;
      if (!validate_witness(g, m)) ++mutants_rejected;
    }
  }
};

WitnessLog witnesses;

// ---------------------------------------------------------------------------

void fixtures() {
  bool ok = true;
  double slowest = 0;
  std::ostringstream bad;
  const std::vector<std::pair<std::string, Outcome>> expected = {
      {"G1", Outcome::circular}, {"G2", Outcome::non_circular}, {"EPS", Outcome::non_circular}};
  for (const auto& [name, want] : expected) {
    const auto g = fixture_grammar(name);
    auto timed = [&](const std::string& algo, auto&& run) {
      const auto t = Clock::now();
      const Verdict v = run();
      const double ms = ms_since(t);
      slowest = std::max(slowest, ms);
      witnesses.add(g, v);
      if (v.outcome != want || ms >= fixture_time_limit_ms) {
        ok = false;
        bad << ' ' << name << '/' << algo << '=' << to_string(v.outcome);
      }
    };
    timed("fixpoint", [&] { return is_circular_fixpoint(g); });
    timed("alternation", [&] { return check_alternating(g); });
    timed("oracle", [&] { return oracle_check(g, sufficient_depth(g)); });
  }
  std::ostringstream detail;
  detail << "9 runs, slowest " << slowest << " ms" << bad.str();
  report(1, "fixture verdicts", ok, detail.str());
}

struct CorpusResult {
  std::size_t fix_alt_agree = 0;
  std::size_t oracle_fit = 0;
  std::size_t oracle_agree = 0;
  std::size_t circular = 0;
  double seconds = 0;
  // bridge
  std::size_t bridge_checked = 0;
  std::size_t bridge_agree = 0;
  // tableau
  std::size_t tableau_ok = 0;
  std::size_t footprint_ok = 0;
  std::string first_disagreement;
};

CorpusResult corpus() {
  CorpusResult r;
  const RandomBounds bounds;  // <= 3 nonterminals, <= 2 inh + 2 syn, <= 5 productions, rhs <= 3
  const auto started = Clock::now();
  for (std::uint64_t seed = 0; seed < corpus_size; ++seed) {
    const auto g = random_grammar(seed, bounds);

    const Verdict fix = is_circular_fixpoint(g);
    AlternationChecker alt_checker(g);
    const Verdict alt = alt_checker.check();
    witnesses.add(g, fix);
    witnesses.add(g, alt);
    if (fix.outcome == alt.outcome)
      ++r.fix_alt_agree;
    else if (r.first_disagreement.empty())
      r.first_disagreement = "seed " + std::to_string(seed);
    r.circular += fix.outcome == Outcome::circular;

    OracleOptions options;
    options.max_depth = sufficient_depth(g);
    options.sufficient = options.max_depth;
    options.max_nodes = oracle_node_budget;
    try {
      const Verdict oracle = oracle_check(g, options);
      ++r.oracle_fit;
      witnesses.add(g, oracle);
      if (oracle.outcome == fix.outcome)
        ++r.oracle_agree;
      else if (r.first_disagreement.empty())
        r.first_disagreement = "oracle, seed " + std::to_string(seed);
    } catch (const ResourceLimitExceeded&) {
    }

    if (alt_checker.tableau().size() <= tableau_bound(g)) ++r.tableau_ok;
    if (alt_checker.max_parameter_bits() <= grammar_size(g)) ++r.footprint_ok;
  }
  r.seconds = ms_since(started) / 1000.0;

  // Bridge: generatable(X, d) <=> d in IO(X), every d.
  for (std::uint64_t seed = 0; seed < corpus_size; ++seed) {
    const auto g = random_grammar(seed, bounds);
    const IOSets sets = io_sets(g);
    AlternationChecker checker(g);
    for (std::size_t x : g.nonterminals()) {
      const std::size_t w = g.symbols[x].inh.size() * g.symbols[x].syn.size();
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << w); ++v) {
        IOGraph d = IOGraph::empty_for(g, x);
        for (std::size_t bit = 0; bit < w; ++bit)
          if (v >> bit & 1U) d.set_bit(bit);
        ++r.bridge_checked;
        if (checker.generatable(d) == sets.contains(d)) ++r.bridge_agree;
      }
    }
  }
  return r;
}

void expio() {
  bool sizes_ok = true;
  std::ostringstream detail;
  std::vector<double> bytes;
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto g = expio_grammar(n, false);
    const auto sets = io_sets(g);
    if (sets.entries(0).size() != (std::size_t{1} << n)) sizes_ok = false;
    std::size_t edges = 0;
    for (const auto& p : g.productions) edges += p.edges.size();
    if (edges != n * (2 * n - 1)) sizes_ok = false;
    bytes.push_back(static_cast<double>(gen_expio(n, false).size()));
  }
  // Θ(n²): bytes/n² stays within a constant band for n = 2..8.
  double lo = 1e300, hi = 0;
  for (std::size_t n = 2; n <= 8; ++n) {
    const double q = bytes[n - 1] / static_cast<double>(n * n);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  const bool quadratic = hi / lo < 3.0;

  // Time/size ratio over n = 4..8.  Calls are timed in batches of at least
  // 5 ms; the per-call time is the minimum batch mean over 15 batches.
  std::vector<double> ratio;
  for (std::size_t n = 4; n <= 8; ++n) {
    const auto g = expio_grammar(n, false);
    auto batch = [&](std::size_t calls) {
      const auto t = Clock::now();
      for (std::size_t i = 0; i < calls; ++i)
        if (is_circular_fixpoint(g).outcome != Outcome::non_circular) sizes_ok = false;
      return ms_since(t);
    };
    std::size_t calls = 1;
    while (batch(calls) < 5.0) calls *= 2;
    double best = 1e300;
    for (int rep = 0; rep < 15; ++rep) best = std::min(best, batch(calls) / static_cast<double>(calls));
    ratio.push_back(best / bytes[n - 1]);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ratio.size(); ++i) monotone = monotone && ratio[i] > ratio[i - 1];

  detail << "|IO(A)| = 2^n and edges = n(2n-1) for n=1..8: " << (sizes_ok ? "yes" : "no")
         << "; bytes/n^2 in [" << lo << ", " << hi << "]; ms/byte n=4..8:";
  for (double q : ratio) detail << ' ' << q;
  report(4, "exponential family", sizes_ok && quadratic && monotone, detail.str());
}

void monotonicity() {
  std::mt19937_64 rng(4);
  RandomBounds bounds;
  bounds.edge_density = 0.2;
  std::size_t samples = 0, violations = 0;
  for (std::uint64_t seed = 0; samples < 1000; ++seed) {
    const auto g = random_grammar(seed, bounds);
    const auto layouts = make_layouts(g);
    const auto& layout = layouts[rng() % layouts.size()];
    std::vector<IOGraph> small, big;
    for (std::size_t pos : layout.child_positions) {
      IOGraph d = IOGraph::empty_for(g, layout.symbols[pos]);
      IOGraph e = d;
      for (std::size_t bit = 0; bit < d.width(); ++bit) {
        const auto roll = rng() % 4;
        if (roll == 0) d.set_bit(bit);
        if (roll <= 1) e.set_bit(bit);
      }
      small.push_back(std::move(d));
      big.push_back(std::move(e));
    }
    const auto cs = compose(layout, small);
    const auto cb = compose(layout, big);
    if (!induce(cs).subset_of(induce(cb))) ++violations;
    if (has_cycle(cs) && !has_cycle(cb)) ++violations;
    ++samples;
  }
  report(7, "monotonicity", violations == 0,
         std::to_string(samples) + " subset pairs, " + std::to_string(violations) + " violations");
}

std::string run_cli(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  return out;
}

void strip_elapsed(nlohmann::ordered_json& j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    for (auto& [k, v] : j.items()) strip_elapsed(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_elapsed(v);
  }
}

void determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / ("agcirc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool ok = true;
  std::ostringstream detail;
  for (const char* name : {"EPS", "G1", "G2"}) {
    const fs::path file = dir / (std::string(name) + ".ag");
    std::ofstream(file) << gen_fixture(name);
    std::string canon[2];
    for (auto& c : canon) {
      const std::string out = run_cli(cli + " check --algo all --json - " + file.string() + " 2>/dev/null");
      try {
        auto j = nlohmann::ordered_json::parse(out);
        strip_elapsed(j);
        c = j.dump();
      } catch (const std::exception&) {
        c = "<unparseable>";
      }
    }
    const bool same = canon[0] == canon[1] && canon[0] != "<unparseable>";
    ok = ok && same;
    detail << ' ' << name << (same ? "=identical" : "=DIFFERENT");
  }
  fs::remove_all(dir);
  report(8, "determinism of check --algo all --json", ok, detail.str().substr(1));
}

void extra_witnesses() {
  // EXPIO with a trigger and an epsilon-cycle grammar add non-trivial witnesses to the pool.
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto g = expio_grammar(n, true);
    witnesses.add(g, is_circular_fixpoint(g));
    witnesses.add(g, check_alternating(g));
    witnesses.add(g, oracle_check(g, sufficient_depth(g)));
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <path-to-agcirc>\n";
    return 2;
  }
  const std::string cli = argv[1];

  fixtures();

  const CorpusResult c = corpus();
  {
    std::ostringstream d;
    d << "fixpoint/alternation " << c.fix_alt_agree << '/' << corpus_size << "; oracle fit " << c.oracle_fit << '/'
      << corpus_size << ", agrees " << c.oracle_agree << '/' << c.oracle_fit << "; " << c.circular
      << " circular; " << c.seconds << " s";
    if (!c.first_disagreement.empty()) d << "; first disagreement " << c.first_disagreement;
    const bool pass = c.fix_alt_agree == corpus_size && c.oracle_agree == c.oracle_fit &&
                      c.oracle_fit * 100 >= corpus_size * 95 && c.seconds < corpus_time_limit_s;
    report(2, "cross-checker agreement", pass, d.str());
  }
  report(3, "generatable vs IO sets", c.bridge_agree == c.bridge_checked && c.bridge_checked > 0,
         std::to_string(c.bridge_agree) + '/' + std::to_string(c.bridge_checked) + " (X, d) pairs agree");

  expio();

  report(5, "tableau bound", c.tableau_ok == corpus_size && c.footprint_ok == corpus_size,
         "entries within bound " + std::to_string(c.tableau_ok) + '/' + std::to_string(corpus_size) +
             ", parameter footprint within grammar size " + std::to_string(c.footprint_ok) + '/' +
             std::to_string(corpus_size));

  extra_witnesses();
  report(6, "witness soundness",
         witnesses.circular > 0 && witnesses.valid == witnesses.circular &&
             witnesses.mutants_rejected == witnesses.mutants,
         std::to_string(witnesses.valid) + '/' + std::to_string(witnesses.circular) + " witnesses valid, " +
             std::to_string(witnesses.mutants_rejected) + '/' + std::to_string(witnesses.mutants) +
             " one-step deletions rejected");

  monotonicity();
  determinism(cli);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
