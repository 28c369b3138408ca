// agcirc/alternation.hpp - deterministic guess-and-verify circularity test
//
// The alternating procedure has four states:
//   q0  (exists p)            some production p satisfies q1
//   q1  (exists guess)        child graphs [d1..dk] close a cycle with D(p)
//                             and every (Xi, di) satisfies q2
//   q2  (exists p: X -> ..)   some production for X satisfies q3
//   q3  (exists guess)        [d1..dk] induces exactly d at the lhs and
//                             every (Xi, di) satisfies q2
// Existential choices become enumeration.  The q2/q3 recursion is evaluated
// as a least fixpoint over a table of (X, d) goals: a pass treats goals that
// are already on the call stack as failing, memoizes failures for the pass
// only, and passes repeat until no new goal is proven.
#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "agcirc/derivation.hpp"
#include "agcirc/grammar.hpp"
#include "agcirc/io_graph.hpp"
#include "agcirc/verdict.hpp"

namespace agcirc {

/// Enumerates every array [d1..dk] of child IOGraphs of one production, in
/// increasing total popcount, ties in increasing value of (d1, d2, ..).
class GuessStream {
 public:
  GuessStream(const AttributeGrammar& g, const ProductionLayout& layout) {
    for (std::size_t pos : layout.child_positions) {
      const std::size_t sym = layout.symbols[pos];
      shapes_.push_back({sym, g.symbols[sym].inh.size(), g.symbols[sym].syn.size()});
    }
    // d1 occupies the most significant bits of the concatenated value.
    bases_.resize(shapes_.size());
    std::size_t base = 0;
    for (std::size_t j = shapes_.size(); j-- > 0;) {
      bases_[j] = base;
      base += shapes_[j].inh * shapes_[j].syn;
    }
    total_bits_ = base;
  }

  /// Writes the next array into `out`; false once exhausted.
  bool next(std::vector<IOGraph>& out) {
    if (done_) return false;
    if (!started_) {
      started_ = true;
      reset_class(0);
    } else if (!advance()) {
      done_ = true;
      return false;
    }
    out.clear();
    for (const auto& s : shapes_) out.emplace_back(s.owner, s.inh, s.syn);
    for (std::size_t bit : positions_) {
      std::size_t j = 0;
      while (bit < bases_[j]) ++j;
      out[j].set_bit(bit - bases_[j]);
    }
    ++emitted_;
    return true;
  }

  [[nodiscard]] std::size_t total_bits() const noexcept { return total_bits_; }
  /// 2^total_bits, saturated.
  [[nodiscard]] std::uint64_t count() const noexcept {
    return total_bits_ >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << total_bits_;
  }
  [[nodiscard]] std::uint64_t emitted() const noexcept { return emitted_; }

 private:
  struct Shape {
    std::size_t owner, inh, syn;
  };

  void reset_class(std::size_t popcount) {
    positions_.resize(popcount);
    for (std::size_t i = 0; i < popcount; ++i) positions_[i] = i;
  }

  // Next bit-position set of the same size in increasing numeric order, or
  // the first set of the next size.
  bool advance() {
    const std::size_t c = positions_.size();
    for (std::size_t i = 0; i < c; ++i) {
      const std::size_t limit = i + 1 < c ? positions_[i + 1] : total_bits_;
      if (positions_[i] + 1 < limit) {
        ++positions_[i];
        for (std::size_t m = 0; m < i; ++m) positions_[m] = m;
        return true;
      }
    }
    if (c >= total_bits_) return false;
    reset_class(c + 1);
    return true;
  }

  std::vector<Shape> shapes_;
  std::vector<std::size_t> bases_;
  std::size_t total_bits_ = 0;
  std::vector<std::size_t> positions_;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t emitted_ = 0;
};

inline GuessStream enumerate_guesses(const AttributeGrammar& g, std::size_t production) {
  return GuessStream(g, make_layout(g, production));
}

struct AlternationOptions {
  std::size_t max_tableau = 1'000'000;
  std::uint64_t max_guesses = 200'000'000;
  bool reachable_only = false;
};

enum class GoalStatus { unknown, proven };

struct TableauEntry {
  GoalStatus status = GoalStatus::unknown;
  // Proof link of a proven goal: production and the child graphs it used.
  std::size_t production = 0;
  std::vector<IOGraph> children;
  // Per-pass bookkeeping.
  bool in_progress = false;
  std::uint64_t failed_in_pass = 0;
};

using Tableau = std::unordered_map<IOGraph, TableauEntry, IOGraphHash>;

/// Σ_X 2^(|Inh(X)|·|Syn(X)|), saturated: the number of distinct (X, d) goals.
inline std::uint64_t tableau_bound(const AttributeGrammar& g) {
  std::uint64_t total = 0;
  for (std::size_t x : g.nonterminals()) {
    const std::size_t w = g.symbols[x].inh.size() * g.symbols[x].syn.size();
    if (w >= 63) return std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t n = std::uint64_t{1} << w;
    if (total > std::numeric_limits<std::uint64_t>::max() - n) return std::numeric_limits<std::uint64_t>::max();
    total += n;
  }
  return total;
}

/// Σ_p V_p² where V_p is the number of attribute occurrences of p: the size
/// of the grammar with every D(p) written as an adjacency matrix.
inline std::uint64_t grammar_size(const AttributeGrammar& g) {
  std::uint64_t total = 0;
  for (const auto& p : g.productions) {
    std::uint64_t v = 0;
    for (std::size_t pos = 0; pos <= p.rhs.size(); ++pos) v += g.symbols[p.symbol_at(pos)].attribute_count();
    total += v * v;
  }
  return total;
}

class AlternationChecker {
 public:
  explicit AlternationChecker(const AttributeGrammar& g, AlternationOptions options = {})
      : g_(g), options_(options), by_lhs_(g.symbols.size()) {
    require_valid(g);
    layouts_ = make_layouts(g);
    for (std::size_t i = 0; i < g.productions.size(); ++i) by_lhs_[g.productions[i].lhs].push_back(i);
  }

  /// q2: some finite tree rooted at d.owner() induces exactly d.
  bool generatable(const IOGraph& d) {
    return iterate([&] { return q2(d); });
  }

  /// q1 for one production.
  bool state_q1(std::size_t production) {
    std::vector<IOGraph> guess;
    return iterate([&] { return q1(production, guess); });
  }

  /// q3: production `production` with generatable children induces exactly d.
  bool state_q3(std::size_t production, const IOGraph& d) {
    return iterate([&] {
      std::vector<IOGraph> used;
      return q3(production, d, used);
    });
  }

  /// q0 over all productions (or those usable from the start symbol).
  Verdict check() {
    const auto started = std::chrono::steady_clock::now();
    const auto useful = useful_productions(g_);
    std::size_t top = 0;
    std::vector<IOGraph> guess;
    const bool circular = iterate([&] {
      for (std::size_t p = 0; p < layouts_.size(); ++p) {
        if (options_.reachable_only && !useful[p]) continue;
        if (q1(p, guess)) {
          top = p;
          return true;
        }
      }
      return false;
    });

    Verdict v;
    v.outcome = circular ? Outcome::circular : Outcome::non_circular;
    if (circular) {
      DerivationTree tree{top, {}};
      for (const auto& d : guess) tree.children.push_back(tree_for(d));
      v.witness = witness_for(g_, tree);
      if (!v.witness) throw std::logic_error("alternation: cyclic guess but acyclic witness tree");
    }
    v.stats = stats();
    v.stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return v;
  }

  /// Derivation tree realizing a proven goal, following proof links.
  [[nodiscard]] DerivationTree tree_for(const IOGraph& d) const {
    const TableauEntry& e = tableau_.at(d);
    if (e.status != GoalStatus::proven) throw std::logic_error("alternation: goal is not proven");
    DerivationTree t{e.production, {}};
    for (const auto& c : e.children) t.children.push_back(tree_for(c));
    return t;
  }

  [[nodiscard]] const Tableau& tableau() const noexcept { return tableau_; }
  [[nodiscard]] std::size_t proven_count() const noexcept { return proven_; }
  [[nodiscard]] std::uint64_t max_parameter_bits() const noexcept { return max_parameter_bits_; }

  [[nodiscard]] Stats stats() const {
    Stats st;
    st.iterations = passes_;
    st.stored_graphs = tableau_.size();
    st.counters = {{"tableau_entries", tableau_.size()}, {"proven", proven_},
                   {"outer_iterations", passes_},        {"guesses", guesses_},
                   {"q3_evaluations", q3_evaluations_},  {"max_parameter_bits", max_parameter_bits_}};
    return st;
  }

 private:
  template <class Pass>
  bool iterate(Pass&& pass) {
    while (true) {
      ++passes_;
      const std::size_t before = proven_;
      if (pass()) return true;
      if (proven_ == before) return false;
    }
  }

  void note_parameter(std::uint64_t bits) { max_parameter_bits_ = std::max(max_parameter_bits_, bits); }

  void count_guess() {
    if (++guesses_ > options_.max_guesses)
      throw ResourceLimitExceeded("alternation: more than " + std::to_string(options_.max_guesses) + " guesses");
  }

  TableauEntry& entry(const IOGraph& d) {
    auto [it, fresh] = tableau_.try_emplace(d);
    if (fresh && tableau_.size() > options_.max_tableau)
      throw ResourceLimitExceeded("alternation: more than " + std::to_string(options_.max_tableau) +
                                  " tableau entries");
    return it->second;
  }

  bool q1(std::size_t production, std::vector<IOGraph>& guess) {
    const ProductionLayout& layout = layouts_[production];
    if (g_.productions[production].is_epsilon()) {
      // No child graphs to guess; only a cycle inside D(p) itself can exist.
      guess.clear();
      note_parameter(0);
      return has_cycle(compose(layout, guess));
    }
    GuessStream stream(g_, layout);
    note_parameter(stream.total_bits());
    while (stream.next(guess)) {
      count_guess();
      if (!has_cycle(compose(layout, guess))) continue;
      if (all_children(guess)) return true;
    }
    return false;
  }

  bool q2(const IOGraph& d) {
    note_parameter(d.width());
    TableauEntry& e = entry(d);
    if (e.status == GoalStatus::proven) return true;
    if (e.in_progress || e.failed_in_pass == passes_) return false;
    e.in_progress = true;
    std::vector<IOGraph> used;
    for (std::size_t p : by_lhs_[d.owner()]) {
      if (q3(p, d, used)) {
        e.in_progress = false;
        e.status = GoalStatus::proven;
        e.production = p;
        e.children = std::move(used);
        ++proven_;
        return true;
      }
    }
    e.in_progress = false;
    e.failed_in_pass = passes_;
    return false;
  }

  bool q3(std::size_t production, const IOGraph& d, std::vector<IOGraph>& guess) {
    ++q3_evaluations_;
    note_parameter(d.width());
    const ProductionLayout& layout = layouts_[production];
    GuessStream stream(g_, layout);
    while (stream.next(guess)) {
      count_guess();
      if (!(induce(compose(layout, guess)) == d)) continue;
      if (all_children(guess)) return true;
    }
    return false;
  }

  bool all_children(const std::vector<IOGraph>& guess) {
    for (const auto& d : guess)
      if (!q2(d)) return false;
    return true;
  }

  const AttributeGrammar& g_;
  AlternationOptions options_;
  std::vector<ProductionLayout> layouts_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  Tableau tableau_;
  std::size_t proven_ = 0;
  std::uint64_t passes_ = 0;
  std::uint64_t guesses_ = 0;
  std::uint64_t q3_evaluations_ = 0;
  std::uint64_t max_parameter_bits_ = 0;
};

inline Verdict check_alternating(const AttributeGrammar& g, const AlternationOptions& options = {}) {
  return AlternationChecker(g, options).check();
}

inline bool state_q1(const AttributeGrammar& g, std::size_t production) {
  return AlternationChecker(g).state_q1(production);
}

inline bool generatable(const AttributeGrammar& g, const IOGraph& d) { return AlternationChecker(g).generatable(d); }

inline bool state_q3(const AttributeGrammar& g, std::size_t production, const IOGraph& d) {
  return AlternationChecker(g).state_q3(production, d);
}

}  // namespace agcirc
