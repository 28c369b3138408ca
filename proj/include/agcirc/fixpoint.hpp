// agcirc/fixpoint.hpp - the classic circularity test
//
// IO(X) is the least set of IOGraphs closed under: for p: X -> X1..Xk and
// di in IO(Xi), induce(compose(p, [d1..dk])) is in IO(X).  The grammar is
// circular iff some production composed with some selection from the IO
// sets of its children has a cycle.  Rounds are semi-naive: a selection is
// examined in round r only if it uses a graph first stored in round r-1, so
// an entry's rank is the height of the shortest tree that induces it.
#pragma once

#include <chrono>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "agcirc/derivation.hpp"
#include "agcirc/grammar.hpp"
#include "agcirc/io_graph.hpp"
#include "agcirc/verdict.hpp"

namespace agcirc {

struct Provenance {
  std::size_t production = 0;
  std::vector<std::size_t> children;  // entry index in IO(Xi) per nonterminal child
};

struct IOEntry {
  IOGraph graph;
  std::size_t rank = 0;
  Provenance provenance;
};

class IOSets {
 public:
  IOSets() = default;
  explicit IOSets(std::size_t symbol_count) : entries_(symbol_count), index_(symbol_count) {}

  [[nodiscard]] const std::vector<IOEntry>& entries(std::size_t symbol) const { return entries_.at(symbol); }
  [[nodiscard]] std::optional<std::size_t> find(const IOGraph& d) const {
    const auto& idx = index_.at(d.owner());
    auto it = idx.find(d);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] bool contains(const IOGraph& d) const { return find(d).has_value(); }
  [[nodiscard]] std::size_t total() const noexcept { return total_; }
  [[nodiscard]] std::size_t max_rank() const noexcept {
    std::size_t r = 0;
    for (const auto& list : entries_)
      for (const auto& e : list) r = std::max(r, e.rank);
    return r;
  }
  [[nodiscard]] std::size_t symbol_count() const noexcept { return entries_.size(); }

  /// Returns false (and stores nothing) if d is already present.
  bool insert(IOGraph d, std::size_t rank, Provenance provenance) {
    const std::size_t owner = d.owner();
    auto [it, fresh] = index_.at(owner).emplace(d, entries_[owner].size());
    if (!fresh) return false;
    entries_[owner].push_back({std::move(d), rank, std::move(provenance)});
    ++total_;
    return true;
  }

  std::size_t rounds = 0;      // rounds that stored at least one graph
  std::uint64_t selections = 0;

 private:
  std::vector<std::vector<IOEntry>> entries_;
  std::vector<std::unordered_map<IOGraph, std::size_t, IOGraphHash>> index_;
  std::size_t total_ = 0;
};

struct FixpointOptions {
  std::size_t max_graphs = 1'000'000;
  bool reachable_only = false;  // only productions usable in trees rooted at the start symbol
};

namespace detail {

/// Calls visit(selection) for every index vector with sel[i] in [lo[i], hi[i]),
/// lexicographically.  Stops early when visit returns false.
template <class Visit>
bool for_each_selection(const std::vector<std::size_t>& lo, const std::vector<std::size_t>& hi, Visit&& visit) {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] >= hi[i]) return true;
  std::vector<std::size_t> sel = lo;
  while (true) {
    if (!visit(static_cast<const std::vector<std::size_t>&>(sel))) return false;
    std::size_t i = sel.size();
    while (i > 0) {
      --i;
      if (++sel[i] < hi[i]) break;
      sel[i] = lo[i];
      if (i == 0) return true;
    }
    if (sel.empty()) return true;
  }
}

}  // namespace detail

inline IOSets io_sets(const AttributeGrammar& g, const FixpointOptions& options = {}) {
  require_valid(g);
  const auto layouts = make_layouts(g);
  IOSets sets(g.symbols.size());
  std::vector<std::size_t> before_prev(g.symbols.size(), 0);  // sizes at end of round r-2
  std::vector<std::size_t> before_cur(g.symbols.size(), 0);   // sizes at end of round r-1
  std::vector<IOGraph> children;

  for (std::size_t round = 1;; ++round) {
    bool added = false;
    for (const auto& layout : layouts) {
      const std::size_t k = layout.child_positions.size();
      auto fire = [&](const std::vector<std::size_t>& sel) {
        ++sets.selections;
        children.clear();
        for (std::size_t i = 0; i < k; ++i)
          children.push_back(sets.entries(layout.symbols[layout.child_positions[i]])[sel[i]].graph);
        IOGraph d = induce(compose(layout, children));
        if (sets.insert(std::move(d), round, {layout.production, sel})) {
          added = true;
          if (sets.total() > options.max_graphs)
            throw ResourceLimitExceeded("fixpoint: more than " + std::to_string(options.max_graphs) +
                                        " stored graphs");
        }
        return true;
      };
      if (k == 0) {
        if (round == 1) fire({});
        continue;
      }
      // Partition by the first child drawn from the graphs new in round r-1.
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::size_t> lo(k, 0), hi(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t x = layout.symbols[layout.child_positions[i]];
          if (i < j) {
            hi[i] = before_prev[x];
          } else if (i == j) {
            lo[i] = before_prev[x];
            hi[i] = before_cur[x];
          } else {
            hi[i] = before_cur[x];
          }
        }
        detail::for_each_selection(lo, hi, fire);
      }
    }
    if (!added) break;
    sets.rounds = round;
    before_prev = before_cur;
    for (std::size_t x = 0; x < g.symbols.size(); ++x) before_cur[x] = sets.entries(x).size();
  }
  return sets;
}

/// Tree rooted at X whose induced graph is entry `index` of IO(X), rebuilt from provenance.
inline DerivationTree tree_for_entry(const AttributeGrammar& g, const IOSets& sets, std::size_t symbol,
                                     std::size_t index) {
  const IOEntry& e = sets.entries(symbol).at(index);
  const Production& p = g.productions[e.provenance.production];
  DerivationTree t{e.provenance.production, {}};
  std::size_t next = 0;
  for (std::size_t s : p.rhs)
    if (g.symbols[s].is_nonterminal()) t.children.push_back(tree_for_entry(g, sets, s, e.provenance.children[next++]));
  return t;
}

namespace detail {

inline Stats fixpoint_stats(const AttributeGrammar& g, const IOSets& sets, std::uint64_t cycle_selections) {
  Stats st;
  st.iterations = sets.rounds;
  st.stored_graphs = sets.total();
  st.counters = {{"rounds", sets.rounds},
                 {"selections", sets.selections},
                 {"cycle_selections", cycle_selections},
                 {"max_rank", sets.max_rank()}};
  for (std::size_t x : g.nonterminals()) st.io_sizes.emplace_back(g.symbols[x].name, sets.entries(x).size());
  return st;
}

}  // namespace detail

inline Verdict is_circular_fixpoint(const AttributeGrammar& g, const FixpointOptions& options = {}) {
  const auto started = std::chrono::steady_clock::now();
  IOSets sets = io_sets(g, options);
  const auto layouts = make_layouts(g);
  const auto useful = useful_productions(g);

  Verdict v;
  std::uint64_t examined = 0;
  std::vector<IOGraph> children;
  for (const auto& layout : layouts) {
    if (options.reachable_only && !useful[layout.production]) continue;
    const std::size_t k = layout.child_positions.size();
    std::vector<std::size_t> lo(k, 0), hi(k, 0);
    for (std::size_t i = 0; i < k; ++i) hi[i] = sets.entries(layout.symbols[layout.child_positions[i]]).size();
    std::optional<std::vector<std::size_t>> found;
    auto probe = [&](const std::vector<std::size_t>& sel) {
      ++examined;
      children.clear();
      for (std::size_t i = 0; i < k; ++i)
        children.push_back(sets.entries(layout.symbols[layout.child_positions[i]])[sel[i]].graph);
      if (has_cycle(compose(layout, children))) {
        found = sel;
        return false;
      }
      return true;
    };
    detail::for_each_selection(lo, hi, probe);
    if (!found) continue;

    DerivationTree tree{layout.production, {}};
    for (std::size_t i = 0; i < k; ++i)
      tree.children.push_back(tree_for_entry(g, sets, layout.symbols[layout.child_positions[i]], (*found)[i]));
    auto witness = witness_for(g, tree);
    if (!witness) throw std::logic_error("fixpoint: cyclic composition but acyclic witness tree");
    v.outcome = Outcome::circular;
    v.witness = std::move(witness);
    break;
  }
  if (!v.witness) v.outcome = Outcome::non_circular;
  v.stats = detail::fixpoint_stats(g, sets, examined);
  v.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return v;
}

}  // namespace agcirc
