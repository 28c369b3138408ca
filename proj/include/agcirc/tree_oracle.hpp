// agcirc/tree_oracle.hpp - brute-force ground truth over finite derivation trees
#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "agcirc/derivation.hpp"
#include "agcirc/fixpoint.hpp"
#include "agcirc/grammar.hpp"
#include "agcirc/verdict.hpp"

namespace agcirc {

/// Visitor returns false to stop the enumeration.
using TreeVisitor = std::function<bool(const DerivationTree&)>;

namespace detail {

class TreeEnumerator {
 public:
  explicit TreeEnumerator(const AttributeGrammar& g) : g_(g), by_lhs_(g.symbols.size()), child_symbols_(g.productions.size()) {
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
      by_lhs_[g.productions[i].lhs].push_back(i);
      for (std::size_t s : g.productions[i].rhs)
        if (g.symbols[s].is_nonterminal()) child_symbols_[i].push_back(s);
    }
  }

  // Trees rooted at `symbol` of height <= `height`, production order, first child slowest.
  bool trees(std::size_t symbol, std::size_t height, const TreeVisitor& k) {
    if (height == 0) return true;
    for (std::size_t p : by_lhs_[symbol]) {
      std::vector<DerivationTree> chosen;
      if (!children(p, 0, height - 1, chosen, k)) return false;
    }
    return true;
  }

 private:
  bool children(std::size_t p, std::size_t idx, std::size_t height, std::vector<DerivationTree>& chosen,
                const TreeVisitor& k) {
    if (idx == child_symbols_[p].size()) return k(DerivationTree{p, chosen});
    return trees(child_symbols_[p][idx], height, [&](const DerivationTree& t) {
      chosen.push_back(t);
      bool go_on = children(p, idx + 1, height, chosen, k);
      chosen.pop_back();
      return go_on;
    });
  }

  const AttributeGrammar& g_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  std::vector<std::vector<std::size_t>> child_symbols_;
};

/// Reusable buffers for testing many trees of one grammar for cycles.
class TreeCycleTester {
 public:
  explicit TreeCycleTester(const AttributeGrammar& g) : g_(g), layouts_(make_layouts(g)) {
    for (const auto& layout : layouts_) {
      std::vector<std::uint32_t> pos_of(layout.vertex_count);
      for (std::size_t pos = 0; pos < layout.offsets.size(); ++pos)
        for (std::size_t a = 0; a < g.symbols[layout.symbols[pos]].attribute_count(); ++a)
          pos_of[layout.offsets[pos] + a] = static_cast<std::uint32_t>(pos);
      position_of_.push_back(std::move(pos_of));
    }
  }

  bool cyclic(const DerivationTree& t) {
    edges_.clear();
    vertices_ = 0;
    place(t);
    // CSR adjacency
    start_.assign(vertices_ + 1, 0);
    for (auto [a, b] : edges_) ++start_[a + 1];
    for (std::size_t v = 0; v < vertices_; ++v) start_[v + 1] += start_[v];
    target_.resize(edges_.size());
    fill_.assign(start_.begin(), start_.end() - 1);
    for (auto [a, b] : edges_) target_[fill_[a]++] = b;

    colour_.assign(vertices_, 0);
    for (std::uint32_t root = 0; root < vertices_; ++root) {
      if (colour_[root] != 0) continue;
      colour_[root] = 1;
      stack_.assign(1, {root, start_[root]});
      while (!stack_.empty()) {
        auto& [v, next] = stack_.back();
        if (next < start_[v + 1]) {
          std::uint32_t w = target_[next++];
          if (colour_[w] == 1) return true;
          if (colour_[w] == 0) {
            colour_[w] = 1;
            stack_.push_back({w, start_[w]});
          }
        } else {
          colour_[v] = 2;
          stack_.pop_back();
        }
      }
    }
    return false;
  }

 private:
  // Assigns vertices to the subtree rooted at t (lhs attributes first) and returns the first one.
  std::uint32_t place(const DerivationTree& t) {
    const ProductionLayout& layout = layouts_[t.production];
    const std::uint32_t base = vertices_;
    vertices_ += static_cast<std::uint32_t>(g_.symbols[layout.lhs()].attribute_count());
    std::vector<std::uint32_t> at(layout.offsets.size(), 0);
    at[0] = base;
    for (std::size_t j = 0; j < layout.child_positions.size(); ++j) at[layout.child_positions[j]] = place(t.children[j]);
    const auto& pos_of = position_of_[t.production];
    for (auto [a, b] : layout.base_edges) {
      const auto pa = pos_of[a], pb = pos_of[b];
      edges_.emplace_back(at[pa] + (a - static_cast<std::uint32_t>(layout.offsets[pa])),
                          at[pb] + (b - static_cast<std::uint32_t>(layout.offsets[pb])));
    }
    return base;
  }

  const AttributeGrammar& g_;
  std::vector<ProductionLayout> layouts_;
  std::vector<std::vector<std::uint32_t>> position_of_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::uint32_t vertices_ = 0;
  std::vector<std::uint32_t> start_, target_, fill_;
  std::vector<std::uint8_t> colour_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack_;
};

}  // namespace detail

/// Every tree rooted at `root` of height <= max_depth (a single node has height 1),
/// each exactly once, production declaration order, depth-first.
inline void enumerate_trees(const AttributeGrammar& g, std::size_t root, std::size_t max_depth,
                            const TreeVisitor& visit) {
  detail::TreeEnumerator(g).trees(root, max_depth, visit);
}

inline std::vector<DerivationTree> collect_trees(const AttributeGrammar& g, std::size_t root, std::size_t max_depth) {
  std::vector<DerivationTree> out;
  enumerate_trees(g, root, max_depth, [&](const DerivationTree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

/// Height bound within which a circular grammar has a circular tree: 1 plus the
/// highest rank among IO sets of nonterminals that occur on some rhs.  In
/// start-symbol mode the path from the start symbol is added on top.
inline std::size_t sufficient_depth(const AttributeGrammar& g, bool reachable_only = false,
                                    std::size_t max_graphs = FixpointOptions{}.max_graphs) {
  IOSets sets = io_sets(g, FixpointOptions{max_graphs, false});
  if (reachable_only) return g.nonterminals().size() + sets.max_rank();
  std::vector<bool> on_rhs(g.symbols.size(), false);
  for (const auto& p : g.productions)
    for (std::size_t s : p.rhs) on_rhs[s] = true;
  std::size_t rank = 0;
  for (std::size_t x = 0; x < g.symbols.size(); ++x)
    if (on_rhs[x])
      for (const auto& e : sets.entries(x)) rank = std::max(rank, e.rank);
  return 1 + rank;
}

struct OracleOptions {
  std::size_t max_depth = 1;
  /// Known sufficient depth; when max_depth reaches it, "no cycle" means NonCircular.
  std::optional<std::size_t> sufficient;
  std::uint64_t max_nodes = 10'000'000;
  bool reachable_only = false;  // trees rooted at the start symbol only
};

inline Verdict oracle_check(const AttributeGrammar& g, const OracleOptions& options) {
  require_valid(g);
  const auto started = std::chrono::steady_clock::now();
  detail::TreeEnumerator enumerator(g);
  detail::TreeCycleTester tester(g);
  std::uint64_t trees = 0, nodes = 0;
  std::optional<DerivationTree> cyclic;

  std::vector<std::size_t> roots = options.reachable_only ? std::vector<std::size_t>{g.start} : g.nonterminals();
  for (std::size_t root : roots) {
    enumerator.trees(root, options.max_depth, [&](const DerivationTree& t) {
      ++trees;
      nodes += t.size();
      if (nodes > options.max_nodes)
        throw ResourceLimitExceeded("oracle: more than " + std::to_string(options.max_nodes) + " tree nodes");
      if (tester.cyclic(t)) {
        cyclic = t;
        return false;
      }
      return true;
    });
    if (cyclic) break;
  }

  Verdict v;
  v.depth = options.max_depth;
  if (cyclic) {
    v.outcome = Outcome::circular;
    v.witness = witness_for(g, *cyclic);
    if (!v.witness) throw std::logic_error("oracle: tree reported cyclic but no cycle found");
  } else if (options.sufficient && options.max_depth >= *options.sufficient) {
    v.outcome = Outcome::non_circular;
  } else {
    v.outcome = Outcome::no_cycle_within_depth;
  }
  v.stats.iterations = trees;
  v.stats.counters = {{"trees", trees}, {"nodes", nodes}};
  v.stats.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return v;
}

/// Oracle at max_depth, strengthened to NonCircular when max_depth >= sufficient_depth(g).
inline Verdict oracle_check(const AttributeGrammar& g, std::size_t max_depth) {
  OracleOptions options;
  options.max_depth = max_depth;
  try {
    options.sufficient = sufficient_depth(g);
  } catch (const ResourceLimitExceeded&) {
  }
  return oracle_check(g, options);
}

}  // namespace agcirc
