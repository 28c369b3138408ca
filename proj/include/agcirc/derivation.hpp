// agcirc/derivation.hpp - instantiated dependency graphs of derivation trees
//
// The graph of a tree glues one copy of D(p) per node: an occurrence at rhs
// position i of a node is the same vertex as the position-0 occurrence at
// the child rooted there.  A tree is circular iff this graph has a cycle.
#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "agcirc/grammar.hpp"
#include "agcirc/io_graph.hpp"
#include "agcirc/verdict.hpp"

namespace agcirc {

/// Dotted form: root is "0", its child at rhs position 2 is "0.2".
inline std::string path_string(const NodePath& path) {
  std::string out = "0";
  for (auto step : path) out += "." + std::to_string(step);
  return out;
}

/// True when every node's production exists, its child count matches the
/// production's nonterminal positions and each child derives the right symbol.
inline bool well_formed(const AttributeGrammar& g, const DerivationTree& t) {
  if (t.production >= g.productions.size()) return false;
  const Production& p = g.productions[t.production];
  std::size_t next = 0;
  for (std::size_t s : p.rhs) {
    if (s >= g.symbols.size()) return false;
    if (!g.symbols[s].is_nonterminal()) continue;
    if (next >= t.children.size()) return false;
    const auto& child = t.children[next++];
    if (child.production >= g.productions.size() || g.productions[child.production].lhs != s) return false;
    if (!well_formed(g, child)) return false;
  }
  return next == t.children.size();
}

struct TreeGraph {
  std::vector<NodePath> paths;          // per node, preorder
  std::vector<std::size_t> node_symbol;  // lhs symbol of each node
  std::vector<std::size_t> offsets;      // first vertex of each node
  std::vector<std::size_t> vertex_node;  // owning node of each vertex
  Digraph graph;

  /// `0.1:i`
  [[nodiscard]] std::string vertex_label(const AttributeGrammar& g, std::size_t v) const {
    const std::size_t node = vertex_node[v];
    return path_string(paths[node]) + ":" + g.symbols[node_symbol[node]].attribute_name(v - offsets[node]);
  }

  [[nodiscard]] std::optional<std::size_t> vertex_of(const AttributeGrammar& g, const WitnessVertex& wv) const {
    for (std::size_t n = 0; n < paths.size(); ++n)
      if (paths[n] == wv.path) {
        auto idx = g.symbols[node_symbol[n]].attribute_index(wv.attr);
        if (!idx) return std::nullopt;
        return offsets[n] + *idx;
      }
    return std::nullopt;
  }
};

/// Requires well_formed(g, t).
inline TreeGraph tree_graph(const AttributeGrammar& g, const DerivationTree& t) {
  TreeGraph tg;
  std::size_t vertices = 0;
  struct Pending {
    const DerivationTree* tree;
    NodePath path;
  };
  std::vector<Pending> order;
  // Preorder numbering; children pushed in reverse so they pop in rhs order.
  std::vector<Pending> stack{{&t, {}}};
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    const Production& p = g.productions[cur.tree->production];
    tg.paths.push_back(cur.path);
    tg.node_symbol.push_back(p.lhs);
    tg.offsets.push_back(vertices);
    vertices += g.symbols[p.lhs].attribute_count();
    std::vector<Pending> kids;
    std::size_t next = 0;
    for (std::size_t pos = 1; pos <= p.rhs.size(); ++pos)
      if (g.symbols[p.rhs[pos - 1]].is_nonterminal()) {
        NodePath child = cur.path;
        child.push_back(pos);
        kids.push_back({&cur.tree->children[next++], std::move(child)});
      }
    order.push_back(std::move(cur));
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
  }

  tg.vertex_node.resize(vertices);
  for (std::size_t n = 0; n < tg.offsets.size(); ++n)
    for (std::size_t k = 0; k < g.symbols[tg.node_symbol[n]].attribute_count(); ++k)
      tg.vertex_node[tg.offsets[n] + k] = n;
  tg.graph = Digraph(vertices);

  // Node index of every (node, position) pair.
  std::vector<std::size_t> node_index_of_child;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const Production& p = g.productions[order[n].tree->production];
    std::vector<std::size_t> at_position(p.rhs.size() + 1, SIZE_MAX);
    at_position[0] = n;
    for (std::size_t m = n + 1; m < order.size(); ++m) {
      const auto& path = order[m].path;
      if (path.size() == order[n].path.size() + 1 &&
          std::equal(order[n].path.begin(), order[n].path.end(), path.begin()))
        at_position[path.back()] = m;
    }
    for (const auto& e : p.edges) {
      const std::size_t src_node = at_position[e.src.position];
      const std::size_t dst_node = at_position[e.dst.position];
      const std::size_t src =
          tg.offsets[src_node] + *g.symbols[tg.node_symbol[src_node]].attribute_index(e.src.attr);
      const std::size_t dst =
          tg.offsets[dst_node] + *g.symbols[tg.node_symbol[dst_node]].attribute_index(e.dst.attr);
      tg.graph.add_edge(src, dst);
    }
  }
  tg.graph.normalize();
  return tg;
}

/// A shortest cycle of the graph, starting at the lowest-numbered vertex that
/// lies on some shortest cycle.  Deleting any vertex from it leaves a sequence
/// that is not a closed walk.
inline std::optional<std::vector<std::size_t>> shortest_cycle(const Digraph& graph) {
  std::optional<std::vector<std::size_t>> best;
  std::vector<std::size_t> parent(graph.size());
  std::vector<std::size_t> dist(graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    std::deque<std::size_t> queue;
    // BFS from v over paths of length >= 1 back to v.
    std::optional<std::size_t> closing;
    for (auto w : graph.adj[v]) {
      if (w == v) {
        closing = v;
        break;
      }
      if (dist[w] == SIZE_MAX) {
        dist[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
    while (!closing && !queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      if (best && dist[u] + 1 >= best->size()) break;
      for (auto w : graph.adj[u]) {
        if (w == v) {
          closing = u;
          break;
        }
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        }
      }
    }
    if (!closing) continue;
    std::vector<std::size_t> cycle;
    if (*closing != v)
      for (std::size_t u = *closing; u != v; u = parent[u]) cycle.push_back(u);
    cycle.push_back(v);
    std::reverse(cycle.begin(), cycle.end());
    if (!best || cycle.size() < best->size()) best = std::move(cycle);
    if (best->size() == 1) break;
  }
  return best;
}

/// Witness for a tree whose graph is cyclic, or nullopt when it is acyclic.
inline std::optional<Witness> witness_for(const AttributeGrammar& g, const DerivationTree& t) {
  TreeGraph tg = tree_graph(g, t);
  auto cycle = shortest_cycle(tg.graph);
  if (!cycle) return std::nullopt;
  Witness w{t, {}};
  for (auto v : *cycle) {
    const std::size_t node = tg.vertex_node[v];
    w.cycle.push_back({tg.paths[node], g.symbols[tg.node_symbol[node]].attribute_name(v - tg.offsets[node])});
  }
  return w;
}

inline bool validate_witness(const AttributeGrammar& g, const Witness& w) {
  if (w.cycle.empty() || !well_formed(g, w.tree)) return false;
  TreeGraph tg = tree_graph(g, w.tree);
  std::vector<std::size_t> vs;
  for (const auto& wv : w.cycle) {
    auto v = tg.vertex_of(g, wv);
    if (!v) return false;
    vs.push_back(*v);
  }
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (!tg.graph.has_edge(vs[i], vs[(i + 1) % vs.size()])) return false;
  return true;
}

/// `S:p1(A:p2, B:p3)`
inline std::string render_tree(const AttributeGrammar& g, const DerivationTree& t) {
  const Production& p = g.productions.at(t.production);
  std::string out = g.symbols[p.lhs].name + ":" + p.id;
  if (!t.children.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.children.size(); ++i) out += (i ? ", " : "") + render_tree(g, t.children[i]);
    out += ")";
  }
  return out;
}

/// One line per node, indented by depth and prefixed with its path.
inline std::string render_tree_indented(const AttributeGrammar& g, const DerivationTree& t, const NodePath& path = {}) {
  const Production& p = g.productions.at(t.production);
  std::string out = std::string(2 * path.size(), ' ') + path_string(path) + " " + g.symbols[p.lhs].name + ":" + p.id + "\n";
  std::size_t next = 0;
  for (std::size_t pos = 1; pos <= p.rhs.size(); ++pos)
    if (g.symbols[p.rhs[pos - 1]].is_nonterminal()) {
      NodePath child = path;
      child.push_back(pos);
      out += render_tree_indented(g, t.children[next++], child);
    }
  return out;
}

/// `0.1:i -> 0.1:s -> 0.1:i` (the first vertex is repeated to close the walk).
inline std::string render_cycle(const Witness& w) {
  std::string out;
  for (const auto& v : w.cycle) out += path_string(v.path) + ":" + v.attr + " -> ";
  if (!w.cycle.empty()) out += path_string(w.cycle.front().path) + ":" + w.cycle.front().attr;
  return out;
}

}  // namespace agcirc
