// agcirc/io_graph.hpp - IO graphs, production layouts, composition and projection
//
// An IOGraph d over nonterminal X is a relation d ⊆ Inh(X) × Syn(X), stored
// as a row-major bitset (row = inherited index, column = synthesized index).
// Composing child IOGraphs into D(p) gives an occurrence-level graph whose
// cycles and whose lhs projection drive both circularity checkers.
#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agcirc/grammar.hpp"

namespace agcirc {

class IOGraph {
 public:
  IOGraph() = default;
  IOGraph(std::size_t owner, std::size_t inh_count, std::size_t syn_count)
      : owner_(owner),
        inh_(static_cast<std::uint32_t>(inh_count)),
        syn_(static_cast<std::uint32_t>(syn_count)),
        words_((inh_count * syn_count + 63) / 64, 0) {}

  /// The empty relation over `owner`'s attribute shape.
  static IOGraph empty_for(const AttributeGrammar& g, std::size_t owner) {
    const auto& s = g.symbols.at(owner);
    return IOGraph(owner, s.inh.size(), s.syn.size());
  }

  [[nodiscard]] std::size_t owner() const noexcept { return owner_; }
  [[nodiscard]] std::size_t inh_count() const noexcept { return inh_; }
  [[nodiscard]] std::size_t syn_count() const noexcept { return syn_; }
  [[nodiscard]] std::size_t width() const noexcept { return std::size_t{inh_} * syn_; }

  [[nodiscard]] bool test_bit(std::size_t bit) const { return (words_[bit / 64] >> (bit % 64)) & 1U; }
  void set_bit(std::size_t bit, bool value = true) {
    assert(bit < width());
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    if (value)
      words_[bit / 64] |= mask;
    else
      words_[bit / 64] &= ~mask;
  }
  [[nodiscard]] bool test(std::size_t inh, std::size_t syn) const { return test_bit(inh * syn_ + syn); }
  void set(std::size_t inh, std::size_t syn, bool value = true) { set_bit(inh * syn_ + syn, value); }

  [[nodiscard]] std::size_t popcount() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  [[nodiscard]] bool empty() const noexcept { return popcount() == 0; }

  /// d ⊆ other (same owner assumed).
  [[nodiscard]] bool subset_of(const IOGraph& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < inh_; ++a)
      for (std::size_t b = 0; b < syn_; ++b)
        if (test(a, b)) out.emplace_back(a, b);
    return out;
  }

  [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  /// Hex form, most significant nibble first; bit 0 is pair (inh 0, syn 0).
  [[nodiscard]] std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t nibbles = std::max<std::size_t>(1, (width() + 3) / 4);
    std::string out;
    for (std::size_t n = nibbles; n-- > 0;) {
      unsigned v = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        std::size_t bit = n * 4 + b;
        if (bit < width() && test_bit(bit)) v |= 1U << b;
      }
      out += digits[v];
    }
    return out;
  }

  /// Numeric ordering of the bitset value; owners must match.
  [[nodiscard]] bool value_less(const IOGraph& other) const {
    for (std::size_t i = words_.size(); i-- > 0;)
      if (words_[i] != other.words_[i]) return words_[i] < other.words_[i];
    return false;
  }

  friend bool operator==(const IOGraph& a, const IOGraph& b) {
    return a.owner_ == b.owner_ && a.words_ == b.words_;
  }

  [[nodiscard]] std::size_t hash() const noexcept {
    std::size_t h = std::hash<std::size_t>{}(owner_);
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t owner_ = 0;
  std::uint32_t inh_ = 0;
  std::uint32_t syn_ = 0;
  std::vector<std::uint64_t> words_;
};

struct IOGraphHash {
  std::size_t operator()(const IOGraph& d) const noexcept { return d.hash(); }
};

/// Builds an IOGraph from named (inh, syn) pairs.  Throws GrammarError on unknown names.
inline IOGraph encode_io(const AttributeGrammar& g, std::size_t owner,
                         const std::vector<std::pair<std::string, std::string>>& pairs) {
  const Symbol& sym = g.symbols.at(owner);
  IOGraph d(owner, sym.inh.size(), sym.syn.size());
  auto index_in = [&](const std::vector<std::string>& list, const std::string& name) {
    for (std::size_t i = 0; i < list.size(); ++i)
      if (list[i] == name) return i;
    throw GrammarError("E_UNDECLARED", "'" + name + "' is not an attribute of '" + sym.name + "' of the right kind");
  };
  for (const auto& [a, b] : pairs) d.set(index_in(sym.inh, a), index_in(sym.syn, b));
  return d;
}

inline std::vector<std::pair<std::string, std::string>> decode_io(const AttributeGrammar& g, const IOGraph& d) {
  const Symbol& sym = g.symbols.at(d.owner());
  std::vector<std::pair<std::string, std::string>> out;
  for (auto [a, b] : d.pairs()) out.emplace_back(sym.inh[a], sym.syn[b]);
  return out;
}

/// `{i->s, i2->s1}` with pairs in declaration order.
inline std::string render_io(const AttributeGrammar& g, const IOGraph& d) {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, b] : decode_io(g, d)) {
    out += (first ? "" : ", ") + a + "->" + b;
    first = false;
  }
  return out + "}";
}

/// Plain adjacency-list digraph over vertices 0..n-1.
struct Digraph {
  std::vector<std::vector<std::uint32_t>> adj;

  Digraph() = default;
  explicit Digraph(std::size_t n) : adj(n) {}

  [[nodiscard]] std::size_t size() const noexcept { return adj.size(); }
  void add_edge(std::size_t from, std::size_t to) { adj[from].push_back(static_cast<std::uint32_t>(to)); }
  void normalize() {
    for (auto& row : adj) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
  }
  [[nodiscard]] bool has_edge(std::size_t from, std::size_t to) const {
    const auto& row = adj[from];
    return std::find(row.begin(), row.end(), to) != row.end();
  }
  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t v = 0; v < adj.size(); ++v)
      for (auto w : adj[v]) out.emplace_back(v, w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

/// Iterative three-colour DFS.
inline bool has_cycle(const Digraph& graph) {
  enum : std::uint8_t { white, grey, black };
  std::vector<std::uint8_t> colour(graph.size(), white);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::size_t root = 0; root < graph.size(); ++root) {
    if (colour[root] != white) continue;
    colour[root] = grey;
    stack.emplace_back(static_cast<std::uint32_t>(root), 0);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < graph.adj[v].size()) {
        std::uint32_t w = graph.adj[v][next++];
        if (colour[w] == grey) return true;
        if (colour[w] == white) {
          colour[w] = grey;
          stack.emplace_back(w, 0);
        }
      } else {
        colour[v] = black;
        stack.pop_back();
      }
    }
  }
  return false;
}

/// Vertex numbering of one production's attribute occurrences plus its resolved D(p).
struct ProductionLayout {
  std::size_t production = 0;
  std::vector<std::size_t> symbols;  // per position, 0 = lhs
  std::vector<std::size_t> offsets;  // first vertex of each position
  std::vector<std::size_t> inh_counts;
  std::vector<std::size_t> syn_counts;
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> base_edges;
  std::vector<std::size_t> child_positions;  // rhs positions holding nonterminals

  [[nodiscard]] std::size_t lhs() const { return symbols[0]; }
  [[nodiscard]] std::size_t inh_vertex(std::size_t position, std::size_t a) const { return offsets[position] + a; }
  [[nodiscard]] std::size_t syn_vertex(std::size_t position, std::size_t b) const {
    return offsets[position] + inh_counts[position] + b;
  }
};

inline ProductionLayout make_layout(const AttributeGrammar& g, std::size_t production) {
  const Production& p = g.productions.at(production);
  ProductionLayout layout;
  layout.production = production;
  for (std::size_t pos = 0; pos <= p.rhs.size(); ++pos) {
    const std::size_t sym = p.symbol_at(pos);
    const Symbol& s = g.symbols.at(sym);
    layout.symbols.push_back(sym);
    layout.offsets.push_back(layout.vertex_count);
    layout.inh_counts.push_back(s.inh.size());
    layout.syn_counts.push_back(s.syn.size());
    layout.vertex_count += s.attribute_count();
    if (pos > 0 && s.is_nonterminal()) layout.child_positions.push_back(pos);
  }
  auto vertex = [&](const AttributeOccurrence& occ) {
    auto idx = g.symbols[p.symbol_at(occ.position)].attribute_index(occ.attr);
    if (!idx) throw GrammarError("E_UNDECLARED", "unresolved occurrence " + occ.attr + " in " + p.id);
    return static_cast<std::uint32_t>(layout.offsets[occ.position] + *idx);
  };
  for (const auto& e : p.edges) layout.base_edges.emplace_back(vertex(e.src), vertex(e.dst));
  return layout;
}

inline std::vector<ProductionLayout> make_layouts(const AttributeGrammar& g) {
  std::vector<ProductionLayout> out;
  out.reserve(g.productions.size());
  for (std::size_t i = 0; i < g.productions.size(); ++i) out.push_back(make_layout(g, i));
  return out;
}

/// `attr@position`, e.g. `s@1`.
inline std::string vertex_label(const AttributeGrammar& g, const ProductionLayout& layout, std::size_t v) {
  std::size_t pos = layout.offsets.size() - 1;
  while (layout.offsets[pos] > v || g.symbols[layout.symbols[pos]].attribute_count() == 0) --pos;
  return g.symbols[layout.symbols[pos]].attribute_name(v - layout.offsets[pos]) + "@" + std::to_string(pos);
}

struct ComposedGraph {
  const ProductionLayout* layout = nullptr;
  Digraph graph;
  std::shared_ptr<const ProductionLayout> owned_layout;  // set when composed without a caller-held layout

  /// Sorted, deduplicated edge list as `src->dst` labels.
  [[nodiscard]] std::vector<std::string> edge_labels(const AttributeGrammar& g) const {
    std::vector<std::string> out;
    for (auto [a, b] : graph.edges()) out.push_back(vertex_label(g, *layout, a) + "->" + vertex_label(g, *layout, b));
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// D(p) plus (a@i) -> (b@i) for every (a,b) in children[j], where i = child_positions[j].
inline ComposedGraph compose(const ProductionLayout& layout, std::span<const IOGraph> children) {
  if (children.size() != layout.child_positions.size())
    throw std::invalid_argument("compose: expected " + std::to_string(layout.child_positions.size()) +
                                " child graphs, got " + std::to_string(children.size()));
  ComposedGraph cg{&layout, Digraph(layout.vertex_count), nullptr};
  for (auto [a, b] : layout.base_edges) cg.graph.add_edge(a, b);
  for (std::size_t j = 0; j < children.size(); ++j) {
    const std::size_t pos = layout.child_positions[j];
    const IOGraph& d = children[j];
    if (d.owner() != layout.symbols[pos])
      throw std::invalid_argument("compose: child graph owner does not match rhs position " + std::to_string(pos));
    for (std::size_t a = 0; a < d.inh_count(); ++a)
      for (std::size_t b = 0; b < d.syn_count(); ++b)
        if (d.test(a, b)) cg.graph.add_edge(layout.inh_vertex(pos, a), layout.syn_vertex(pos, b));
  }
  return cg;
}

inline ComposedGraph compose(const AttributeGrammar& g, std::size_t production, std::span<const IOGraph> children) {
  auto layout = std::make_shared<const ProductionLayout>(make_layout(g, production));
  ComposedGraph cg = compose(*layout, children);
  cg.owned_layout = std::move(layout);
  return cg;
}

inline bool has_cycle(const ComposedGraph& cg) { return has_cycle(cg.graph); }

/// Pairs (a,b) of the lhs with a directed path a@0 ~> b@0 in the composed graph.
inline IOGraph induce(const ComposedGraph& cg) {
  const ProductionLayout& layout = *cg.layout;
  IOGraph d(layout.lhs(), layout.inh_counts[0], layout.syn_counts[0]);
  if (d.width() == 0) return d;
  std::vector<std::uint32_t> seen(cg.graph.size(), 0);
  std::vector<std::uint32_t> stack;
  for (std::size_t a = 0; a < layout.inh_counts[0]; ++a) {
    const auto stamp = static_cast<std::uint32_t>(a + 1);
    stack.assign(1, static_cast<std::uint32_t>(layout.inh_vertex(0, a)));
    seen[stack.back()] = stamp;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : cg.graph.adj[v])
        if (seen[w] != stamp) {
          seen[w] = stamp;
          stack.push_back(w);
        }
    }
    for (std::size_t b = 0; b < layout.syn_counts[0]; ++b)
      if (seen[layout.syn_vertex(0, b)] == stamp) d.set(a, b);
  }
  return d;
}

}  // namespace agcirc
