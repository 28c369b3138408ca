// agcirc/generators.hpp - fixture, exponential-family and random grammars
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "agcirc/grammar.hpp"
#include "agcirc/grammar_io.hpp"

namespace agcirc {

inline AttributeGrammar fixture_grammar(const std::string& name) {
  AttributeGrammar g;
  if (name == "EPS") {
    g.symbols = {{"S", SymbolKind::nonterminal, {}, {}}};
    g.productions = {{"p1", 0, {}, {}}};
    return g;
  }
  if (name == "G1" || name == "G2") {
    g.symbols = {{"S", SymbolKind::nonterminal, {}, {"v"}}, {"A", SymbolKind::nonterminal, {"i"}, {"s"}}};
    Production p1{"p1", 0, {1}, {}};
    if (name == "G1") p1.edges.push_back({{1, "s"}, {1, "i"}});
    p1.edges.push_back({{1, "s"}, {0, "v"}});
    g.productions = {p1, {"p2", 1, {}, {{{0, "i"}, {0, "s"}}}}};
    return g;
  }
  throw std::invalid_argument("unknown fixture '" + name + "' (expected EPS, G1 or G2)");
}

inline std::string gen_fixture(const std::string& name) { return serialize_ag(fixture_grammar(name)); }

/// A with inh i1..in and syn s1..sn.  p0: A -> ε; pj: A -> A copies every
/// (ik, sk), k != j, through the child and adds ij -> sj locally, so IO(A)
/// is every subset of the diagonal.  With `trigger`, S -> A feeds each sj
/// back into ij, which is circular.
inline AttributeGrammar expio_grammar(std::size_t n, bool trigger) {
  if (n < 1 || n > 16) throw std::invalid_argument("expio: n must be in 1..16");
  AttributeGrammar g;
  Symbol a{"A", SymbolKind::nonterminal, {}, {}};
  for (std::size_t j = 1; j <= n; ++j) {
    a.inh.push_back("i" + std::to_string(j));
    a.syn.push_back("s" + std::to_string(j));
  }
  std::size_t a_index = 0;
  if (trigger) {
    g.symbols.push_back({"S", SymbolKind::nonterminal, {}, {"z"}});
    a_index = 1;
  }
  g.symbols.push_back(a);
  g.start = 0;

  g.productions.push_back({"p0", a_index, {}, {}});
  for (std::size_t j = 1; j <= n; ++j) {
    Production p{"p" + std::to_string(j), a_index, {a_index}, {}};
    for (std::size_t k = 1; k <= n; ++k) {
      const std::string ik = "i" + std::to_string(k), sk = "s" + std::to_string(k);
      if (k == j) {
        p.edges.push_back({{0, ik}, {0, sk}});
      } else {
        p.edges.push_back({{0, ik}, {1, ik}});
        p.edges.push_back({{1, sk}, {0, sk}});
      }
    }
    g.productions.push_back(std::move(p));
  }
  if (trigger) {
    Production pr{"pr", 0, {a_index}, {}};
    for (std::size_t j = 1; j <= n; ++j) pr.edges.push_back({{1, "s" + std::to_string(j)}, {1, "i" + std::to_string(j)}});
    pr.edges.push_back({{1, "s1"}, {0, "z"}});
    g.productions.push_back(std::move(pr));
  }
  return g;
}

inline std::string gen_expio(std::size_t n, bool trigger) { return serialize_ag(expio_grammar(n, trigger)); }

struct RandomBounds {
  std::size_t max_nonterminals = 3;
  std::size_t max_inh = 2;
  std::size_t max_syn = 2;
  std::size_t max_productions = 5;
  std::size_t max_rhs = 3;
  std::size_t terminals = 1;
  double edge_density = 0.12;  // probability of each admissible (source, target) edge
  double productivity = 0.9;   // probability that a nonterminal gets a terminal-only production
};

struct GenSpec {
  enum class Family { fixture, expio, random };
  Family family = Family::random;
  std::string fixture;  // fixture
  std::size_t n = 1;    // expio
  bool trigger = false; // expio
  std::uint64_t seed = 0;
  RandomBounds bounds;
};

/// Deterministic in (seed, bounds).  Only the raw mt19937_64 stream is used,
/// so output does not depend on the standard library's distributions.
inline AttributeGrammar random_grammar(std::uint64_t seed, const RandomBounds& b) {
  if (b.max_nonterminals < 1 || b.max_productions < 1)
    throw std::invalid_argument("random: need at least one nonterminal and one production");
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t n) { return n == 0 ? std::size_t{0} : static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };

  AttributeGrammar g;
  const std::size_t n_nt = 1 + below(b.max_nonterminals);
  for (std::size_t x = 0; x < n_nt; ++x) {
    Symbol s{"X" + std::to_string(x), SymbolKind::nonterminal, {}, {}};
    const std::size_t n_inh = below(b.max_inh + 1), n_syn = below(b.max_syn + 1);
    for (std::size_t i = 0; i < n_inh; ++i) s.inh.push_back("i" + std::to_string(i));
    for (std::size_t i = 0; i < n_syn; ++i) s.syn.push_back("s" + std::to_string(i));
    g.symbols.push_back(std::move(s));
  }
  for (std::size_t t = 0; t < b.terminals; ++t) g.symbols.push_back({"t" + std::to_string(t), SymbolKind::terminal, {}, {}});
  g.start = 0;

  auto random_terminal = [&]() { return n_nt + below(b.terminals); };
  const std::size_t lo = std::min(n_nt, b.max_productions);
  const std::size_t n_prod = lo + below(b.max_productions - lo + 1);
  for (std::size_t x = 0; x < n_nt && g.productions.size() < n_prod; ++x) {
    if (!chance(b.productivity)) continue;
    Production p{"", x, {}, {}};
    if (b.terminals > 0)
      for (std::size_t len = below(b.max_rhs + 1); len > 0; --len) p.rhs.push_back(random_terminal());
    g.productions.push_back(std::move(p));
  }
  while (g.productions.size() < n_prod) {
    Production p{"", below(n_nt), {}, {}};
    for (std::size_t len = below(b.max_rhs + 1); len > 0; --len)
      p.rhs.push_back(b.terminals == 0 || chance(0.8) ? below(n_nt) : random_terminal());
    g.productions.push_back(std::move(p));
  }

  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    Production& p = g.productions[i];
    p.id = "p" + std::to_string(i);
    std::vector<AttributeOccurrence> all, targets;
    for (std::size_t pos = 0; pos <= p.rhs.size(); ++pos) {
      const Symbol& s = g.symbols[p.symbol_at(pos)];
      for (const auto& a : s.inh) {
        all.push_back({pos, a});
        if (pos > 0) targets.push_back({pos, a});
      }
      for (const auto& a : s.syn) {
        all.push_back({pos, a});
        if (pos == 0) targets.push_back({pos, a});
      }
    }
    for (const auto& dst : targets)
      for (const auto& src : all)
        if (!(src == dst) && chance(b.edge_density)) p.edges.push_back({src, dst});
  }
  return g;
}

inline std::string gen_random(std::uint64_t seed, const RandomBounds& bounds = {}) {
  return serialize_ag(random_grammar(seed, bounds));
}

inline std::string generate(const GenSpec& spec) {
  switch (spec.family) {
    case GenSpec::Family::fixture:
      return gen_fixture(spec.fixture);
    case GenSpec::Family::expio:
      return gen_expio(spec.n, spec.trigger);
    case GenSpec::Family::random:
      return gen_random(spec.seed, spec.bounds);
  }
  return {};
}

}  // namespace agcirc
