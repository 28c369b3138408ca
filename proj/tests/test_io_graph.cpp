#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "agcirc/agcirc.hpp"
#include "support/oracles.hpp"

using namespace agcirc;

namespace {

AttributeGrammar shape_grammar() {
  return parse_ag(
      "nonterminal X inh(a, b) syn(x, y)\n"
      "nonterminal E\n"
      "production p: X -> ;\n"
      "production q: E -> ;\n");
}

std::vector<IOGraph> one(IOGraph d) { return {std::move(d)}; }

}  // namespace

TEST_CASE("encode_io examples") {
  const auto g = shape_grammar();
  CHECK(encode_io(g, 1, {}).width() == 0);
  CHECK(encode_io(g, 1, {}).to_hex() == "0");

  const auto none = encode_io(g, 0, {});
  CHECK(none.popcount() == 0);
  CHECK(none.to_hex() == "0");

  const auto first = encode_io(g, 0, {{"a", "x"}});
  CHECK(first.to_hex() == "1");
  CHECK(first.test(0, 0));

  const auto all = encode_io(g, 0, {{"a", "x"}, {"a", "y"}, {"b", "x"}, {"b", "y"}});
  CHECK(all.to_hex() == "f");
  CHECK(all.popcount() == 4);

  // row-major: (b, x) is bit 2
  CHECK(encode_io(g, 0, {{"b", "x"}}).to_hex() == "4");
  CHECK_THROWS_AS(encode_io(g, 0, {{"x", "a"}}), GrammarError);
  CHECK(render_io(g, all) == "{a->x, a->y, b->x, b->y}");
}

TEST_CASE("encode/decode is a bijection on every relation of a 2x2 shape") {
  const auto g = shape_grammar();
  std::set<std::string> seen;
  for (unsigned v = 0; v < 16; ++v) {
    IOGraph d = IOGraph::empty_for(g, 0);
    for (unsigned bit = 0; bit < 4; ++bit)
      if (v >> bit & 1U) d.set_bit(bit);
    const auto back = encode_io(g, 0, decode_io(g, d));
    CHECK(back == d);
    seen.insert(d.to_hex());
  }
  CHECK(seen.size() == 16);
}

TEST_CASE("compose examples on G1 and G2") {
  const auto g1 = fixture_grammar("G1");
  SECTION("epsilon production p2") {
    const auto cg = compose(g1, 1, std::vector<IOGraph>{});
    CHECK(cg.edge_labels(g1) == std::vector<std::string>{"i@0->s@0"});
    CHECK_FALSE(has_cycle(cg));
    CHECK(induce(cg) == encode_io(g1, 1, {{"i", "s"}}));
  }
  SECTION("p1 with the child relation {(i,s)}") {
    const auto cg = compose(g1, 0, one(encode_io(g1, 1, {{"i", "s"}})));
    CHECK(cg.edge_labels(g1) == std::vector<std::string>{"i@1->s@1", "s@1->i@1", "s@1->v@0"});
    CHECK(has_cycle(cg));
  }
  SECTION("p1 with the empty child relation") {
    CHECK_FALSE(has_cycle(compose(g1, 0, one(IOGraph::empty_for(g1, 1)))));
  }
  SECTION("G2 stays acyclic") {
    const auto g2 = fixture_grammar("G2");
    const auto cg = compose(g2, 0, one(encode_io(g2, 1, {{"i", "s"}})));
    CHECK_FALSE(has_cycle(cg));
    CHECK(induce(cg).popcount() == 0);
  }
  SECTION("argument checks") {
    CHECK_THROWS_AS(compose(g1, 0, std::vector<IOGraph>{}), std::invalid_argument);
    CHECK_THROWS_AS(compose(g1, 0, one(IOGraph::empty_for(g1, 0))), std::invalid_argument);
  }
}

TEST_CASE("induce follows paths through children") {
  // S.i -> A.i, A.s -> B.i, B.s -> S.s; with both children passing i to s, S gets (i, s).
  const auto g = parse_ag(
      "nonterminal S inh(i) syn(s)\n"
      "nonterminal A inh(i) syn(s)\n"
      "nonterminal B inh(i) syn(s)\n"
      "production p: S -> A B { S.i -> A.i; A.s -> B.i; B.s -> S.s; }\n"
      "production a: A -> ;\nproduction b: B -> ;\n");
  const auto a = encode_io(g, 1, {{"i", "s"}});
  const auto b = encode_io(g, 2, {{"i", "s"}});
  CHECK(induce(compose(g, 0, std::vector<IOGraph>{a, b})) == encode_io(g, 0, {{"i", "s"}}));
  CHECK(induce(compose(g, 0, std::vector<IOGraph>{a, IOGraph::empty_for(g, 2)})).popcount() == 0);
  CHECK(induce(compose(g, 0, std::vector<IOGraph>{IOGraph::empty_for(g, 1), b})).popcount() == 0);
}

TEST_CASE("induce on a three-edge path") {
  const auto g = parse_ag(
      "nonterminal S inh(i) syn(s)\n"
      "nonterminal A inh(j) syn(t)\n"
      "production p: S -> A { S.i -> A.j; A.t -> S.s; }\n"
      "production a: A -> ;\n");
  CHECK(induce(compose(g, 0, one(encode_io(g, 1, {{"j", "t"}})))) == encode_io(g, 0, {{"i", "s"}}));
}

TEST_CASE("has_cycle basics") {
  Digraph empty(3);
  CHECK_FALSE(has_cycle(empty));
  Digraph loop(1);
  loop.add_edge(0, 0);
  CHECK(has_cycle(loop));
  Digraph dag(4);
  dag.add_edge(0, 1);
  dag.add_edge(0, 2);
  dag.add_edge(1, 3);
  dag.add_edge(2, 3);
  CHECK_FALSE(has_cycle(dag));
  dag.add_edge(3, 0);
  CHECK(has_cycle(dag));
}

TEST_CASE("has_cycle agrees with a Warshall closure on random graphs") {
  std::mt19937_64 rng(20261015);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const double density = static_cast<double>(rng() % 100) / 400.0;
    Digraph g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (static_cast<double>(rng() % 1000) / 1000.0 < density) g.add_edge(a, b);
    REQUIRE(has_cycle(g) == testing::closure_has_cycle(g));
  }
}

TEST_CASE("induce agrees with closure and is monotone on random grammars") {
  RandomBounds bounds;
  bounds.edge_density = 0.2;
  std::mt19937_64 rng(7);
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto g = random_grammar(seed, bounds);
    for (std::size_t p = 0; p < g.productions.size(); ++p) {
      const auto layout = make_layout(g, p);
      std::vector<IOGraph> small, big;
      for (std::size_t pos : layout.child_positions) {
        IOGraph d = IOGraph::empty_for(g, layout.symbols[pos]);
        IOGraph e = d;
        for (std::size_t bit = 0; bit < d.width(); ++bit) {
          const auto r = rng() % 3;
          if (r == 0) d.set_bit(bit);
          if (r <= 1) e.set_bit(bit);
        }
        small.push_back(d);
        big.push_back(e);
      }
      const auto cs = compose(layout, small);
      const auto cb = compose(layout, big);

      // projection by closure
      const auto closure = testing::warshall(testing::adjacency(cs.graph));
      IOGraph expected = IOGraph::empty_for(g, layout.lhs());
      for (std::size_t a = 0; a < layout.inh_counts[0]; ++a)
        for (std::size_t b = 0; b < layout.syn_counts[0]; ++b)
          if (closure[layout.inh_vertex(0, a)][layout.syn_vertex(0, b)]) expected.set(a, b);
      REQUIRE(induce(cs) == expected);
      REQUIRE(has_cycle(cs) == testing::closure_has_cycle(cs.graph));

      REQUIRE(induce(cs).subset_of(induce(cb)));
      if (has_cycle(cs)) REQUIRE(has_cycle(cb));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("value ordering and hex agree") {
  const auto g = shape_grammar();
  const auto a = encode_io(g, 0, {{"a", "y"}});  // bit 1
  const auto b = encode_io(g, 0, {{"b", "x"}});  // bit 2
  CHECK(a.value_less(b));
  CHECK_FALSE(b.value_less(a));
  CHECK(a.to_hex() == "2");
  CHECK(IOGraphHash{}(a) == IOGraphHash{}(encode_io(g, 0, {{"a", "y"}})));
}
