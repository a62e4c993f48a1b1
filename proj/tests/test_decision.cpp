#include <doctest.h>

#include <algorithm>

#include "spp/analysis.hpp"
#include "spp/decision.hpp"

#include "testutil.hpp"

using namespace spp;

TEST_CASE("tie-break names round-trip") {
  for (TieBreak t : {TieBreak::ShortestPathLength, TieBreak::LongestPathLength,
                     TieBreak::LowestNextHopId, TieBreak::HighestNextHopId,
                     TieBreak::LexMinNodeSequence, TieBreak::LexMaxNodeSequence}) {
    auto back = tiebreak_from_name(to_string(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
  CHECK(!tiebreak_from_name("coin-flip").has_value());
}

TEST_CASE("chains must end in a lexicographic criterion") {
  CHECK_THROWS_WITH_AS(DecisionProcess::make({}), doctest::Contains("empty"), SppError);
  CHECK_THROWS_WITH_AS(DecisionProcess::make({TieBreak::ShortestPathLength}),
                       doctest::Contains("lex"), SppError);
  CHECK_NOTHROW(DecisionProcess::make({TieBreak::LexMaxNodeSequence}));
  CHECK(spptest::d_lowest().name() == "lowest-next-hop,lex-min");
}

TEST_CASE("classes dominate every tie-break") {
  // a node with one route per relationship class: customer 300 over peer 200
  // over provider 100
  Graph g = Graph::make({0, 1, 2, 3, 4},
                        {{1, 2}, {1, 3}, {1, 4}, {2, 0}, {3, 0}, {4, 0}});
  PartialRanking pr;
  pr.owner = 1;
  pr.class_of[Path({1, 2, 0})] = 100;
  pr.class_of[Path({1, 3, 0})] = 200;
  pr.class_of[Path({1, 4, 0})] = 300;
  for (const DecisionProcess& d : standard_catalog()) {
    RankingFunction rf = apply(d, pr);
    REQUIRE(rf.ranked.size() == 3);
    CHECK(rf.ranked[0] == Path({1, 4, 0}));
    CHECK(rf.ranked[1] == Path({1, 3, 0}));
    CHECK(rf.ranked[2] == Path({1, 2, 0}));
  }
}

TEST_CASE("strict total partials are reproduced by every process") {
  auto partials = spptest::witness_partials();
  // force distinct classes on node 2's two paths
  partials[2].class_of[Path({2, 0})] = 7;
  partials[2].class_of[Path({2, 1, 0})] = 9;
  const RankingFunction expected{2, {Path({2, 1, 0}), Path({2, 0})}};
  for (const DecisionProcess& d : standard_catalog()) {
    CHECK(apply(d, partials[2]) == expected);
  }
}

TEST_CASE("next-hop tie-breaks order the tied pair both ways") {
  const auto partials = spptest::witness_partials();
  RankingFunction low = apply(spptest::d_lowest(), partials.at(2));
  CHECK(low.ranked == std::vector<Path>{Path({2, 0}), Path({2, 1, 0})});
  RankingFunction high = apply(spptest::d_highest(), partials.at(2));
  CHECK(high.ranked == std::vector<Path>{Path({2, 1, 0}), Path({2, 0})});
}

TEST_CASE("length and lexicographic criteria") {
  Graph g = Graph::make({0, 1, 2, 3}, {{1, 0}, {1, 2}, {2, 0}, {1, 3}, {3, 0}, {2, 3}});
  PartialRanking pr;
  pr.owner = 1;
  for (const Path& p : enumerate_simple_paths(g, 1)) pr.class_of[p] = 1;
  REQUIRE(pr.class_of.size() == 5);

  RankingFunction shortest = apply(
      DecisionProcess::make({TieBreak::ShortestPathLength, TieBreak::LexMinNodeSequence}),
      pr);
  CHECK(shortest.ranked.front() == Path({1, 0}));
  CHECK(shortest.ranked.back().nodes.size() == 4);

  RankingFunction longest = apply(
      DecisionProcess::make({TieBreak::LongestPathLength, TieBreak::LexMaxNodeSequence}),
      pr);
  CHECK(longest.ranked.front().nodes.size() == 4);
  CHECK(longest.ranked.back() == Path({1, 0}));

  RankingFunction lexmax =
      apply(DecisionProcess::make({TieBreak::LexMaxNodeSequence}), pr);
  CHECK(std::is_sorted(lexmax.ranked.begin(), lexmax.ranked.end(),
                       [](const Path& a, const Path& b) { return b < a; }));
}

TEST_CASE("apply preserves consistency, filters, and determinism") {
  spptest::Rng rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    const SppInstance base = spptest::random_instance(rng, 6);
    for (NodeId v : base.graph.nonzero_nodes()) {
      PartialRanking pr;
      pr.owner = v;
      for (const Path& p : base.ranking(v).ranked) pr.class_of[p] = rng.uniform(1, 3);
      for (const DecisionProcess& d : standard_catalog()) {
        const RankingFunction rf = apply(d, pr);
        CHECK(rf == apply(d, pr));  // pure
        REQUIRE(rf.ranked.size() == pr.class_of.size());
        for (const Path& p : rf.ranked) CHECK(pr.class_of.count(p) == 1);
        // class(P1) > class(P2) implies P1 precedes P2
        for (std::size_t i = 0; i < rf.ranked.size(); ++i) {
          for (std::size_t j = i + 1; j < rf.ranked.size(); ++j) {
            CHECK(pr.class_of.at(rf.ranked[i]) >= pr.class_of.at(rf.ranked[j]));
          }
        }
      }
    }
  }
}

TEST_CASE("apply rejects malformed partials") {
  PartialRanking pr;
  pr.owner = 1;
  pr.class_of[Path({2, 0})] = 1;
  CHECK_THROWS_WITH_AS(apply(spptest::d_lowest(), pr), doctest::Contains("owned"),
                       SppError);

  PartialRanking loop;
  loop.owner = 1;
  loop.class_of[Path({1, 2, 1, 0})] = 1;
  CHECK_THROWS_AS(apply(spptest::d_lowest(), loop), SppError);

  // a chain built without make() and unable to totalize
  PartialRanking tied;
  tied.owner = 1;
  tied.class_of[Path({1, 2, 0})] = 1;
  tied.class_of[Path({1, 3, 0})] = 1;
  DecisionProcess bare{{TieBreak::ShortestPathLength}};
  CHECK_THROWS_WITH_AS(apply(bare, tied), doctest::Contains("fails to order"),
                       SppError);
}

TEST_CASE("apply_all packages an instance and validates coverage") {
  const Graph g = spptest::witness_graph();
  auto partials = spptest::witness_partials();

  SppInstance low = apply_all(spptest::d_lowest(), partials, g);
  SppInstance high = apply_all(spptest::d_highest(), partials, g);
  CHECK(low == spptest::witness_lambda());
  CHECK(high == spptest::witness_lambda_prime());

  // the two totalizations are safely distinct at node 2
  DistinctVerdict v = safely_distinct(low, high);
  CHECK(v.distinct);
  CHECK(*v.witness_node == 2);

  partials.erase(1);
  CHECK_THROWS_WITH_AS(apply_all(spptest::d_lowest(), partials, g),
                       doctest::Contains("node 1"), SppError);
}

TEST_CASE("empty class maps filter everything") {
  const Graph g = spptest::witness_graph();
  std::map<NodeId, PartialRanking> partials;
  partials[1] = PartialRanking{1, {}};
  partials[2] = PartialRanking{2, {}};
  SppInstance inst = apply_all(spptest::d_lowest(), partials, g);
  const auto stable = enumerate_stable_states(inst);
  REQUIRE(stable.size() == 1);
  CHECK(stable.front() == all_epsilon(inst));
}
