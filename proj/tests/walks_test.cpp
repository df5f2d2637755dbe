#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "pathex/errors.hpp"
#include "pathex/property_checks.hpp"
#include "support/fixtures.hpp"

namespace pathex {
namespace {

using test::loop_graph;
using test::names;

std::vector<std::string> walk_names(const std::vector<Walk>& walks, const GraphView& g) {
  std::vector<std::string> out;
  for (const auto& w : walks) out.push_back(names(w, g));
  std::sort(out.begin(), out.end());
  return out;
}

Walk walk(const HetGraph& g, std::vector<std::string> nodes) {
  return test::walk_through(g, nodes);
}

TEST(EnumerateWalks, LoopGraphThreeEdges) {
  const HetGraph g = loop_graph();
  const auto e = enumerate_walks(g, g.node("A"), 3);
  EXPECT_FALSE(e.truncated);
  std::vector<std::string> expected{"B,A",     "C,A",     "C,B,A",   "D,C,A",   "E,B,A",
                                    "B,C,A",   "D,C,B,A", "B,C,B,A", "C,B,C,A", "E,B,C,A"};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(walk_names(e.walks, g), expected);
  EXPECT_EQ(walk_names(test::forward_walks(g, g.node("A"), 3), g), expected);
}

TEST(EnumerateWalks, OneEdge) {
  const HetGraph g = loop_graph();
  EXPECT_EQ(walk_names(enumerate_walks(g, g.node("A"), 1).walks, g),
            (std::vector<std::string>{"B,A", "C,A"}));
  EXPECT_TRUE(enumerate_walks(g, g.node("D"), 1).walks.empty());
  EXPECT_THROW(enumerate_walks(g, 17, 1), DataError);
}

TEST(EnumerateWalks, ReportsTruncation) {
  const HetGraph g = loop_graph();
  const auto e = enumerate_walks(g, g.node("A"), 3, 4);
  EXPECT_TRUE(e.truncated);
  EXPECT_EQ(e.walks.size(), 4u);
}

TEST(EnumerateWalks, MatchesForwardOracleOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const HetGraph g = random_graph(rng);
    const auto t = static_cast<NodeId>(rng() % g.num_nodes());
    auto a = enumerate_walks(g, t, 4).walks;
    auto b = test::forward_walks(g, t, 4);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(EraseLoops, Examples) {
  const HetGraph g = loop_graph();
  const GraphView v(g);
  EXPECT_EQ(names(erase_loops(walk(g, {"D", "C", "B", "C", "B", "A"})), v), "D,C,B,A");
  const SimplePath p = test::path(g, {"D", "C", "B", "A"});
  EXPECT_EQ(erase_loops(p.as_walk()), p);

  const HetGraph h = test::graph_from_text("x\tt\ny\tt\n", "x\tx\tr\nx\ty\tr\n");
  EXPECT_EQ(names(erase_loops(walk(h, {"x", "x", "y"})), h), "x,y");
}

TEST(EraseLoops, MatchesLastExitOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const HetGraph g = random_graph(rng);
    for (NodeId t = 0; t < g.num_nodes(); ++t) {
      for (const auto& w : enumerate_walks(g, t, 5).walks) {
        const SimplePath p = erase_loops(w);
        ASSERT_EQ(p, test::last_exit_erasure(w));
        EXPECT_EQ(erase_loops(p.as_walk()), p);
      }
    }
  }
}

TEST(IsAssociated, LoopGraphExamples) {
  const HetGraph g = loop_graph();
  const SimplePath p = test::path(g, {"D", "C", "B", "A"});
  EXPECT_TRUE(is_associated(walk(g, {"D", "C", "B", "C", "B", "A"}), p));
  EXPECT_FALSE(is_associated(walk(g, {"D", "C", "A"}), p));
  EXPECT_TRUE(is_associated(p.as_walk(), p));
  // Leaves the path through E, so no suffix qualifies.
  EXPECT_FALSE(is_associated(walk(g, {"E", "B", "A"}), p));
}

TEST(IsAssociated, SelfLoopsAnywhereOnThePath) {
  const HetGraph g = test::graph_from_text("u\tp\nw\tq\nt\tr\n",
                                           "u\tu\tx\nu\tw\tx\nw\tw\tx\nw\tt\tx\nt\tt\tx\n");
  const SimplePath p = test::path(g, {"u", "w", "t"});
  EXPECT_TRUE(is_associated(walk(g, {"u", "u", "w", "w", "t"}), p));
  // A self-loop at the target is a revisit of the target, so the suffix
  // must end at its first arrival.
  EXPECT_FALSE(is_associated(walk(g, {"u", "w", "t", "t"}), p));
}

TEST(IsAssociated, ParallelEdgesAreDistinct) {
  const HetGraph g = test::graph_from_text("u\tp\nt\tq\n", "u\tt\tx\nu\tt\ty\n");
  const SimplePath via_x{{g.node("u"), g.node("t")}, {0}};
  const Walk via_y{{g.node("u"), g.node("t")}, {1}};
  EXPECT_TRUE(is_associated(via_x.as_walk(), via_x));
  EXPECT_FALSE(is_associated(via_y, via_x));
}

TEST(IsAssociated, MatchesDefinitionOracle) {
  std::mt19937_64 rng(21);
  std::size_t positives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const HetGraph g = random_graph(rng);
    const SimplePath p = random_path(g, rng, 3);
    for (const auto& w : enumerate_walks(g, p.target(), 5).walks) {
      const bool got = is_associated(w, p);
      ASSERT_EQ(got, test::associated_by_definition(w, p)) << to_string(w, g) << " / " << to_string(p, g);
      positives += got ? 1 : 0;
    }
  }
  EXPECT_GT(positives, 60u);
}

TEST(AssociatedWalks, LoopGraph) {
  const HetGraph g = loop_graph();
  const GraphView v(g);
  EXPECT_EQ(walk_names(associated_walks(g, test::path(g, {"D", "C", "B", "A"}), 5), v),
            (std::vector<std::string>{"D,C,B,A", "D,C,B,C,B,A"}));
  EXPECT_EQ(walk_names(associated_walks(g, test::path(g, {"E", "B", "A"}), 2), v),
            (std::vector<std::string>{"E,B,A"}));
  EXPECT_TRUE(associated_walks(g, test::path(g, {"D", "C", "B", "A"}), 2).empty());
}

TEST(AssociatedWalks, PathIsItsOwnAssociatedWalk) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const HetGraph g = random_graph(rng);
    const SimplePath p = random_path(g, rng, 4);
    const auto ws = associated_walks(g, p, p.num_edges());
    EXPECT_NE(std::find(ws.begin(), ws.end(), p.as_walk()), ws.end());
    for (const auto& w : ws) EXPECT_GE(w.num_edges(), p.num_edges());
  }
}

TEST(WalksEquivalent, Examples) {
  const HetGraph g = loop_graph();
  const GraphView v(g);
  const Walk dca = walk(g, {"D", "C", "A"});
  EXPECT_TRUE(walks_equivalent(dca, v, dca, v));
  EXPECT_FALSE(walks_equivalent(dca, v, walk(g, {"C", "A"}), v));
  EXPECT_FALSE(walks_equivalent(dca, v, walk(g, {"D", "C", "B"}), v));
  EXPECT_EQ(walk_signature(dca, v) == walk_signature(walk(g, {"E", "B", "A"}), v), false);
}

TEST(Paths, ValidationRejectsBadPaths) {
  const HetGraph g = loop_graph();
  EXPECT_THROW(test::path(g, {"A", "D"}), DataError);
  const Walk cbc = walk(g, {"C", "B", "C"});
  EXPECT_THROW(validate_path(g, SimplePath{cbc.nodes, cbc.edges}), DataError);
  EXPECT_THROW(validate_path(g, SimplePath{{g.node("A")}, {}}), DataError);
  EXPECT_EQ(to_string(walk(g, {"D", "C"}), g), "D -e0-> C");
}

}  // namespace
}  // namespace pathex
