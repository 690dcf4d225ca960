#include <gtest/gtest.h>

#include "support.hpp"

using namespace atomcheck;
using atomcheck::testing::rho;

TEST(Velodrome, Rho1GraphWithoutGc) {
  Velodrome v(VelodromeConfig{false});
  EXPECT_TRUE(v.run(rho(1)).serializable());
  const auto& g = v.graph();
  ASSERT_EQ(g.node_count(), 3u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(Velodrome, GoldenVerdicts) {
  EXPECT_TRUE(run_velodrome(rho(1)).serializable());
  EXPECT_EQ(run_velodrome(rho(2)), Verdict::violation_at(6, CheckSite::cycle));
  // The cycle closes at event 6, before either transaction ends.
  EXPECT_EQ(run_velodrome(rho(3)), Verdict::violation_at(6, CheckSite::cycle));
  EXPECT_EQ(run_velodrome(rho(4)), Verdict::violation_at(11, CheckSite::cycle));
}

TEST(Velodrome, GcCascades) {
  OpCounters c;
  TransactionGraph g(&c);
  auto a = g.add_node(), b = g.add_node(), d = g.add_node();
  EXPECT_TRUE(g.add_edge(a, b));
  EXPECT_TRUE(g.add_edge(b, d));
  g.mark_completed(b);
  g.mark_completed(d);
  EXPECT_EQ(g.gc_graph(), 0u);
  g.mark_completed(a);
  EXPECT_EQ(g.gc_graph(), 3u);
  EXPECT_EQ(g.live_nodes(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Velodrome, AddEdgeRejectsCycle) {
  TransactionGraph g;
  auto a = g.add_node(), b = g.add_node(), d = g.add_node();
  EXPECT_TRUE(g.add_edge(a, b));
  EXPECT_TRUE(g.add_edge(b, d));
  EXPECT_FALSE(g.add_edge(d, a));
  EXPECT_FALSE(g.has_edge(d, a));
  EXPECT_TRUE(g.add_edge(a, a));
  EXPECT_TRUE(g.add_edge(a, d));
}

TEST(Velodrome, GcDoesNotChangeVerdicts) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Trace t = atomcheck::testing::fuzz_trace(s);
    EXPECT_EQ(run_velodrome(t, {true}), run_velodrome(t, {false})) << "seed " << s;
  }
}

TEST(Velodrome, AgreesWithOracleAndVectorClockEngine) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Trace t = atomcheck::testing::fuzz_trace(s);
    Verdict v = run_velodrome(t);
    std::size_t first = first_cyclic_prefix(t);
    EXPECT_EQ(v.violation(), first != 0) << "seed " << s;
    if (first) { EXPECT_EQ(v.at_idx, first) << "seed " << s; }
    // Fuzzed traces close every transaction, so the final verdicts coincide.
    EXPECT_EQ(v.violation(), run_aerodrome(t).violation()) << "seed " << s;
    if (v.violation()) { EXPECT_LE(v.at_idx, run_aerodrome(t).at_idx) << "seed " << s; }
  }
}

TEST(Velodrome, GraphStaysSmallOnLinearWorkload) {
  Trace t = make_linear_trace(20000, 5);
  Velodrome v;
  EXPECT_TRUE(v.run(t).serializable());
  EXPECT_LT(v.graph().live_nodes(), 50u);
}

// Measured before the long transaction ends, which frees the whole chain.
TEST(Velodrome, AdversarialGraphGrowsWithK) {
  auto feed = [](Velodrome& v, std::size_t k) {
    Trace t = make_adversarial_trace(k);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) EXPECT_TRUE(v.process(t.events[i]));
  };
  Velodrome small, large;
  feed(small, 100);
  feed(large, 400);
  EXPECT_EQ(small.graph().live_nodes(), 101u);
  EXPECT_EQ(large.graph().live_nodes(), 401u);
  // Each search walks the whole chain, so work grows quadratically.
  EXPECT_GT(large.counters().compares, 10 * small.counters().compares);
}
