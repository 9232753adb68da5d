#include "../support/testkit.hpp"

#include "fedsched/errors.hpp"

#include <gtest/gtest.h>

using namespace testkit;

TEST(Graph, CentralBuildsHubToLeaves) {
    const auto g = build_central("hub", {"a", "b", "c"});
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_EQ(g.targets_of("hub"), (std::set<ClusterId>{"a", "b", "c"}));
    EXPECT_EQ(g.sources_of("b"), (std::set<ClusterId>{"hub"}));
    EXPECT_TRUE(g.targets_of("a").empty());
    EXPECT_THROW(build_central("hub", {"hub"}), HubInLeaves);
}

TEST(Graph, BurstWithAndWithoutSelfTarget) {
    EXPECT_EQ(build_burst("l", "c", true).edge_count(), 2u);
    EXPECT_EQ(build_burst("l", "c", false).edge_count(), 1u);
    EXPECT_TRUE(build_burst("l", "c", true).has_edge("l", "l"));
}

TEST(Graph, CompleteGraphCounts) {
    const std::set<ClusterId> ids{"a", "b", "c", "d"};
    EXPECT_EQ(complete_pairs(ids, false).size(), 12u);
    EXPECT_EQ(complete_pairs(ids, true).size(), 16u);
    EXPECT_EQ(build_decentralized(ids, complete_pairs(ids, true)).edge_count(), 16u);
}

TEST(Graph, UnknownClusterAndReAdd) {
    FederationGraph g({"a", "b"});
    EXPECT_THROW(g.add_edge("a", "z"), UnknownCluster);
    g.add_edge("a", "b", {5, 0});
    g.add_edge("a", "b", {7, 1});
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.edge("a", "b").latency, (LatencyModel{7, 1}));
    // Two-cycles are legal.
    g.add_edge("b", "a");
    EXPECT_TRUE(g.has_edge("b", "a"));
}

TEST(Graph, DualViewsAgree) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto g = random_federation(s).graph;
        std::size_t out = 0, in = 0;
        for (const auto& c : g.clusters()) {
            out += g.targets_of(c).size();
            in += g.sources_of(c).size();
            for (const auto& t : g.targets_of(c)) EXPECT_TRUE(g.sources_of(t).contains(c));
        }
        EXPECT_EQ(out, g.edge_count());
        EXPECT_EQ(in, g.edge_count());
    }
}
