#include "../support/testkit.hpp"

#include <gtest/gtest.h>

using namespace testkit;

namespace {

NodePoolStatus status(const std::string& id, NodePool pool, bool idle = true,
                      std::optional<TimeMs> last = std::nullopt) {
    return {id, pool, NodeState::Ready, idle, ResourceVector::cores(32, 128), last};
}

} // namespace

TEST(BatchSchedule, FifoWithoutBackfill) {
    std::vector<BatchJob> q(3);
    q[0] = {"big", 3, kHour};
    q[1] = {"small", 1, kHour};
    q[2] = {"small2", 1, kHour};
    // Head needs 3 of 2 idle nodes: nothing starts, not even the small ones.
    EXPECT_TRUE(batch_schedule(q, {"n1", "n2"}).empty());
    const auto placed = batch_schedule(q, {"n1", "n2", "n3", "n4"});
    ASSERT_EQ(placed.size(), 2u);
    EXPECT_EQ(placed[0].job, "big");
    EXPECT_EQ(placed[0].nodes, (std::vector<NodeId>{"n1", "n2", "n3"}));
    EXPECT_EQ(placed[1].nodes, (std::vector<NodeId>{"n4"}));
}

TEST(Rebalance, MovesIdleNodesTowardDemand) {
    std::vector<NodePoolStatus> nodes{status("b1", NodePool::Batch), status("b2", NodePool::Batch),
                                      status("c1", NodePool::Container, false)};
    PoolDemand demand;
    demand.container_pending = ResourceVector::cores(64, 64);
    MetaScalePolicy policy;
    const auto moves = rebalance(nodes, demand, policy, kHour);
    ASSERT_EQ(moves.size(), 2u);
    for (const auto& m : moves) EXPECT_EQ(m.to, NodePool::Container);

    demand = {};
    demand.batch_queue_depth = 1;
    nodes = {status("b1", NodePool::Batch, false), status("c1", NodePool::Container),
             status("c2", NodePool::Container, false)};
    const auto back = rebalance(nodes, demand, policy, kHour);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].node, "c1");
    EXPECT_EQ(back[0].to, NodePool::Batch);
}

TEST(Rebalance, HysteresisAndMinimums) {
    PoolDemand demand;
    demand.container_pending = ResourceVector::cores(64, 64);
    MetaScalePolicy policy;
    policy.cooldown = 10 * kMinute;
    std::vector<NodePoolStatus> nodes{status("b1", NodePool::Batch, true, kHour - kMinute),
                                      status("b2", NodePool::Batch, true, kHour - 11 * kMinute)};
    auto moves = rebalance(nodes, demand, policy, kHour);
    ASSERT_EQ(moves.size(), 1u);
    EXPECT_EQ(moves[0].node, "b2");

    policy.min_batch_nodes = 2;
    EXPECT_TRUE(rebalance(nodes, demand, policy, 2 * kHour).empty());
}

TEST(Rebalance, BusyNodesNeverMove) {
    // Property over random pools: only idle, Ready nodes are reassigned.
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(s, "rebalance");
        std::vector<NodePoolStatus> nodes;
        for (int i = 0; i < 8; ++i)
            nodes.push_back(status("n" + std::to_string(i), rng.bernoulli(0.5) ? NodePool::Batch : NodePool::Container,
                                   rng.bernoulli(0.5)));
        PoolDemand demand;
        demand.batch_queue_depth = rng.uniform_int(0, 5);
        demand.container_pending = ResourceVector::cores(rng.uniform_int(0, 200), rng.uniform_int(0, 400));
        for (const auto& m : rebalance(nodes, demand, MetaScalePolicy{}, kHour)) {
            auto it = std::find_if(nodes.begin(), nodes.end(), [&](const auto& n) { return n.node == m.node; });
            ASSERT_NE(it, nodes.end());
            EXPECT_TRUE(it->idle);
            EXPECT_EQ(it->pool, m.from);
            EXPECT_NE(m.from, m.to);
        }
    }
}

TEST(SimMetaScale, BatchTimelineAndRepurposing) {
    std::vector<NodeSpec> nodes;
    for (int i = 0; i < 4; ++i) {
        auto n = node("m" + std::to_string(i), "hpc", 32, 128);
        if (i < 2) n.pool = NodePool::Batch;
        nodes.push_back(n);
    }
    auto cc = cluster("hpc", nodes);
    cc.metascale = true;
    auto cfg = config({cc});
    cfg.sim.duration = 4 * kHour;
    BatchJob a{"a", 2, 30 * kMinute, 0}, b{"b", 2, 30 * kMinute, 0};
    cfg.scenario.jobs = {{a, "hpc"}, {b, "hpc"}};
    Simulator sim(cfg, 1);
    sim.run();
    EXPECT_EQ(sim.job("a").start_time, 0);
    // The second job waits for either the first to finish or two container
    // nodes to be repurposed; either way it starts no later than a's end.
    EXPECT_LE(sim.job("b").start_time, 30 * kMinute);
    EXPECT_EQ(sim.job("b").state, JobState::Done);
    EXPECT_GE(sim.job("b").start_time, cfg.metascale.provisioning_delay);
}
