#include "../support/testkit.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace testkit;

namespace {

SchedulingSnapshot snapshot(const std::vector<NodeSpec>& nodes) {
    return SchedulingSnapshot::of(ClusterState(ClusterSpec{"c", nodes, {}, {}}));
}

// Independent reference: every dimension with capacity, free after placement.
double reference_least_allocated(const ResourceVector& cap, const ResourceVector& alloc, const ResourceVector& req) {
    double sum = 0;
    int dims = 0;
    auto add = [&](double c, double a, double r) {
        if (c == 0) return;
        sum += std::max(0.0, a - r) / c;
        ++dims;
    };
    add(cap.cpu_millicores, alloc.cpu_millicores, req.cpu_millicores);
    add(cap.memory_bytes, alloc.memory_bytes, req.memory_bytes);
    add(cap.gpu_count, alloc.gpu_count, req.gpu_count);
    return dims ? std::round(100 * sum / dims) : 0;
}

} // namespace

TEST(LeastAllocated, FreeFractions) {
    const auto cap = ResourceVector::cores(10, 10);
    EXPECT_EQ(least_allocated(cap, cap, ResourceVector::cores(9, 9)), 10);
    EXPECT_EQ(least_allocated(cap, cap, ResourceVector::cores(5, 5)), 50);
    EXPECT_EQ(least_allocated(cap, cap, ResourceVector::cores(1, 1)), 90);
    // Zero-capacity dimensions (no GPU) do not dilute the mean.
    EXPECT_EQ(least_allocated(cap, cap, ResourceVector::cores(1, 1, 0)), 90);
    EXPECT_EQ(least_allocated(ResourceVector{}, ResourceVector{}, ResourceVector{}), 0);
}

TEST(LeastAllocated, MatchesReferenceOnRandomInputs) {
    Rng rng(3, "la");
    for (int i = 0; i < 2000; ++i) {
        const ResourceVector cap{rng.uniform_int(0, 64000), rng.uniform_int(0, 64) * kGiB, rng.uniform_int(0, 8)};
        const ResourceVector alloc{rng.uniform_int(0, cap.cpu_millicores), rng.uniform_int(0, cap.memory_bytes),
                                   rng.uniform_int(0, cap.gpu_count)};
        const ResourceVector req{rng.uniform_int(0, 8000), rng.uniform_int(0, 8) * kGiB, rng.uniform_int(0, 2)};
        const int got = least_allocated(cap, alloc, req);
        EXPECT_EQ(got, reference_least_allocated(cap, alloc, req));
        EXPECT_GE(got, 0);
        EXPECT_LE(got, 100);
    }
}

TEST(Scheduler, PicksMostFreeAndBreaksTiesById) {
    auto snap = snapshot({node("n2", "c", 8, 8), node("n1", "c", 8, 8), node("n3", "c", 16, 16)});
    const auto p = pod("p", 2, 2);
    EXPECT_EQ(schedule_one(p, snap, builtin_plugins()), "n3");
    snap = snapshot({node("n2", "c", 8, 8), node("n1", "c", 8, 8)});
    EXPECT_EQ(schedule_one(p, snap, builtin_plugins()), "n1");
}

TEST(Scheduler, FiltersSelectorsAllowlistAndQuota) {
    ClusterState state(ClusterSpec{"c",
                                   {node("n1", "c", 8, 8, 0, {{"zone", "east"}}), node("n2", "c", 8, 8)},
                                   std::set<Namespace>{"default", "batch"},
                                   {{"batch", ResourceVector::cores(2, 100)}}});
    auto p = pod("p", 1, 1);
    p.node_selector["zone"] = "east";
    EXPECT_EQ(schedule_one(p, SchedulingSnapshot::of(state), builtin_plugins()), "n1");
    p.ns = "other";
    EXPECT_FALSE(schedule_one(p, SchedulingSnapshot::of(state), builtin_plugins()));
    auto q = pod("q", 3, 1);
    q.ns = "batch";
    EXPECT_FALSE(schedule_one(q, SchedulingSnapshot::of(state), builtin_plugins()));
}

TEST(Scheduler, SnapshotExcludesNonContainerNodes) {
    ClusterState state(ClusterSpec{"c", {node("n1", "c", 8, 8), node("n2", "c", 64, 64)}, {}, {}});
    state.set_node_pool("n2", NodePool::Batch, NodeState::Ready);
    const auto snap = SchedulingSnapshot::of(state);
    ASSERT_EQ(snap.nodes.size(), 1u);
    EXPECT_EQ(snap.nodes[0].node.node_id, "n1");
}

TEST(Scheduler, SequentialPlacementMatchesOracle) {
    // Ten pods onto four nodes, one at a time, against a hand-rolled greedy.
    const std::vector<NodeSpec> nodes{node("n1", "c", 8, 32), node("n2", "c", 16, 16), node("n3", "c", 4, 64),
                                      node("n4", "c", 12, 24)};
    ClusterState state(ClusterSpec{"c", nodes, {}, {}});
    std::map<NodeId, ResourceVector> free;
    for (const auto& n : nodes) free[n.node_id] = n.capacity;
    Rng rng(11, "seq");
    for (int i = 0; i < 10; ++i) {
        auto p = pod("p" + std::to_string(i), rng.uniform_int(1, 6), rng.uniform_int(1, 12));
        std::optional<NodeId> expect;
        double best = -1;
        for (const auto& n : nodes) {
            if (!fits_within(p.request, free[n.node_id])) continue;
            const double s = reference_least_allocated(n.capacity, free[n.node_id], p.request);
            if (s > best) best = s, expect = n.node_id;
        }
        const auto got = schedule_one(p, SchedulingSnapshot::of(state), builtin_plugins());
        ASSERT_EQ(got, expect) << "pod " << i;
        if (got) {
            state.commit(p, *got);
            free[*got] = checked_sub(free[*got], p.request);
        }
    }
}

TEST(Scheduler, UniformWeightScalingKeepsChoice) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        Rng rng(s, "weights");
        std::vector<NodeSpec> nodes;
        for (int i = 0; i < 6; ++i)
            nodes.push_back(node("n" + std::to_string(i), "c", rng.uniform_int(2, 32), rng.uniform_int(2, 64),
                                 rng.uniform_int(0, 4)));
        const auto snap = snapshot(nodes);
        auto base = builtin_plugins();
        base.scores = {plugins::least_allocated(1), plugins::gpu_binpack(2)};
        auto scaled = base;
        for (auto& sc : scaled.scores) sc.weight *= 7;
        const auto p = pod("p", rng.uniform_int(1, 4), rng.uniform_int(1, 8), rng.uniform_int(0, 1));
        EXPECT_EQ(schedule_one(p, snap, base), schedule_one(p, snap, scaled));
    }
}

TEST(GpuBinpack, Semantics) {
    const auto snap = snapshot({node("cpu", "c", 8, 8), node("gpu", "c", 8, 8, 4)});
    const auto gb = plugins::gpu_binpack();
    EXPECT_EQ(gb.fn(pod("p", 1, 1), snap.nodes[0], snap), 100);
    EXPECT_EQ(gb.fn(pod("p", 1, 1), snap.nodes[1], snap), 0);
    EXPECT_EQ(gb.fn(pod("g", 1, 1, 1), snap.nodes[1], snap), 25);
    EXPECT_EQ(gb.fn(pod("g", 1, 1, 1), snap.nodes[0], snap), 0);
    // Default pipeline keeps it at weight 0.
    for (const auto& sc : builtin_plugins().scores)
        if (sc.name == "GpuBinpack") EXPECT_EQ(sc.weight, 0);
}
