#include "../support/testkit.hpp"

#include "fedsched/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace testkit;

TEST(Engine, StrictTimeThenInsertionOrder) {
    Engine e;
    e.schedule(10, ev::HeartbeatTick{});
    e.schedule(5, ev::JobComplete{"x"});
    e.schedule(10, ev::JobComplete{"y"});
    EXPECT_EQ(std::get<ev::JobComplete>(e.step().payload).job, "x");
    EXPECT_EQ(e.step().kind(), EventKind::HeartbeatTick);
    EXPECT_EQ(std::get<ev::JobComplete>(e.step().payload).job, "y");
    EXPECT_EQ(e.now(), 10);
    EXPECT_THROW(e.step(), EmptyQueue);
    EXPECT_THROW(e.schedule(9, ev::HeartbeatTick{}), CausalityError);
}

TEST(Engine, ChannelDeliveryIsFifoUnderJitter) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Engine e(seed);
        const ChannelKey ch{"p", "a", "b"};
        std::vector<TimeMs> times;
        for (int i = 0; i < 200; ++i) times.push_back(e.deliver(ch, {5, 500}, ev::JobComplete{std::to_string(i)}));
        for (std::size_t i = 1; i < times.size(); ++i) EXPECT_GE(times[i], times[i - 1]);
        for (auto t : times) EXPECT_GE(t, 5);
        int expect = 0;
        while (!e.empty()) EXPECT_EQ(std::get<ev::JobComplete>(e.step().payload).job, std::to_string(expect++));
    }
}

TEST(Engine, JitterWithinBounds) {
    Engine e(9);
    for (int i = 0; i < 500; ++i) {
        const auto t = e.deliver({"s" + std::to_string(i), "a", "b"}, {20, 10}, ev::HeartbeatTick{});
        EXPECT_GE(t, 20);
        EXPECT_LE(t, 30);
    }
}

TEST(Rng, DerivedStreamsAreStableAndIndependent) {
    EXPECT_EQ(derive_seed(1, "x"), derive_seed(1, "x"));
    EXPECT_NE(derive_seed(1, "x"), derive_seed(1, "y"));
    EXPECT_NE(derive_seed(1, "x"), derive_seed(2, "x"));
    Rng a(5, "s"), b(5, "s");
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformIntCoversRangeEvenly) {
    Rng r(1, "u");
    std::map<std::int64_t, int> counts;
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++counts[r.uniform_int(-2, 3)];
    EXPECT_EQ(counts.size(), 6u);
    for (const auto& [v, c] : counts) {
        EXPECT_GE(v, -2);
        EXPECT_LE(v, 3);
        EXPECT_NEAR(c, n / 6.0, 4 * std::sqrt(n / 6.0));
    }
}

TEST(Simulator, StepOrderingAndCausality) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Simulator sim(random_federation(s), s);
        TimeMs last = 0;
        std::uint64_t last_seq = 0;
        while (!sim.done()) {
            const auto ev = sim.step();
            ASSERT_GE(ev.time, last);
            if (ev.time == last) ASSERT_GT(ev.seq, last_seq);
            last = ev.time;
            last_seq = ev.seq;
        }
        EXPECT_TRUE(check_clock(sim.log()).empty());
        EXPECT_TRUE(check_phase_paths(sim.log()).empty());
    }
}

TEST(Simulator, EmptyScenarioOnlyTicks) {
    auto cfg = config({cluster("a", {node("a-n", "a", 4, 4)}), cluster("b", {node("b-n", "b", 4, 4)})});
    cfg.graph.add_edge("a", "b");
    cfg.sim.duration = kHour;
    Simulator sim(cfg, 1);
    sim.run();
    for (const auto& r : sim.log()) {
        if (r.kind == "Setup") continue;
        EXPECT_TRUE(r.kind == "HeartbeatTick" || r.kind == "AggregateReport") << r.kind;
        EXPECT_TRUE(r.effects.empty()) << r.kind;
    }
    EXPECT_TRUE(sim.metrics().pods.empty());
}

TEST(Simulator, SameSeedSameLog) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto cfg = random_federation(s);
        EXPECT_EQ(to_jsonl(run(cfg, 3).log), to_jsonl(run(cfg, 3).log));
    }
}

TEST(Simulator, InvariantCheckHoldsThroughRandomRuns) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto cfg = random_federation(s);
        Simulator sim(cfg, s);
        while (!sim.done()) {
            sim.step();
            ASSERT_NO_THROW(sim.check_invariants()) << "seed " << s << " t=" << sim.now();
        }
    }
}

TEST(Simulator, LocalPodsRunWithoutFederation) {
    auto cfg = config({cluster("a", {node("a-n", "a", 4, 8)})});
    auto p = pod("p", 2, 2, 0, false);
    p.duration = kMinute;
    submit(cfg, p, "a", 5 * kSecond);
    auto q = pod("q", 3, 2, 0, false);
    q.duration = kMinute;
    submit(cfg, q, "a", 6 * kSecond);
    Simulator sim(cfg, 1);
    sim.run();
    EXPECT_EQ(sim.pod("p").phase, PodPhase::Completed);
    // q waits for p to finish, then runs.
    EXPECT_EQ(sim.pod("q").phase, PodPhase::Completed);
    const auto& m = sim.metrics().pods.at("q");
    EXPECT_EQ(*m.bind_time, 5 * kSecond + kMinute);
    EXPECT_EQ(sim.proxy("p"), nullptr);
}
