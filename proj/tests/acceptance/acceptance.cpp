// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "../support/testkit.hpp"

#include "fedsched/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

using namespace testkit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* name, const Outcome& o) {
    std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

Outcome guarded(const std::function<Outcome()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

std::string first(const Violations& v) { return v.empty() ? "" : " (first: " + v.front() + ")"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs shared by AC1-AC3.
struct RandomRuns {
    int runs = 0;
    double elapsed = 0;
    Violations delegate, cleanup, overcommit;
    int federated_pods = 0, bound = 0, unschedulable = 0;
};

RandomRuns random_runs(int n) {
    RandomRuns out;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < n; ++i) {
        const auto cfg = random_federation(1000 + i);
        std::vector<LogRecord> log;
        try {
            Simulator sim(cfg, 77 + i);
            sim.run();
            log = sim.log();
        } catch (const InvariantViolation& e) {
            out.delegate.push_back("run " + std::to_string(i) + ": " + e.what());
            continue;
        }
        auto tag = [&](Violations v, Violations& into) {
            for (auto& s : v) into.push_back("run " + std::to_string(i) + ": " + s);
        };
        tag(check_exactly_one_delegate(log), out.delegate);
        tag(check_cleanup(log), out.cleanup);
        tag(check_no_overcommit(log), out.overcommit);
        for (const auto& [_, h] : pod_histories(log)) {
            if (!h.federated) continue;
            ++out.federated_pods;
            if (h.proxy_final == ProxyState::Bound) ++out.bound;
            if (h.proxy_final == ProxyState::Unschedulable) ++out.unschedulable;
        }
        ++out.runs;
    }
    out.elapsed = seconds_since(t0);
    return out;
}

// ---------------------------------------------------------------------------
// AC4: brute-force election oracle on small sequential instances.

struct OracleNode {
    NodeId id;
    ResourceVector capacity;
    Labels labels;
    ResourceVector bound;
};

struct OracleCluster {
    std::vector<OracleNode> nodes;  // sorted by id
    std::optional<std::set<Namespace>> allow;
};

int hand_least_allocated(const ResourceVector& cap, const ResourceVector& alloc, const ResourceVector& req) {
    const std::int64_t c[3] = {cap.cpu_millicores, cap.memory_bytes, cap.gpu_count};
    const std::int64_t a[3] = {alloc.cpu_millicores, alloc.memory_bytes, alloc.gpu_count};
    const std::int64_t r[3] = {req.cpu_millicores, req.memory_bytes, req.gpu_count};
    double sum = 0;
    int dims = 0;
    for (int d = 0; d < 3; ++d) {
        if (c[d] == 0) continue;
        sum += static_cast<double>(std::max<std::int64_t>(0, a[d] - r[d])) / static_cast<double>(c[d]);
        ++dims;
    }
    return dims ? static_cast<int>(std::lround(100.0 * sum / dims)) : 0;
}

ResourceVector minus(const ResourceVector& a, const ResourceVector& b) {
    return {a.cpu_millicores - b.cpu_millicores, a.memory_bytes - b.memory_bytes, a.gpu_count - b.gpu_count};
}

bool node_feasible(const PodSpec& p, const OracleNode& n, const OracleCluster& c) {
    if (c.allow && !c.allow->contains(p.ns)) return false;
    const auto free = minus(n.capacity, n.bound);
    if (p.request.cpu_millicores > free.cpu_millicores || p.request.memory_bytes > free.memory_bytes ||
        p.request.gpu_count > free.gpu_count)
        return false;
    for (const auto& [k, v] : p.node_selector) {
        auto it = n.labels.find(k);
        if (it == n.labels.end() || it->second != v) return false;
    }
    return true;
}

struct Prediction {
    std::optional<Placement> placement;  // nothing = Unschedulable
};

Outcome ac4() {
    const int instances = 3000;
    int elections = 0, unschedulable = 0, mismatches = 0, multi_choice = 0;
    std::string first_mismatch;
    for (int inst = 0; inst < instances; ++inst) {
        Rng rng(inst, "ac4/instance");
        const int n_clusters = static_cast<int>(rng.uniform_int(1, 3));
        std::map<ClusterId, OracleCluster> oracle;
        std::vector<ClusterConfig> clusters;
        for (int c = 0; c < n_clusters; ++c) {
            const ClusterId cid(1, static_cast<char>('a' + c));
            std::vector<NodeSpec> nodes;
            const int n_nodes = static_cast<int>(rng.uniform_int(1, 4));
            for (int n = 0; n < n_nodes; ++n) {
                Labels labels{{"zone", rng.bernoulli(0.5) ? "east" : "west"}};
                nodes.push_back(node(cid + "-n" + std::to_string(n), cid, rng.uniform_int(2, 16),
                                     rng.uniform_int(4, 64), rng.bernoulli(0.3) ? rng.uniform_int(1, 4) : 0, labels));
                oracle[cid].nodes.push_back({nodes.back().node_id, nodes.back().capacity, labels, {}});
            }
            auto cc = cluster(cid, nodes);
            if (rng.bernoulli(0.2)) {
                cc.spec.namespace_allowlist = std::set<Namespace>{"default"};
                oracle[cid].allow = cc.spec.namespace_allowlist;
            }
            clusters.push_back(std::move(cc));
        }
        auto cfg = config(std::move(clusters));
        std::vector<ClusterId> ids(cfg.graph.clusters().begin(), cfg.graph.clusters().end());
        for (const auto& s : ids)
            for (const auto& t : ids)
                if (rng.bernoulli(0.6)) cfg.graph.add_edge(s, t, LatencyModel{rng.uniform_int(0, 30), 0});
        std::vector<ClusterId> sources;
        for (const auto& s : ids)
            if (!cfg.graph.targets_of(s).empty()) sources.push_back(s);
        if (sources.empty()) {
            cfg.graph.add_edge(ids[0], ids.back());
            sources.push_back(ids[0]);
        }
        cfg.federation.prefer_local = rng.bernoulli(0.5);

        const int n_pods = static_cast<int>(rng.uniform_int(1, 6));
        std::vector<std::pair<PodSpec, ClusterId>> arrivals;
        for (int i = 0; i < n_pods; ++i) {
            auto p = pod("p" + std::to_string(i), rng.uniform_int(1, 10), rng.uniform_int(1, 40),
                         rng.bernoulli(0.25) ? rng.uniform_int(1, 2) : 0);
            if (rng.bernoulli(0.2)) p.node_selector["zone"] = rng.bernoulli(0.5) ? "east" : "west";
            if (rng.bernoulli(0.15)) p.ns = "team";
            // Short pods complete well before the next arrival; long ones stay bound.
            p.duration = rng.bernoulli(0.3) ? 20 * kSecond : 100 * kHour;
            const auto src = sources[rng.uniform_int(0, static_cast<std::int64_t>(sources.size()) - 1)];
            submit(cfg, p, src, i * kMinute);
            arrivals.emplace_back(p, src);
        }
        cfg.sim.duration = n_pods * kMinute + 5 * kMinute;

        Simulator sim(cfg, inst);
        sim.run();

        // Oracle replay in arrival order.
        std::map<PodId, Prediction> predicted;
        std::vector<std::tuple<ClusterId, NodeId, PodSpec>> short_lived;
        for (const auto& [p, src] : arrivals) {
            for (auto& [cid, nid, sp] : short_lived)
                for (auto& n : oracle[cid].nodes)
                    if (n.id == nid) n.bound = minus(n.bound, sp.request);
            short_lived.clear();

            std::map<ClusterId, std::pair<NodeId, int>> candidates;
            for (const auto& t : cfg.graph.targets_of(src)) {
                std::optional<std::pair<NodeId, int>> best;
                for (const auto& n : oracle[t].nodes) {
                    if (!node_feasible(p, n, oracle[t])) continue;
                    const int s = hand_least_allocated(n.capacity, minus(n.capacity, n.bound), p.request);
                    if (!best || s > best->second) best = std::make_pair(n.id, s);
                }
                if (best) candidates[t] = *best;
            }
            Prediction pred;
            if (!candidates.empty()) {
                std::optional<ClusterId> chosen;
                if (cfg.federation.prefer_local && candidates.contains(src)) {
                    chosen = src;
                } else {
                    int best_score = -1;
                    for (const auto& [t, _] : candidates) {
                        ResourceVector cap, bound;
                        for (const auto& n : oracle[t].nodes) {
                            cap += n.capacity;
                            bound += n.bound;
                        }
                        const int s = hand_least_allocated(cap, minus(cap, bound), p.request);
                        if (s > best_score) {
                            best_score = s;
                            chosen = t;
                        }
                    }
                }
                if (candidates.size() > 1) ++multi_choice;
                pred.placement = Placement{*chosen, candidates[*chosen].first};
                for (auto& n : oracle[*chosen].nodes)
                    if (n.id == pred.placement->node) n.bound += p.request;
                if (p.duration < kHour) short_lived.emplace_back(*chosen, pred.placement->node, p);
            }
            predicted[p.pod_id] = pred;
        }

        for (const auto& [id, pred] : predicted) {
            const auto& actual = sim.pod(id);
            const bool ok = pred.placement ? actual.placement == pred.placement
                                           : actual.phase == PodPhase::Unschedulable;
            pred.placement ? ++elections : ++unschedulable;
            if (!ok) {
                ++mismatches;
                if (first_mismatch.empty())
                    first_mismatch = "instance " + std::to_string(inst) + " pod " + id + ": expected " +
                                     (pred.placement ? pred.placement->cluster + "/" + pred.placement->node
                                                     : std::string("Unschedulable")) +
                                     ", got " + std::string(to_string(actual.phase)) +
                                     (actual.placement ? " " + actual.placement->cluster + "/" + actual.placement->node
                                                       : std::string());
            }
        }
    }
    const int total = elections + unschedulable;
    std::ostringstream d;
    d << instances << " instances, " << total << " decisions (" << elections << " elections, " << multi_choice
      << " with several candidates, " << unschedulable << " unschedulable), agreement " << (total - mismatches) << "/"
      << total;
    if (!first_mismatch.empty()) d << " (first mismatch: " << first_mismatch << ")";
    return {mismatches == 0 && multi_choice > 0, d.str()};
}

// ---------------------------------------------------------------------------

RunConfig bundled_config() { return parse_config(std::string(FEDSCHED_SOURCE_DIR) + "/configs/expanse-nautilus.json"); }

Outcome ac5() {
    std::vector<RunConfig> configs;
    configs.push_back(bundled_config());
    for (int i = 0; configs.size() < 20; ++i) configs.push_back(random_federation(5000 + i));
    int identical = 0, seed_sensitive = 0, jittery = 0;
    for (const auto& cfg : configs) {
        const auto a = to_jsonl(run(cfg, 11).log);
        const auto b = to_jsonl(run(cfg, 11).log);
        identical += a == b;

        bool has_jitter = false;
        for (const auto& e : cfg.graph.edges()) has_jitter |= e.latency.jitter > 0;
        const auto other = run(cfg, 12).log;
        const auto base = run(cfg, 11).log;
        bool messages = false;
        for (const auto& r : base)
            messages |= r.kind == "ChaperonCreate" || r.kind == "AggregateReport";
        if (!has_jitter || !messages) continue;
        ++jittery;
        bool differs = base.size() != other.size();
        for (std::size_t i = 0; !differs && i < base.size(); ++i) differs = base[i].time != other[i].time;
        seed_sensitive += differs;
    }
    std::ostringstream d;
    d << identical << "/" << configs.size() << " configs byte-identical across 2 repeats; " << seed_sensitive << "/"
      << jittery << " jittered configs change timestamps with a new seed";
    return {identical == static_cast<int>(configs.size()) && jittery > 0 && seed_sensitive == jittery, d.str()};
}

Outcome ac6() {
    Violations v;
    auto dual = [&](const FederationGraph& g, const std::string& name) {
        for (const auto& a : g.clusters())
            for (const auto& b : g.clusters())
                if (g.targets_of(a).contains(b) != g.sources_of(b).contains(a)) v.push_back(name + ": dual views differ");
    };
    for (int n = 0; n <= 6; ++n) {
        std::set<ClusterId> leaves;
        for (int i = 0; i < n; ++i) leaves.insert("L" + std::to_string(i));
        const auto g = build_central("H", leaves);
        const std::string name = "central/" + std::to_string(n);
        if (g.edge_count() != static_cast<std::size_t>(n)) v.push_back(name + ": edge count");
        if (g.targets_of("H") != leaves) v.push_back(name + ": hub targets");
        for (const auto& l : leaves) {
            if (g.sources_of(l) != std::set<ClusterId>{"H"}) v.push_back(name + ": leaf in-degree");
            if (!g.targets_of(l).empty()) v.push_back(name + ": leaf has targets");
        }
        if (!g.sources_of("H").empty()) v.push_back(name + ": hub has sources");
        dual(g, name);
    }
    try {
        build_central("H", {"A", "H"});
        v.push_back("central: hub in leaves accepted");
    } catch (const HubInLeaves&) {
    }
    for (bool self : {true, false}) {
        const auto g = build_burst("L", "C", self);
        if (g.edge_count() != (self ? 2u : 1u)) v.push_back("burst: edge count");
        if (!g.has_edge("L", "C") || g.has_edge("L", "L") != self || g.has_edge("C", "L")) v.push_back("burst: edge set");
        dual(g, "burst");
    }
    for (int n = 1; n <= 7; ++n) {
        std::set<ClusterId> ids;
        for (int i = 0; i < n; ++i) ids.insert("c" + std::to_string(i));
        for (bool self : {false, true}) {
            const auto g = build_decentralized(ids, complete_pairs(ids, self));
            const auto expect = static_cast<std::size_t>(self ? n * n : n * (n - 1));
            if (g.edge_count() != expect) v.push_back("complete/" + std::to_string(n) + ": edge count");
            dual(g, "complete");
        }
    }
    for (int s = 0; s < 200; ++s) dual(random_federation(s).graph, "random/" + std::to_string(s));
    return {v.empty(), std::to_string(v.size()) + " violations over central(0..6), burst(self/no-self), complete(1..7), "
                                                 "200 random graphs" + first(v)};
}

RunConfig burst_config(std::int64_t local_cores, std::int64_t local_gib) {
    auto cfg = config({cluster("local", {node("local-0", "local", local_cores, local_gib)}),
                       cluster("cloud", {node("cloud-0", "cloud", 256, 1024), node("cloud-1", "cloud", 256, 1024)})});
    cfg.graph = build_burst("local", "cloud", true, LatencyModel{30, 20});
    for (int i = 0; i < 20; ++i) {
        auto p = pod("job" + std::to_string(i), 2, 4);
        p.duration = 5 * kMinute;
        submit(cfg, p, "local", i * 30 * kSecond);
    }
    return cfg;
}

Outcome ac7() {
    // Sufficiency oracle: the single local node holds the whole trace at once.
    auto roomy = burst_config(64, 256);
    ResourceVector total;
    for (const auto& s : roomy.scenario.pods) total += s.pod.request;
    const bool sufficient = fits_within(total, roomy.clusters[0].spec.nodes[0].capacity);

    std::int64_t roomy_offloads = 0, tight_min = -1;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        roomy_offloads += run(roomy, seed).metrics.offloads("local", "cloud");
        const auto tight = run(burst_config(4, 8), seed).metrics.offloads("local", "cloud");
        tight_min = tight_min < 0 ? tight : std::min(tight_min, tight);
    }
    std::ostringstream d;
    d << "sufficient local capacity (oracle: " << (sufficient ? "holds" : "FAILS") << "): cloud offloads " << roomy_offloads
      << " over 20 seeds; reduced capacity: min cloud offloads " << tight_min << " per seed";
    return {sufficient && roomy_offloads == 0 && tight_min > 0, d.str()};
}

RunConfig metascale_config() {
    std::vector<NodeSpec> nodes;
    for (int i = 0; i < 8; ++i) {
        auto n = node("m" + std::to_string(i), "hpc", 32, 128);
        if (i < 4) n.pool = NodePool::Batch;
        nodes.push_back(n);
    }
    auto cc = cluster("hpc", nodes);
    cc.metascale = true;
    auto cfg = config({cc});
    cfg.metascale.cooldown = 10 * kMinute;
    // Alternating waves: container bursts on even half-hours, batch bursts on odd ones.
    for (int wave = 0; wave < 8; ++wave) {
        const TimeMs t0 = wave * 30 * kMinute;
        if (wave % 2 == 0) {
            for (int i = 0; i < 12; ++i) {
                auto p = pod("w" + std::to_string(wave) + "-" + std::to_string(i), 16, 32, 0, false);
                p.duration = 20 * kMinute;
                submit(cfg, p, "hpc", t0 + i * kSecond);
            }
        } else {
            for (int i = 0; i < 4; ++i) {
                BatchJob j;
                j.job_id = "b" + std::to_string(wave) + "-" + std::to_string(i);
                j.node_count = 2;
                j.duration = 15 * kMinute;
                j.submit_time = t0 + i * kSecond;
                cfg.scenario.jobs.push_back({j, "hpc"});
            }
        }
    }
    cfg.sim.duration = 8 * kHour;
    return cfg;
}

Outcome ac8() {
    Violations v;
    int moves = 0, to_container = 0, to_batch = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto cfg = metascale_config();
        const auto log = run(cfg, seed).log;
        std::set<NodeId> initial;
        for (const auto& e : log.front().effects)
            if (auto* p = std::get_if<fx::Pool>(&e)) initial.insert(p->node);

        std::map<NodeId, NodePool> pool;
        std::map<NodeId, NodeState> state;
        std::map<NodeId, int> pods_on;
        std::map<NodeId, JobId> job_on;
        std::map<NodeId, std::vector<TimeMs>> changes;
        std::map<PodId, TimeMs> bound_at;
        std::map<JobId, TimeMs> started_at;
        std::map<PodId, TimeMs> duration;
        for (const auto& s : cfg.scenario.pods) duration[s.pod.pod_id] = s.pod.duration;
        std::map<JobId, TimeMs> job_duration;
        for (const auto& s : cfg.scenario.jobs) job_duration[s.job.job_id] = s.job.duration;

        for (const auto& r : log) {
            for (const auto& e : r.effects) {
                if (auto* p = std::get_if<fx::Pool>(&e)) {
                    if (!initial.contains(p->node)) v.push_back("unknown node " + p->node);
                    if (r.seq != 0) {
                        if (pods_on[p->node] > 0) v.push_back("node " + p->node + " moved with bound pods");
                        if (job_on.contains(p->node)) v.push_back("node " + p->node + " moved under a running job");
                        if (pool.at(p->node) != p->pool) {
                            changes[p->node].push_back(r.time);
                            ++moves;
                            (p->pool == NodePool::Container ? to_container : to_batch)++;
                        }
                    }
                    pool[p->node] = p->pool;
                    state[p->node] = p->state;
                } else if (auto* b = std::get_if<fx::Bound>(&e)) {
                    if (pool[b->node] != NodePool::Container || state[b->node] != NodeState::Ready)
                        v.push_back("pod " + b->pod + " bound to a non-container node");
                    ++pods_on[b->node];
                    bound_at[b->pod] = r.time;
                } else if (auto* rel = std::get_if<fx::Released>(&e)) {
                    --pods_on[rel->node];
                    if (r.time != bound_at[rel->pod] + duration[rel->pod]) v.push_back("pod " + rel->pod + " cut short");
                } else if (auto* j = std::get_if<fx::Job>(&e)) {
                    if (j->state == JobState::Running) {
                        started_at[j->job] = r.time;
                        for (const auto& n : j->nodes) {
                            if (pool[n] != NodePool::Batch || state[n] != NodeState::Ready)
                                v.push_back("job " + j->job + " on non-batch node " + n);
                            job_on[n] = j->job;
                        }
                    } else if (j->state == JobState::Done) {
                        if (r.time != started_at[j->job] + job_duration[j->job]) v.push_back("job " + j->job + " cut short");
                        for (const auto& n : j->nodes) job_on.erase(n);
                    }
                }
            }
        }
        if (pool.size() != initial.size()) v.push_back("node count changed");
        for (const auto& [n, ts] : changes)
            for (std::size_t i = 1; i < ts.size(); ++i)
                if (ts[i] - ts[i - 1] < cfg.metascale.cooldown)
                    v.push_back("node " + n + " changed pool twice within the cooldown");
    }
    std::ostringstream d;
    d << v.size() << " violations over 5 seeds; " << moves << " pool moves (" << to_container << " to container, "
      << to_batch << " to batch)" << first(v);
    return {v.empty() && to_container > 0 && to_batch > 0, d.str()};
}

Outcome ac9() {
    const auto cfg = bundled_config();
    int high = 0;
    for (const auto& e : cfg.scenario.wildfire->trace) high += e.smoke_probability >= 0.9;
    const bool setup_ok = cfg.clusters.size() == 2 && cfg.graph.has_edge("expanse", "nautilus") &&
                          cfg.graph.has_edge("nautilus", "expanse") &&
                          cfg.scenario.wildfire->rule.confidence_threshold == 0.9 &&
                          cfg.scenario.wildfire->rule.ensemble_size == 8 && high == 3;

    Violations v;
    std::vector<std::uint64_t> seeds{cfg.sim.seed};
    for (std::uint64_t s = 1; s <= 9; ++s) seeds.push_back(s);
    for (auto seed : seeds) {
        Simulator sim(cfg, seed);
        sim.run();
        int retrain = 0, ensemble = 0;
        for (const auto& id : sim.pod_ids()) {
            const auto& p = sim.pod(id);
            const bool is_retrain = id.ends_with("-retrain");
            (is_retrain ? retrain : ensemble)++;
            if (!p.placement) {
                v.push_back("seed " + std::to_string(seed) + ": " + id + " never bound");
                continue;
            }
            const auto& n = sim.cluster(p.placement->cluster).node(p.placement->node);
            const auto& labels = n.labels;
            const bool gpu_node = labels.contains("accelerator") && labels.at("accelerator") == "nvidia-gpu" &&
                                  n.capacity.gpu_count > 0;
            if (is_retrain && !gpu_node) v.push_back(id + " on a node without a GPU label");
            if (!is_retrain && (!labels.contains("memory-class") || labels.at("memory-class") != "large"))
                v.push_back(id + " on a node without memory-class=large");
        }
        if (retrain != 3) v.push_back("seed " + std::to_string(seed) + ": " + std::to_string(retrain) + " retrain pods");
        if (ensemble != 24) v.push_back("seed " + std::to_string(seed) + ": " + std::to_string(ensemble) + " simulation pods");
        if (sim.registry().latest() - 1 != 3 || sim.metrics().model_version != 4)
            v.push_back("seed " + std::to_string(seed) + ": registry advanced by " + std::to_string(sim.registry().latest() - 1));
    }
    std::ostringstream d;
    d << "bundled config " << (setup_ok ? "as stated" : "NOT as stated") << " (" << high
      << " high-confidence events); " << v.size() << " violations over " << seeds.size()
      << " seeds (3 retrain on GPU nodes, 24 simulations on large-memory nodes, registry +3)" << first(v);
    return {setup_ok && v.empty(), d.str()};
}

RunConfig policy_config(std::uint64_t variant, bool admit_everywhere) {
    Rng rng(variant, "ac10/config");
    auto a = cluster("a", {node("a-0", "a", 8, 32)});
    auto b = cluster("b", {node("b-0", "b", 16, 64), node("b-1", "b", 8, 32)});
    auto c = cluster("c", {node("c-0", "c", 128, 512), node("c-1", "c", 128, 512)});
    if (!admit_everywhere) c.spec.namespace_allowlist = std::set<Namespace>{"default", "analytics"};
    auto cfg = config({a, b, c});
    const LatencyModel lat{rng.uniform_int(1, 40), rng.uniform_int(0, 30)};
    cfg.graph.add_edge("a", "b", lat);
    cfg.graph.add_edge("a", "c", lat);
    if (rng.bernoulli(0.5)) cfg.graph.add_edge("a", "a", lat);
    cfg.federation.prefer_local = rng.bernoulli(0.5);
    cfg.federation.reservations = rng.bernoulli(0.8);
    const int n = static_cast<int>(rng.uniform_int(5, 30));
    for (int i = 0; i < n; ++i) {
        auto p = pod("r" + std::to_string(i), rng.uniform_int(1, 8), rng.uniform_int(1, 16));
        p.ns = rng.bernoulli(0.7) ? "restricted" : "default";
        p.duration = rng.uniform_int(kMinute, 20 * kMinute);
        submit(cfg, p, "a", rng.uniform_int(0, 10 * kMinute));
    }
    return cfg;
}

Outcome ac10() {
    int violations = 0, restricted_bound = 0, control_in_c = 0;
    const int seeds = 300;
    for (int s = 0; s < seeds; ++s) {
        const auto metrics = metrics_from_log(run(policy_config(s, false), s).log);
        for (const auto& [id, p] : metrics.pods) {
            if (p.ns != "restricted" || !p.placement) continue;
            ++restricted_bound;
            if (p.placement->cluster == "c") ++violations;
        }
        // Control: the same trace with the policy lifted does use c.
        for (const auto& [id, p] : run(policy_config(s, true), s).metrics.pods)
            if (p.ns == "restricted" && p.placement && p.placement->cluster == "c") ++control_in_c;
    }
    std::ostringstream d;
    d << violations << " restricted delegates bound in the excluding target over " << seeds << " seeds ("
      << restricted_bound << " restricted pods bound elsewhere; control without the policy puts " << control_in_c
      << " in that target)";
    return {violations == 0 && restricted_bound > 0 && control_in_c > 0, d.str()};
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    RandomRuns runs;
    Outcome base = guarded([&] {
        runs = random_runs(1000);
        return Outcome{true, ""};
    });

    report("AC1", "exactly-one-delegate", guarded([&]() -> Outcome {
               if (!base.pass) return base;
               std::ostringstream d;
               d << runs.runs << " randomized runs, " << runs.federated_pods << " federated pods (" << runs.bound
                 << " bound, " << runs.unschedulable << " unschedulable), " << runs.delegate.size()
                 << " violations, " << std::fixed;
               d.precision(1);
               d << runs.elapsed << "s (limit 60s)" << first(runs.delegate);
               return {runs.runs == 1000 && runs.delegate.empty() && runs.elapsed < 60.0 &&
                           runs.bound + runs.unschedulable == runs.federated_pods,
                       d.str()};
           }));
    report("AC2", "cleanup-completeness", guarded([&]() -> Outcome {
               if (!base.pass) return base;
               return {runs.cleanup.empty(), std::to_string(runs.cleanup.size()) + " violations over " +
                                                 std::to_string(runs.runs) + " runs" + first(runs.cleanup)};
           }));
    report("AC3", "no-overcommit", guarded([&]() -> Outcome {
               if (!base.pass) return base;
               auto v = runs.overcommit;
               for (const auto& extra : {bundled_config(), metascale_config(), burst_config(4, 8)}) {
                   auto more = check_no_overcommit(run(extra, 3).log);
                   v.insert(v.end(), more.begin(), more.end());
               }
               return {v.empty(), std::to_string(v.size()) + " violations over " + std::to_string(runs.runs) +
                                      " randomized runs plus wildfire, meta-scale and burst runs" + first(v)};
           }));
    report("AC4", "oracle-equivalence", guarded(ac4));
    report("AC5", "determinism", guarded(ac5));
    report("AC6", "topology-semantics", guarded(ac6));
    report("AC7", "burst-behavior", guarded(ac7));
    report("AC8", "meta-scale-safety", guarded(ac8));
    report("AC9", "wildfire-closed-loop", guarded(ac9));
    report("AC10", "policy-respect", guarded(ac10));

    std::printf("%d/10 criteria passed in %.1fs\n", 10 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
