#include "fedsched/scheduling.hpp"

#include <algorithm>
#include <cmath>

namespace fedsched {

SchedulingSnapshot SchedulingSnapshot::of(const ClusterState& cluster) {
    SchedulingSnapshot snap;
    snap.cluster = cluster.id();
    snap.namespace_allowlist = cluster.spec().namespace_allowlist;
    snap.namespace_quota = cluster.spec().namespace_quota;
    for (const auto& n : cluster.nodes()) {
        if (n.pool != NodePool::Container || n.state != NodeState::Ready) continue;
        snap.nodes.push_back({n, cluster.allocatable(n.node_id)});
    }
    std::sort(snap.nodes.begin(), snap.nodes.end(),
              [](const NodeInfo& a, const NodeInfo& b) { return a.node.node_id < b.node.node_id; });
    for (const auto& [ns, _] : snap.namespace_quota) snap.namespace_usage[ns] = cluster.namespace_usage(ns);
    return snap;
}

bool passes_filters(const PodSpec& pod, const NodeInfo& node, const SchedulingSnapshot& snap,
                    const PluginPipeline& pipeline) {
    for (const auto& f : pipeline.filters)
        if (!f.fn(pod, node, snap)) return false;
    return true;
}

std::int64_t total_score(const PodSpec& pod, const NodeInfo& node, const SchedulingSnapshot& snap,
                         const PluginPipeline& pipeline) {
    std::int64_t total = 0;
    for (const auto& s : pipeline.scores)
        if (s.weight != 0) total += s.weight * s.fn(pod, node, snap);
    return total;
}

std::optional<ScoredNode> schedule_one_scored(const PodSpec& pod, const SchedulingSnapshot& snap,
                                              const PluginPipeline& pipeline) {
    std::optional<ScoredNode> best;
    for (const auto& n : snap.nodes) {
        if (!passes_filters(pod, n, snap, pipeline)) continue;
        const auto score = total_score(pod, n, snap, pipeline);
        // Strictly greater, so equal scores keep the smaller node id.
        if (!best || score > best->score || (score == best->score && n.node.node_id < best->node))
            best = ScoredNode{n.node.node_id, score};
    }
    return best;
}

std::optional<NodeId> schedule_one(const PodSpec& pod, const SchedulingSnapshot& snap, const PluginPipeline& pipeline) {
    if (auto s = schedule_one_scored(pod, snap, pipeline)) return s->node;
    return std::nullopt;
}

int least_allocated(const ResourceVector& capacity, const ResourceVector& allocatable, const ResourceVector& request) {
    const ResourceVector free = saturating_sub(allocatable, request);
    double sum = 0;
    int dims = 0;
    auto add = [&](std::int64_t cap, std::int64_t f) {
        if (cap <= 0) return;
        sum += static_cast<double>(std::min(f, cap)) / static_cast<double>(cap);
        ++dims;
    };
    add(capacity.cpu_millicores, free.cpu_millicores);
    add(capacity.memory_bytes, free.memory_bytes);
    add(capacity.gpu_count, free.gpu_count);
    if (dims == 0) return 0;
    return static_cast<int>(std::lround(100.0 * sum / dims));
}

namespace plugins {

FilterPlugin resource_fit() {
    return {"ResourceFit", [](const PodSpec& pod, const NodeInfo& n, const SchedulingSnapshot&) {
                return fits_within(pod.request, n.allocatable);
            }};
}

FilterPlugin label_selector() {
    return {"LabelSelector", [](const PodSpec& pod, const NodeInfo& n, const SchedulingSnapshot&) {
                return selector_matches(pod.node_selector, n.node.labels);
            }};
}

FilterPlugin namespace_policy() {
    return {"NamespacePolicy", [](const PodSpec& pod, const NodeInfo&, const SchedulingSnapshot& snap) {
                if (snap.namespace_allowlist && !snap.namespace_allowlist->contains(pod.ns)) return false;
                auto q = snap.namespace_quota.find(pod.ns);
                if (q == snap.namespace_quota.end()) return true;
                auto u = snap.namespace_usage.find(pod.ns);
                const ResourceVector usage = u == snap.namespace_usage.end() ? ResourceVector{} : u->second;
                return fits_within(usage + pod.request, q->second);
            }};
}

ScorePlugin least_allocated(std::int64_t weight) {
    return {"LeastAllocated",
            [](const PodSpec& pod, const NodeInfo& n, const SchedulingSnapshot&) {
                return fedsched::least_allocated(n.node.capacity, n.allocatable, pod.request);
            },
            weight};
}

ScorePlugin gpu_binpack(std::int64_t weight) {
    return {"GpuBinpack",
            [](const PodSpec& pod, const NodeInfo& n, const SchedulingSnapshot&) -> int {
                const auto cap = n.node.capacity.gpu_count;
                if (cap == 0) return pod.request.gpu_count == 0 ? 100 : 0;
                if (pod.request.gpu_count == 0) return 0;
                const auto used_after = cap - n.allocatable.gpu_count + pod.request.gpu_count;
                return static_cast<int>(std::lround(100.0 * static_cast<double>(std::min(used_after, cap)) /
                                                    static_cast<double>(cap)));
            },
            weight};
}

std::optional<FilterPlugin> filter_by_name(const std::string& name) {
    if (name == "ResourceFit") return resource_fit();
    if (name == "LabelSelector") return label_selector();
    if (name == "NamespacePolicy") return namespace_policy();
    return std::nullopt;
}

std::optional<ScorePlugin> score_by_name(const std::string& name, std::int64_t weight) {
    if (name == "LeastAllocated") return least_allocated(weight);
    if (name == "GpuBinpack") return gpu_binpack(weight);
    return std::nullopt;
}

} // namespace plugins

PluginPipeline builtin_plugins() {
    return {{plugins::resource_fit(), plugins::label_selector(), plugins::namespace_policy()},
            {plugins::least_allocated(1), plugins::gpu_binpack(0)}};
}

} // namespace fedsched
