#pragma once

#include "fedsched/cluster.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fedsched {

struct NodeInfo {
    NodeSpec node;
    ResourceVector allocatable;
};

// Cluster state at one simulation instant, as seen by a scheduler. Only Ready
// nodes of the Container pool are included, sorted by node id.
struct SchedulingSnapshot {
    ClusterId cluster;
    std::vector<NodeInfo> nodes;
    std::optional<std::set<Namespace>> namespace_allowlist;
    std::map<Namespace, ResourceVector> namespace_quota;
    std::map<Namespace, ResourceVector> namespace_usage;

    static SchedulingSnapshot of(const ClusterState& cluster);
};

using FilterFn = std::function<bool(const PodSpec&, const NodeInfo&, const SchedulingSnapshot&)>;
// Returns an integer score in [0, 100].
using ScoreFn = std::function<int(const PodSpec&, const NodeInfo&, const SchedulingSnapshot&)>;

struct FilterPlugin {
    std::string name;
    FilterFn fn;
};

struct ScorePlugin {
    std::string name;
    ScoreFn fn;
    std::int64_t weight = 1;
};

struct PluginPipeline {
    std::vector<FilterPlugin> filters;
    std::vector<ScorePlugin> scores;
};

struct ScoredNode {
    NodeId node;
    std::int64_t score = 0;
};

bool passes_filters(const PodSpec& pod, const NodeInfo& node, const SchedulingSnapshot& snap,
                    const PluginPipeline& pipeline);
std::int64_t total_score(const PodSpec& pod, const NodeInfo& node, const SchedulingSnapshot& snap,
                         const PluginPipeline& pipeline);

// Feasible node with the highest weighted score; ties go to the
// lexicographically smallest node id. Nothing when no node passes all filters.
std::optional<ScoredNode> schedule_one_scored(const PodSpec& pod, const SchedulingSnapshot& snap,
                                              const PluginPipeline& pipeline);
std::optional<NodeId> schedule_one(const PodSpec& pod, const SchedulingSnapshot& snap, const PluginPipeline& pipeline);

// round(100 * mean(free_d / capacity_d)) over the dimensions with non-zero
// capacity, where free is what remains after placing `request`.
int least_allocated(const ResourceVector& capacity, const ResourceVector& allocatable, const ResourceVector& request);

namespace plugins {

FilterPlugin resource_fit();
FilterPlugin label_selector();
FilterPlugin namespace_policy();
ScorePlugin least_allocated(std::int64_t weight = 1);
// Fullest GPU node first. CPU-only pods prefer nodes without GPUs.
ScorePlugin gpu_binpack(std::int64_t weight = 1);

std::optional<FilterPlugin> filter_by_name(const std::string& name);
std::optional<ScorePlugin> score_by_name(const std::string& name, std::int64_t weight);

} // namespace plugins

// ResourceFit, LabelSelector and NamespacePolicy filters; LeastAllocated
// scoring (weight 1) and GpuBinpack (weight 0, enable via config).
PluginPipeline builtin_plugins();

} // namespace fedsched
