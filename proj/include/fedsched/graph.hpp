#pragma once

#include "fedsched/cluster.hpp"
#include "fedsched/time.hpp"

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace fedsched {

struct LatencyModel {
    TimeMs base = 10 * kMillisecond;
    TimeMs jitter = 5 * kMillisecond;
    friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

struct FederationEdge {
    ClusterId source;
    ClusterId target;
    LatencyModel latency;
    friend bool operator==(const FederationEdge&, const FederationEdge&) = default;
};

// Directed source->target graph of clusters. Self-edges and 2-cycles are legal.
// A target is represented in its source by a virtual node.
class FederationGraph {
public:
    FederationGraph() = default;
    explicit FederationGraph(std::set<ClusterId> clusters)
        : clusters_(std::move(clusters)) {}

    void add_cluster(const ClusterId& id) { clusters_.insert(id); }

    // Re-adding an existing edge only updates its latency. Throws UnknownCluster.
    void add_edge(const ClusterId& source, const ClusterId& target, LatencyModel latency = {});

    bool has_cluster(const ClusterId& id) const { return clusters_.contains(id); }
    bool has_edge(const ClusterId& source, const ClusterId& target) const;
    const FederationEdge& edge(const ClusterId& source, const ClusterId& target) const;

    const std::set<ClusterId>& clusters() const noexcept { return clusters_; }
    std::vector<FederationEdge> edges() const;
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::set<ClusterId> targets_of(const ClusterId& source) const;
    std::set<ClusterId> sources_of(const ClusterId& target) const;

    friend bool operator==(const FederationGraph&, const FederationGraph&) = default;

private:
    std::set<ClusterId> clusters_;
    std::map<std::pair<ClusterId, ClusterId>, FederationEdge> edges_;
};

// One hub controlling every leaf: hub->L for each leaf. Throws HubInLeaves.
FederationGraph build_central(const ClusterId& hub, const std::set<ClusterId>& leaves, LatencyModel latency = {});

// local->cloud, plus local->local when `self_target` is set.
FederationGraph build_burst(const ClusterId& local, const ClusterId& cloud, bool self_target, LatencyModel latency = {});

// Arbitrary user-declared edges between peers.
FederationGraph build_decentralized(const std::set<ClusterId>& clusters,
                                    const std::set<std::pair<ClusterId, ClusterId>>& pairs,
                                    LatencyModel latency = {});

// Every ordered pair of distinct clusters, optionally with self-edges.
std::set<std::pair<ClusterId, ClusterId>> complete_pairs(const std::set<ClusterId>& clusters, bool self_edges);

} // namespace fedsched
