#include "fedsched/graph.hpp"

#include "fedsched/errors.hpp"

namespace fedsched {

void FederationGraph::add_edge(const ClusterId& source, const ClusterId& target, LatencyModel latency) {
    if (!has_cluster(source)) throw UnknownCluster("unknown source cluster '" + source + "'");
    if (!has_cluster(target)) throw UnknownCluster("unknown target cluster '" + target + "'");
    edges_.insert_or_assign({source, target}, FederationEdge{source, target, latency});
}

bool FederationGraph::has_edge(const ClusterId& source, const ClusterId& target) const {
    return edges_.contains({source, target});
}

const FederationEdge& FederationGraph::edge(const ClusterId& source, const ClusterId& target) const {
    auto it = edges_.find({source, target});
    if (it == edges_.end()) throw UnknownCluster("no edge " + source + " -> " + target);
    return it->second;
}

std::vector<FederationEdge> FederationGraph::edges() const {
    std::vector<FederationEdge> out;
    out.reserve(edges_.size());
    for (const auto& [_, e] : edges_) out.push_back(e);
    return out;
}

std::set<ClusterId> FederationGraph::targets_of(const ClusterId& source) const {
    std::set<ClusterId> out;
    for (auto it = edges_.lower_bound({source, ClusterId{}}); it != edges_.end() && it->first.first == source; ++it)
        out.insert(it->first.second);
    return out;
}

std::set<ClusterId> FederationGraph::sources_of(const ClusterId& target) const {
    std::set<ClusterId> out;
    for (const auto& [key, _] : edges_)
        if (key.second == target) out.insert(key.first);
    return out;
}

FederationGraph build_central(const ClusterId& hub, const std::set<ClusterId>& leaves, LatencyModel latency) {
    if (leaves.contains(hub)) throw HubInLeaves("hub '" + hub + "' is also listed as a leaf");
    FederationGraph g(leaves);
    g.add_cluster(hub);
    for (const auto& leaf : leaves) g.add_edge(hub, leaf, latency);
    return g;
}

FederationGraph build_burst(const ClusterId& local, const ClusterId& cloud, bool self_target, LatencyModel latency) {
    FederationGraph g({local, cloud});
    g.add_edge(local, cloud, latency);
    if (self_target) g.add_edge(local, local, latency);
    return g;
}

FederationGraph build_decentralized(const std::set<ClusterId>& clusters,
                                    const std::set<std::pair<ClusterId, ClusterId>>& pairs, LatencyModel latency) {
    FederationGraph g(clusters);
    for (const auto& [s, t] : pairs) g.add_edge(s, t, latency);
    return g;
}

std::set<std::pair<ClusterId, ClusterId>> complete_pairs(const std::set<ClusterId>& clusters, bool self_edges) {
    std::set<std::pair<ClusterId, ClusterId>> out;
    for (const auto& a : clusters)
        for (const auto& b : clusters)
            if (a != b || self_edges) out.emplace(a, b);
    return out;
}

} // namespace fedsched
