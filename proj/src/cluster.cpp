#include "fedsched/cluster.hpp"

#include "fedsched/errors.hpp"

#include <stdexcept>

namespace fedsched {

std::string_view to_string(NodePool p) noexcept {
    return p == NodePool::Batch ? "Batch" : "Container";
}

std::string_view to_string(NodeState s) noexcept {
    switch (s) {
    case NodeState::Ready: return "Ready";
    case NodeState::Draining: return "Draining";
    case NodeState::Repurposing: return "Repurposing";
    }
    return "?";
}

std::string_view to_string(PodPhase p) noexcept {
    switch (p) {
    case PodPhase::Pending: return "Pending";
    case PodPhase::Bound: return "Bound";
    case PodPhase::Running: return "Running";
    case PodPhase::Completed: return "Completed";
    case PodPhase::Failed: return "Failed";
    case PodPhase::Unschedulable: return "Unschedulable";
    }
    return "?";
}

PodPhase parse_pod_phase(std::string_view s) {
    for (auto p : {PodPhase::Pending, PodPhase::Bound, PodPhase::Running, PodPhase::Completed,
                   PodPhase::Failed, PodPhase::Unschedulable})
        if (to_string(p) == s) return p;
    throw std::invalid_argument("unknown pod phase '" + std::string(s) + "'");
}

NodePool parse_node_pool(std::string_view s) {
    if (s == "Batch") return NodePool::Batch;
    if (s == "Container") return NodePool::Container;
    throw std::invalid_argument("unknown node pool '" + std::string(s) + "'");
}

NodeState parse_node_state(std::string_view s) {
    for (auto st : {NodeState::Ready, NodeState::Draining, NodeState::Repurposing})
        if (to_string(st) == s) return st;
    throw std::invalid_argument("unknown node state '" + std::string(s) + "'");
}

bool phase_transition_allowed(PodPhase from, PodPhase to) noexcept {
    using enum PodPhase;
    switch (from) {
    case Pending: return to == Bound || to == Unschedulable;
    case Bound: return to == Running || to == Failed;
    case Running: return to == Completed || to == Failed;
    default: return false;
    }
}

void advance_phase(PodSpec& pod, PodPhase to) {
    if (!phase_transition_allowed(pod.phase, to))
        throw InvariantViolation("pod " + pod.pod_id + ": illegal phase transition " +
                                 std::string(to_string(pod.phase)) + " -> " + std::string(to_string(to)));
    pod.phase = to;
}

bool ClusterSpec::admits(const Namespace& ns) const {
    return !namespace_allowlist || namespace_allowlist->contains(ns);
}

ResourceVector node_allocatable(const NodeSpec& node, std::span<const PodSpec> bound_pods) {
    ResourceVector requested;
    for (const auto& pod : bound_pods) {
        if (!pod.placement || pod.placement->node != node.node_id || pod.placement->cluster != node.cluster_id)
            throw std::invalid_argument("pod " + pod.pod_id + " is not bound to node " + node.node_id);
        requested += pod.request;
    }
    try {
        return checked_sub(node.capacity, requested);
    } catch (const InvariantViolation&) {
        throw InvariantViolation("node " + node.node_id + " overcommitted: capacity " + to_string(node.capacity) +
                                 ", requested " + to_string(requested));
    }
}

bool selector_matches(const Labels& selector, const Labels& labels) {
    for (const auto& [key, value] : selector) {
        auto it = labels.find(key);
        if (it == labels.end() || it->second != value) return false;
    }
    return true;
}

bool fits(const PodSpec& pod, const NodeSpec& node, const ResourceVector& allocatable) {
    if (node.state != NodeState::Ready || node.pool != NodePool::Container) return false;
    return fits_within(pod.request, allocatable) && selector_matches(pod.node_selector, node.labels);
}

// ---------------------------------------------------------------------------

ClusterState::ClusterState(ClusterSpec spec)
    : spec_(std::move(spec)) {
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i) {
        auto& n = spec_.nodes[i];
        if (n.cluster_id.empty()) n.cluster_id = spec_.cluster_id;
        if (!n.capacity.valid()) throw std::invalid_argument("node " + n.node_id + " has negative capacity");
        if (!index_.emplace(n.node_id, i).second)
            throw std::invalid_argument("duplicate node id '" + n.node_id + "' in cluster " + spec_.cluster_id);
    }
    used_.resize(spec_.nodes.size());
    committed_.resize(spec_.nodes.size());
}

std::size_t ClusterState::index_of(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown node '" + id + "' in cluster " + spec_.cluster_id);
    return it->second;
}

const NodeSpec& ClusterState::node(const NodeId& id) const { return spec_.nodes[index_of(id)]; }

bool ClusterState::has_node(const NodeId& id) const { return index_.contains(id); }

void ClusterState::set_node_pool(const NodeId& id, NodePool pool, NodeState state) {
    auto& n = spec_.nodes[index_of(id)];
    n.pool = pool;
    n.state = state;
}

ResourceVector ClusterState::used(const NodeId& id) const { return used_[index_of(id)]; }

ResourceVector ClusterState::allocatable(const NodeId& id) const {
    const auto i = index_of(id);
    return checked_sub(spec_.nodes[i].capacity, used_[i]);
}

ResourceVector ClusterState::committed(const NodeId& id) const { return committed_[index_of(id)]; }

ResourceVector ClusterState::namespace_usage(const Namespace& ns) const {
    auto it = ns_usage_.find(ns);
    return it == ns_usage_.end() ? ResourceVector{} : it->second;
}

bool ClusterState::within_quota(const Namespace& ns, const ResourceVector& extra) const {
    auto q = spec_.namespace_quota.find(ns);
    if (q == spec_.namespace_quota.end()) return true;
    return fits_within(namespace_usage(ns) + extra, q->second);
}

bool ClusterState::node_idle(const NodeId& id) const {
    if (!used_[index_of(id)].is_zero()) return false;
    // Zero-request pods still occupy the node.
    for (const auto& [_, h] : holds_)
        if (h.node == id) return false;
    return true;
}

const Hold* ClusterState::hold(const PodId& pod) const {
    auto it = holds_.find(pod);
    return it == holds_.end() ? nullptr : &it->second;
}

void ClusterState::admit_or_throw(const PodSpec& pod, const NodeId& node_id, const ResourceVector& already_held) const {
    const auto i = index_of(node_id);
    const auto& n = spec_.nodes[i];
    if (!spec_.admits(pod.ns))
        throw NamespaceNotAdmitted("namespace '" + pod.ns + "' not admitted by cluster " + spec_.cluster_id);
    // The pod's own reservation on this node is available to it.
    const ResourceVector free = checked_sub(n.capacity, checked_sub(used_[i], already_held));
    if (!fits(pod, n, free))
        throw BindConflict("pod " + pod.pod_id + " no longer fits node " + node_id + " in " + spec_.cluster_id);
    auto q = spec_.namespace_quota.find(pod.ns);
    if (q != spec_.namespace_quota.end() &&
        !fits_within(checked_sub(namespace_usage(pod.ns), already_held) + pod.request, q->second))
        throw QuotaExceeded("namespace '" + pod.ns + "' over quota in cluster " + spec_.cluster_id);
}

void ClusterState::reserve(const PodSpec& pod, const NodeId& node_id) {
    if (holds_.contains(pod.pod_id))
        throw InvariantViolation("pod " + pod.pod_id + " already holds resources in " + spec_.cluster_id);
    admit_or_throw(pod, node_id, {});
    const auto i = index_of(node_id);
    used_[i] += pod.request;
    ns_usage_[pod.ns] += pod.request;
    holds_.emplace(pod.pod_id, Hold{pod.pod_id, pod.ns, node_id, pod.request, HoldKind::Reserved});
}

void ClusterState::release_reservation(const PodId& pod) {
    auto it = holds_.find(pod);
    if (it == holds_.end() || it->second.kind != HoldKind::Reserved)
        throw InvariantViolation("pod " + pod + " holds no reservation in " + spec_.cluster_id);
    const auto i = index_of(it->second.node);
    used_[i] = checked_sub(used_[i], it->second.request);
    ns_usage_[it->second.ns] = checked_sub(ns_usage_[it->second.ns], it->second.request);
    holds_.erase(it);
}

void ClusterState::commit(const PodSpec& pod, const NodeId& node_id) {
    auto it = holds_.find(pod.pod_id);
    ResourceVector held;
    if (it != holds_.end()) {
        if (it->second.kind != HoldKind::Reserved || it->second.node != node_id)
            throw InvariantViolation("pod " + pod.pod_id + " already bound in " + spec_.cluster_id);
        held = it->second.request;
    }
    admit_or_throw(pod, node_id, held);
    const auto i = index_of(node_id);
    if (it == holds_.end()) {
        used_[i] += pod.request;
        ns_usage_[pod.ns] += pod.request;
        holds_.emplace(pod.pod_id, Hold{pod.pod_id, pod.ns, node_id, pod.request, HoldKind::Bound});
    } else {
        it->second.kind = HoldKind::Bound;
    }
    committed_[i] += pod.request;
}

Hold ClusterState::release(const PodId& pod) {
    auto it = holds_.find(pod);
    if (it == holds_.end() || it->second.kind != HoldKind::Bound)
        throw InvariantViolation("pod " + pod + " is not bound in " + spec_.cluster_id);
    Hold h = it->second;
    const auto i = index_of(h.node);
    used_[i] = checked_sub(used_[i], h.request);
    committed_[i] = checked_sub(committed_[i], h.request);
    ns_usage_[h.ns] = checked_sub(ns_usage_[h.ns], h.request);
    holds_.erase(it);
    return h;
}

ClusterAggregate ClusterState::aggregate() const {
    ClusterAggregate agg;
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i) {
        const auto& n = spec_.nodes[i];
        if (n.pool != NodePool::Container || n.state != NodeState::Ready) continue;
        agg.capacity += n.capacity;
        agg.allocatable += checked_sub(n.capacity, committed_[i]);
    }
    return agg;
}

ResourceVector ClusterState::container_capacity() const { return aggregate().capacity; }

ResourceVector ClusterState::container_committed() const {
    ResourceVector total;
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i)
        if (spec_.nodes[i].pool == NodePool::Container) total += committed_[i];
    return total;
}

void ClusterState::check_invariants() const {
    std::vector<ResourceVector> used(spec_.nodes.size());
    std::map<Namespace, ResourceVector> ns;
    for (const auto& [id, h] : holds_) {
        used[index_of(h.node)] += h.request;
        ns[h.ns] += h.request;
    }
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i) {
        const auto& n = spec_.nodes[i];
        if (used[i] != used_[i])
            throw InvariantViolation("accounting drift on node " + n.node_id + " in " + spec_.cluster_id);
        if (!fits_within(used[i], n.capacity))
            throw InvariantViolation("node " + n.node_id + " in " + spec_.cluster_id + " overcommitted: " +
                                     to_string(used[i]) + " > " + to_string(n.capacity));
        if (n.state == NodeState::Repurposing && !used[i].is_zero())
            throw InvariantViolation("repurposing node " + n.node_id + " holds pods");
    }
    for (const auto& [name, usage] : ns) {
        auto q = spec_.namespace_quota.find(name);
        if (q != spec_.namespace_quota.end() && !fits_within(usage, q->second))
            throw InvariantViolation("namespace '" + name + "' over quota in " + spec_.cluster_id);
    }
}

TimeMs bind(PodSpec& pod, ClusterState& cluster, const NodeId& node, TimeMs at) {
    if (pod.phase != PodPhase::Pending)
        throw InvariantViolation("pod " + pod.pod_id + " is not Pending");
    cluster.commit(pod, node);
    advance_phase(pod, PodPhase::Bound);
    pod.placement = Placement{cluster.id(), node};
    return at + pod.duration;
}

} // namespace fedsched
