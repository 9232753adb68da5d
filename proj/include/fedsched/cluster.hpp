#pragma once

#include "fedsched/resources.hpp"
#include "fedsched/time.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedsched {

using ClusterId = std::string;
using NodeId = std::string;
using PodId = std::string;
using Namespace = std::string;
using Labels = std::map<std::string, std::string>;

enum class NodePool { Batch, Container };
enum class NodeState { Ready, Draining, Repurposing };

enum class PodPhase { Pending, Bound, Running, Completed, Failed, Unschedulable };

std::string_view to_string(NodePool p) noexcept;
std::string_view to_string(NodeState s) noexcept;
std::string_view to_string(PodPhase p) noexcept;
PodPhase parse_pod_phase(std::string_view s);
NodePool parse_node_pool(std::string_view s);
NodeState parse_node_state(std::string_view s);

// Legal moves: Pending->Bound->Running->Completed, Pending->Unschedulable,
// {Bound,Running}->Failed.
bool phase_transition_allowed(PodPhase from, PodPhase to) noexcept;

struct NodeSpec {
    NodeId node_id;
    ClusterId cluster_id;
    ResourceVector capacity;
    Labels labels;
    NodePool pool = NodePool::Container;
    NodeState state = NodeState::Ready;
};

struct Placement {
    ClusterId cluster;
    NodeId node;
    friend bool operator==(const Placement&, const Placement&) = default;
};

struct PodSpec {
    PodId pod_id;
    Namespace ns = "default";
    ResourceVector request;
    Labels node_selector;
    bool federation_eligible = false;
    TimeMs submit_time = 0;
    TimeMs duration = 0;
    PodPhase phase = PodPhase::Pending;
    std::optional<Placement> placement;
};

// Moves `pod` to `to`; throws InvariantViolation on an illegal transition.
void advance_phase(PodSpec& pod, PodPhase to);

struct ClusterSpec {
    ClusterId cluster_id;
    std::vector<NodeSpec> nodes;
    // Unset means every namespace is admitted.
    std::optional<std::set<Namespace>> namespace_allowlist;
    // Namespaces without an entry are unlimited.
    std::map<Namespace, ResourceVector> namespace_quota;

    bool admits(const Namespace& ns) const;
};

// Capacity minus the summed requests of `bound_pods`. Every pod must be placed
// on `node`; a negative result is reported as InvariantViolation.
ResourceVector node_allocatable(const NodeSpec& node, std::span<const PodSpec> bound_pods);

bool selector_matches(const Labels& selector, const Labels& labels);

// Feasibility: request fits `allocatable` and every selector entry matches the
// node's labels. Nodes that are not Ready members of the Container pool never fit.
bool fits(const PodSpec& pod, const NodeSpec& node, const ResourceVector& allocatable);

enum class HoldKind { Reserved, Bound };

struct Hold {
    PodId pod;
    Namespace ns;
    NodeId node;
    ResourceVector request;
    HoldKind kind = HoldKind::Bound;
};

// Aggregate of a cluster's Ready container nodes as reported to sources.
struct ClusterAggregate {
    ResourceVector capacity;
    ResourceVector allocatable;
    friend bool operator==(const ClusterAggregate&, const ClusterAggregate&) = default;
};

// Mutable resource accounting for one cluster. Holds are either reservations
// (candidate pods waiting on an election) or bindings of running workloads;
// both count against node allocatable and namespace quota.
class ClusterState {
public:
    explicit ClusterState(ClusterSpec spec);

    const ClusterSpec& spec() const noexcept { return spec_; }
    const ClusterId& id() const noexcept { return spec_.cluster_id; }
    const std::vector<NodeSpec>& nodes() const noexcept { return spec_.nodes; }
    const NodeSpec& node(const NodeId& id) const;
    bool has_node(const NodeId& id) const;

    void set_node_pool(const NodeId& id, NodePool pool, NodeState state);

    ResourceVector used(const NodeId& id) const;
    ResourceVector allocatable(const NodeId& id) const;
    // Usage from bindings only, ignoring reservations.
    ResourceVector committed(const NodeId& id) const;
    ResourceVector namespace_usage(const Namespace& ns) const;
    bool within_quota(const Namespace& ns, const ResourceVector& extra) const;
    bool node_idle(const NodeId& id) const;

    const std::map<PodId, Hold>& holds() const noexcept { return holds_; }
    const Hold* hold(const PodId& pod) const;

    // Place a reservation; throws BindConflict / QuotaExceeded / NamespaceNotAdmitted.
    void reserve(const PodSpec& pod, const NodeId& node);
    void release_reservation(const PodId& pod);
    // Bind `pod` to `node`. If the pod holds a reservation on that node it is
    // converted in place. Throws like reserve().
    void commit(const PodSpec& pod, const NodeId& node);
    // Remove a binding (pod completed or failed). Returns the released hold.
    Hold release(const PodId& pod);

    // Committed-only aggregate over Ready container nodes.
    ClusterAggregate aggregate() const;
    ResourceVector container_capacity() const;
    ResourceVector container_committed() const;

    // Recomputes accounting from scratch and compares against the capacity and
    // quota limits; throws InvariantViolation on any breach.
    void check_invariants() const;

private:
    std::size_t index_of(const NodeId& id) const;
    void admit_or_throw(const PodSpec& pod, const NodeId& node, const ResourceVector& already_held) const;

    ClusterSpec spec_;
    std::map<NodeId, std::size_t> index_;
    std::vector<ResourceVector> used_;
    std::vector<ResourceVector> committed_;
    std::map<Namespace, ResourceVector> ns_usage_;
    std::map<PodId, Hold> holds_;
};

// Binds `pod` in `cluster` at time `at`: phase -> Bound, placement set,
// accounting updated. Returns the implied completion time (at + duration).
// Throws BindConflict or QuotaExceeded and leaves the pod Pending.
TimeMs bind(PodSpec& pod, ClusterState& cluster, const NodeId& node, TimeMs at);

} // namespace fedsched
