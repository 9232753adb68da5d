#pragma once

// Multi-cluster scheduling protocol: a federated pod is replaced in its source
// cluster by a proxy pod, a chaperon (candidate pod) is created in every
// target, each target's own scheduler decides whether the candidate fits, and
// the source elects exactly one candidate as the delegate that actually runs.
//
// The functions here are the pure state transitions; the simulator moves the
// messages between clusters.

#include "fedsched/cluster.hpp"
#include "fedsched/graph.hpp"
#include "fedsched/scheduling.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fedsched {

struct FederationParams {
    TimeMs election_timeout = 5 * kSecond;
    TimeMs retry_backoff = 1 * kSecond;  // doubled after every failed round
    int max_retries = 5;
    int hop_limit = 1;
    bool reservations = true;
    TimeMs heartbeat = 10 * kSecond;
    // A reserved candidate in the source cluster itself (self-edge) wins the
    // election outright, so burst topologies only overflow when local is full.
    bool prefer_local = true;

    friend bool operator==(const FederationParams&, const FederationParams&) = default;
};

// A target cluster as seen from a source. The aggregate is a report, possibly stale.
struct VirtualNode {
    ClusterId source;
    ClusterId target;
    ClusterAggregate aggregate;
    TimeMs reported_at = 0;

    std::string name() const { return "admiralty-" + target; }
    TimeMs staleness(TimeMs now) const { return now - reported_at; }
};

enum class ProxyState { CandidatesPending, Elected, Bound, Unschedulable };
enum class ChaperonState { PendingSchedule, CandidateReserved, Delegate, Deleted };
enum class ReportStatus { Reserved, Unschedulable, Conflict };

std::string_view to_string(ProxyState s) noexcept;
std::string_view to_string(ChaperonState s) noexcept;
std::string_view to_string(ReportStatus s) noexcept;
ProxyState parse_proxy_state(std::string_view s);
ChaperonState parse_chaperon_state(std::string_view s);
ReportStatus parse_report_status(std::string_view s);

// Placeholder for a federated pod in its source cluster. Never consumes node
// resources; it mirrors the delegate's phase once bound.
struct ProxyPod {
    PodSpec original;
    ClusterId source;
    std::vector<ClusterId> targets;
    ProxyState state = ProxyState::CandidatesPending;
    std::optional<ClusterId> elected_target;
    std::string virtual_node;  // set once Bound
    PodPhase mirrored_phase = PodPhase::Pending;
};

using Annotations = std::vector<std::pair<std::string, std::string>>;

// Candidate copy of a federated pod in one target cluster. Its annotations
// carry the candidate scheduler's verdict back to the proxy scheduler.
struct PodChaperon {
    PodSpec pod;
    ClusterId source;
    ClusterId target;
    ChaperonState state = ChaperonState::PendingSchedule;
    Annotations annotations;
    std::optional<NodeId> reserved_node;
    std::int64_t score = 0;
};

struct CandidateReport {
    ClusterId target;
    ReportStatus status = ReportStatus::Unschedulable;
    std::optional<NodeId> node;
    std::int64_t score = 0;
};

struct ChaperonCreation {
    PodId pod;
    ClusterId source;
    ClusterId target;
};

struct FederationPlan {
    ProxyPod proxy;
    std::vector<ChaperonCreation> creations;
};

// Replaces an opted-in pod by a proxy and fans a chaperon out to every target
// of `source`. Nothing for pods that did not opt in. Throws NoTargets.
std::optional<FederationPlan> federate_pod(const PodSpec& pod, const ClusterId& source, const FederationGraph& graph);

struct CandidateOutcome {
    PodChaperon chaperon;
    CandidateReport report;
    bool changed = false;  // state moved; a report must be sent
};

// Runs the target's own scheduler for a PendingSchedule chaperon. On success
// the chaperon becomes CandidateReserved on the chosen node; the caller holds
// the node's resources. Otherwise it stays PendingSchedule.
CandidateOutcome candidate_schedule(const PodChaperon& chaperon, const SchedulingSnapshot& snap,
                                    const PluginPipeline& pipeline);

// Score the proxy scheduler gives a virtual node: LeastAllocated over the
// reported aggregate after subtracting the pod's request.
int aggregate_score(const VirtualNode& vn, const ResourceVector& request);

// Picks the delegate among targets whose latest report is Reserved and that
// are not excluded. Highest aggregate score wins, ties to the smallest cluster
// id; with prefer_local a reserved self-target wins outright. Nothing when no
// candidate is reserved (AllUnschedulable). Reads reports and virtual-node
// aggregates only.
std::optional<ClusterId> elect_delegate(const ProxyPod& proxy, const std::map<ClusterId, CandidateReport>& reports,
                                        const std::map<ClusterId, VirtualNode>& virtual_nodes,
                                        const std::set<ClusterId>& excluded, const FederationParams& params);

// proxy -> Elected(target).
void mark_elected(ProxyPod& proxy, const ClusterId& target);

// Delegate bound in `elected`: proxy -> Bound on the virtual node. Returns the
// targets whose chaperons must now be deleted.
std::vector<ClusterId> finalize(ProxyPod& proxy, const ClusterId& elected);

// Delegate bind failed: proxy -> CandidatesPending for re-election.
void revert_election(ProxyPod& proxy);

// Reflects a delegate phase change on a Bound proxy. Returns true if it changed.
bool proxy_mirror(ProxyPod& proxy, PodPhase delegate_phase);

} // namespace fedsched
