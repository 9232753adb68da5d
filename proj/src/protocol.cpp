#include "fedsched/protocol.hpp"

#include "fedsched/errors.hpp"

#include <stdexcept>

namespace fedsched {

std::string_view to_string(ProxyState s) noexcept {
    switch (s) {
    case ProxyState::CandidatesPending: return "CandidatesPending";
    case ProxyState::Elected: return "Elected";
    case ProxyState::Bound: return "Bound";
    case ProxyState::Unschedulable: return "Unschedulable";
    }
    return "?";
}

std::string_view to_string(ChaperonState s) noexcept {
    switch (s) {
    case ChaperonState::PendingSchedule: return "PendingSchedule";
    case ChaperonState::CandidateReserved: return "CandidateReserved";
    case ChaperonState::Delegate: return "Delegate";
    case ChaperonState::Deleted: return "Deleted";
    }
    return "?";
}

std::string_view to_string(ReportStatus s) noexcept {
    switch (s) {
    case ReportStatus::Reserved: return "Reserved";
    case ReportStatus::Unschedulable: return "Unschedulable";
    case ReportStatus::Conflict: return "Conflict";
    }
    return "?";
}

ProxyState parse_proxy_state(std::string_view s) {
    for (auto v : {ProxyState::CandidatesPending, ProxyState::Elected, ProxyState::Bound, ProxyState::Unschedulable})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown proxy state '" + std::string(s) + "'");
}

ChaperonState parse_chaperon_state(std::string_view s) {
    for (auto v : {ChaperonState::PendingSchedule, ChaperonState::CandidateReserved, ChaperonState::Delegate,
                   ChaperonState::Deleted})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown chaperon state '" + std::string(s) + "'");
}

ReportStatus parse_report_status(std::string_view s) {
    for (auto v : {ReportStatus::Reserved, ReportStatus::Unschedulable, ReportStatus::Conflict})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown report status '" + std::string(s) + "'");
}

std::optional<FederationPlan> federate_pod(const PodSpec& pod, const ClusterId& source, const FederationGraph& graph) {
    if (!pod.federation_eligible) return std::nullopt;
    if (!graph.has_cluster(source)) throw UnknownCluster("unknown source cluster '" + source + "'");
    const auto targets = graph.targets_of(source);
    if (targets.empty()) throw NoTargets("cluster '" + source + "' has no federation targets");

    FederationPlan plan;
    plan.proxy.original = pod;
    plan.proxy.source = source;
    plan.proxy.targets.assign(targets.begin(), targets.end());
    for (const auto& t : targets) plan.creations.push_back({pod.pod_id, source, t});
    return plan;
}

CandidateOutcome candidate_schedule(const PodChaperon& chaperon, const SchedulingSnapshot& snap,
                                    const PluginPipeline& pipeline) {
    if (chaperon.state != ChaperonState::PendingSchedule)
        throw InvariantViolation("chaperon for " + chaperon.pod.pod_id + " in " + chaperon.target +
                                 " is not PendingSchedule");
    CandidateOutcome out{chaperon, {chaperon.target, ReportStatus::Unschedulable, std::nullopt, 0}, false};
    if (auto choice = schedule_one_scored(chaperon.pod, snap, pipeline)) {
        out.chaperon.state = ChaperonState::CandidateReserved;
        out.chaperon.reserved_node = choice->node;
        out.chaperon.score = choice->score;
        out.chaperon.annotations.emplace_back("candidate.status", "schedulable");
        out.chaperon.annotations.emplace_back("candidate.score", std::to_string(choice->score));
        out.report.status = ReportStatus::Reserved;
        out.report.node = choice->node;
        out.report.score = choice->score;
        out.changed = true;
    } else {
        out.report.status = ReportStatus::Unschedulable;
        // Only the first verdict is written; later retries that still fail stay silent.
        const bool reported = !chaperon.annotations.empty() &&
                              chaperon.annotations.back() == std::pair<std::string, std::string>{"candidate.status",
                                                                                                 "unschedulable"};
        if (!reported) {
            out.chaperon.annotations.emplace_back("candidate.status", "unschedulable");
            out.changed = true;
        }
    }
    return out;
}

int aggregate_score(const VirtualNode& vn, const ResourceVector& request) {
    return least_allocated(vn.aggregate.capacity, vn.aggregate.allocatable, request);
}

std::optional<ClusterId> elect_delegate(const ProxyPod& proxy, const std::map<ClusterId, CandidateReport>& reports,
                                        const std::map<ClusterId, VirtualNode>& virtual_nodes,
                                        const std::set<ClusterId>& excluded, const FederationParams& params) {
    std::optional<ClusterId> best;
    int best_score = -1;
    for (const auto& target : proxy.targets) {
        auto r = reports.find(target);
        if (r == reports.end() || r->second.status != ReportStatus::Reserved || excluded.contains(target)) continue;
        if (params.prefer_local && target == proxy.source) return target;
        auto vn = virtual_nodes.find(target);
        const int score = vn == virtual_nodes.end() ? 0 : aggregate_score(vn->second, proxy.original.request);
        if (!best || score > best_score || (score == best_score && target < *best)) {
            best = target;
            best_score = score;
        }
    }
    return best;
}

void mark_elected(ProxyPod& proxy, const ClusterId& target) {
    if (proxy.state != ProxyState::CandidatesPending)
        throw InvariantViolation("proxy " + proxy.original.pod_id + " cannot be elected from " +
                                 std::string(to_string(proxy.state)));
    proxy.state = ProxyState::Elected;
    proxy.elected_target = target;
}

std::vector<ClusterId> finalize(ProxyPod& proxy, const ClusterId& elected) {
    if (proxy.state != ProxyState::Elected || proxy.elected_target != elected)
        throw InvariantViolation("proxy " + proxy.original.pod_id + " is not elected for " + elected);
    proxy.state = ProxyState::Bound;
    proxy.virtual_node = "admiralty-" + elected;
    if (proxy.mirrored_phase == PodPhase::Pending) proxy.mirrored_phase = PodPhase::Bound;
    std::vector<ClusterId> deletions;
    for (const auto& t : proxy.targets)
        if (t != elected) deletions.push_back(t);
    return deletions;
}

void revert_election(ProxyPod& proxy) {
    if (proxy.state != ProxyState::Elected)
        throw InvariantViolation("proxy " + proxy.original.pod_id + " is not Elected");
    proxy.state = ProxyState::CandidatesPending;
    proxy.elected_target.reset();
}

bool proxy_mirror(ProxyPod& proxy, PodPhase delegate_phase) {
    if (proxy.state != ProxyState::Bound)
        throw InvariantViolation("proxy " + proxy.original.pod_id + " mirrors before it is Bound");
    if (proxy.mirrored_phase == delegate_phase) return false;
    proxy.mirrored_phase = delegate_phase;
    return true;
}

} // namespace fedsched
