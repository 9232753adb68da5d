#include "fedsched/metascale.hpp"

#include <algorithm>
#include <cmath>

namespace fedsched {

std::string_view to_string(JobState s) noexcept {
    switch (s) {
    case JobState::Queued: return "Queued";
    case JobState::Running: return "Running";
    case JobState::Done: return "Done";
    }
    return "?";
}

std::vector<JobPlacement> batch_schedule(const std::vector<BatchJob>& queue, std::vector<NodeId> idle_batch_nodes) {
    std::vector<JobPlacement> out;
    std::size_t next = 0;
    for (const auto& job : queue) {
        if (job.state != JobState::Queued) continue;
        const auto need = static_cast<std::size_t>(job.node_count);
        if (idle_batch_nodes.size() - next < need) break;  // no backfill
        JobPlacement p{job.job_id, {}};
        p.nodes.assign(idle_batch_nodes.begin() + static_cast<std::ptrdiff_t>(next),
                       idle_batch_nodes.begin() + static_cast<std::ptrdiff_t>(next + need));
        next += need;
        out.push_back(std::move(p));
    }
    return out;
}

std::int64_t node_equivalents(const ResourceVector& pending, const std::vector<NodePoolStatus>& nodes) {
    if (pending.is_zero() || nodes.empty()) return 0;
    ResourceVector total;
    for (const auto& n : nodes) total += n.capacity;
    const double count = static_cast<double>(nodes.size());
    double worst = 0;
    auto dim = [&](std::int64_t want, std::int64_t cap_sum) {
        if (want <= 0 || cap_sum <= 0) return;
        worst = std::max(worst, static_cast<double>(want) / (static_cast<double>(cap_sum) / count));
    };
    dim(pending.cpu_millicores, total.cpu_millicores);
    dim(pending.memory_bytes, total.memory_bytes);
    dim(pending.gpu_count, total.gpu_count);
    return static_cast<std::int64_t>(std::ceil(worst - 1e-9));
}

std::vector<PoolReassignment> rebalance(const std::vector<NodePoolStatus>& nodes, const PoolDemand& demand,
                                        const MetaScalePolicy& policy, TimeMs now) {
    std::int64_t batch_total = 0, container_total = 0;
    std::int64_t batch_incoming = 0, container_incoming = 0;
    std::vector<const NodePoolStatus*> idle_batch, idle_container;
    for (const auto& n : nodes) {
        (n.pool == NodePool::Batch ? batch_total : container_total) += 1;
        // Nodes still provisioning already count as supply for their new pool.
        if (n.state == NodeState::Repurposing) (n.pool == NodePool::Batch ? batch_incoming : container_incoming) += 1;
        if (n.state != NodeState::Ready || !n.idle) continue;
        (n.pool == NodePool::Batch ? idle_batch : idle_container).push_back(&n);
    }

    const std::int64_t batch_deficit = std::max<std::int64_t>(
        0, demand.batch_queue_depth - static_cast<std::int64_t>(idle_batch.size()) - batch_incoming);
    const std::int64_t container_deficit =
        std::max<std::int64_t>(0, node_equivalents(demand.container_pending, nodes) -
                                      static_cast<std::int64_t>(idle_container.size()) - container_incoming);

    if (batch_deficit == container_deficit) return {};

    const bool to_container = container_deficit > batch_deficit;
    auto& donors = to_container ? idle_batch : idle_container;
    const std::int64_t donor_total = to_container ? batch_total : container_total;
    const std::int64_t donor_min = to_container ? policy.min_batch_nodes : policy.min_container_nodes;
    std::int64_t budget = std::min(to_container ? container_deficit : batch_deficit, donor_total - donor_min);

    std::sort(donors.begin(), donors.end(), [](auto* a, auto* b) { return a->node < b->node; });
    std::vector<PoolReassignment> out;
    for (const auto* n : donors) {
        if (budget <= 0) break;
        if (n->last_pool_change && now - *n->last_pool_change < policy.cooldown) continue;
        out.push_back({n->node, n->pool, to_container ? NodePool::Container : NodePool::Batch});
        --budget;
    }
    return out;
}

} // namespace fedsched
