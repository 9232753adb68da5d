#pragma once

#include "fedsched/cluster.hpp"

#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace fedsched {

using JobId = std::string;

enum class JobState { Queued, Running, Done };
std::string_view to_string(JobState s) noexcept;

// Whole-node batch job (Slurm-like, FIFO without backfill).
struct BatchJob {
    JobId job_id;
    int node_count = 1;
    TimeMs duration = 0;
    TimeMs submit_time = 0;
    JobState state = JobState::Queued;
    std::vector<NodeId> nodes;
    TimeMs start_time = -1;
};

struct JobPlacement {
    JobId job;
    std::vector<NodeId> nodes;
};

// Starts jobs from the head of `queue` while enough idle batch nodes remain.
// The first job that does not fit blocks everything behind it. Nodes are
// handed out in the order given.
std::vector<JobPlacement> batch_schedule(const std::vector<BatchJob>& queue, std::vector<NodeId> idle_batch_nodes);

struct MetaScalePolicy {
    TimeMs tick = 60 * kSecond;
    TimeMs provisioning_delay = 120 * kSecond;
    TimeMs cooldown = 10 * kMinute;
    int min_batch_nodes = 0;
    int min_container_nodes = 0;

    friend bool operator==(const MetaScalePolicy&, const MetaScalePolicy&) = default;
};

struct PoolDemand {
    std::int64_t batch_queue_depth = 0;  // node count requested by queued jobs
    ResourceVector container_pending;    // summed requests of unscheduled pods
    TimeMs window = 0;
};

struct NodePoolStatus {
    NodeId node;
    NodePool pool = NodePool::Container;
    NodeState state = NodeState::Ready;
    bool idle = true;  // no bound pods, reservations or running job
    ResourceVector capacity;
    std::optional<TimeMs> last_pool_change;
};

struct PoolReassignment {
    NodeId node;
    NodePool from;
    NodePool to;
};

// Converts pending container requests into whole nodes using the mean
// per-dimension node capacity of the cluster; the largest dimension wins.
std::int64_t node_equivalents(const ResourceVector& pending, const std::vector<NodePoolStatus>& nodes);

// Moves idle, Ready, non-pinned nodes toward the pool with the larger deficit.
// Deficits are measured in nodes after subtracting each pool's idle and
// still-provisioning nodes.
// Pool minimums are respected; nodes moved within `cooldown` stay put.
std::vector<PoolReassignment> rebalance(const std::vector<NodePoolStatus>& nodes, const PoolDemand& demand,
                                        const MetaScalePolicy& policy, TimeMs now);

} // namespace fedsched
