#pragma once

#include "fedsched/log.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fedsched {

struct PodMetrics {
    PodId pod;
    Namespace ns;
    ClusterId source;
    bool federated = false;
    TimeMs submit_time = 0;
    std::optional<TimeMs> bind_time;
    std::optional<TimeMs> complete_time;
    PodPhase phase = PodPhase::Pending;
    std::optional<Placement> placement;

    std::optional<TimeMs> time_to_bind() const {
        if (!bind_time) return std::nullopt;
        return *bind_time - submit_time;
    }
    friend bool operator==(const PodMetrics&, const PodMetrics&) = default;
};

// Bound requests and capacity of the Ready container pool.
struct UtilizationSample {
    TimeMs time = 0;
    ResourceVector used;
    ResourceVector capacity;
    friend bool operator==(const UtilizationSample&, const UtilizationSample&) = default;
};

// Pods submitted at a cluster that are still Pending.
struct PendingSample {
    TimeMs time = 0;
    std::int64_t depth = 0;
    friend bool operator==(const PendingSample&, const PendingSample&) = default;
};

struct TriggerMetrics {
    std::string trigger;
    std::string camera;
    TimeMs fired_at = 0;
    int model_version = 1;
    std::vector<PodId> pods;
    std::optional<TimeMs> all_bound_at;

    std::optional<TimeMs> latency() const {
        if (!all_bound_at) return std::nullopt;
        return *all_bound_at - fired_at;
    }
    friend bool operator==(const TriggerMetrics&, const TriggerMetrics&) = default;
};

struct MetricsReport {
    std::map<PodId, PodMetrics> pods;
    std::map<ClusterId, std::vector<UtilizationSample>> utilization;
    std::map<ClusterId, std::vector<PendingSample>> pending_depth;
    std::map<std::pair<ClusterId, ClusterId>, std::int64_t> offload_count;
    std::map<std::string, TriggerMetrics> triggers;
    int model_version = 1;
    std::int64_t records = 0;

    std::int64_t offloads(const ClusterId& source, const ClusterId& target) const;
    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Folds log records into a MetricsReport. Fed incrementally by the simulator,
// or from a stored log by metrics_from_log().
class MetricsCollector {
public:
    void record(const LogRecord& r);
    const MetricsReport& report() const noexcept { return report_; }

private:
    void apply(TimeMs t, const Effect& e);

    struct NodeView {
        NodePool pool = NodePool::Container;
        NodeState state = NodeState::Ready;
        ResourceVector capacity;
    };
    struct ClusterView {
        std::map<NodeId, NodeView> nodes;
        ResourceVector used;
        std::int64_t pending = 0;
    };

    MetricsReport report_;
    std::map<ClusterId, ClusterView> clusters_;
    std::map<PodId, std::string> pod_trigger_;
    std::map<std::string, std::set<PodId>> trigger_waiting_;
    std::set<ClusterId> touched_util_;
    std::set<ClusterId> touched_pending_;
};

MetricsReport metrics_from_log(const std::vector<LogRecord>& log);

// Writes pods.csv, utilization.csv, pending.csv, offloads.csv, triggers.csv
// and summary.json into `dir`.
void write_metrics(const MetricsReport& m, const std::filesystem::path& dir);
nlohmann::ordered_json metrics_summary(const MetricsReport& m);

} // namespace fedsched
