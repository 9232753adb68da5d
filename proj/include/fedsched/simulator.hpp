#pragma once

#include "fedsched/config.hpp"
#include "fedsched/engine.hpp"
#include "fedsched/log.hpp"
#include "fedsched/metrics.hpp"

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fedsched {

// Deterministic discrete-event simulation of federated clusters. All state
// machines advance inside step(); cross-cluster concurrency is expressed as
// interleaved, latency-delayed messages.
class Simulator {
public:
    Simulator(RunConfig config, std::uint64_t seed);

    // Processes events until the queue drains or the next event lies past the
    // configured duration.
    void run();
    // Pops and dispatches the earliest event. Throws EmptyQueue.
    Event step();
    bool done() const;

    TimeMs now() const noexcept { return engine_.now(); }
    const RunConfig& config() const noexcept { return config_; }
    const std::vector<LogRecord>& log() const noexcept { return log_; }
    const MetricsReport& metrics() const noexcept { return metrics_.report(); }

    const ClusterState& cluster(const ClusterId& id) const;
    const PodSpec& pod(const PodId& id) const;
    const ProxyPod* proxy(const PodId& id) const;
    const PodChaperon* chaperon(const PodId& pod, const ClusterId& target) const;
    std::vector<const PodChaperon*> chaperons(const PodId& pod) const;
    const std::map<ClusterId, VirtualNode>& virtual_nodes(const ClusterId& source) const;
    const ModelRegistry& registry() const noexcept { return registry_; }
    const BatchJob& job(const JobId& id) const;
    std::vector<PodId> pod_ids() const;

    // Throws InvariantViolation if any accounting or protocol invariant is broken.
    void check_invariants() const;

private:
    struct PendingItem {
        PodId pod;
        bool chaperon = false;
    };

    struct ClusterRuntime {
        std::unique_ptr<ClusterState> state;
        PluginPipeline pipeline;
        bool metascale = false;
        std::deque<PendingItem> pending;
        std::map<PodId, PodChaperon> chaperons;
        std::vector<JobId> job_queue;  // submission order
        std::map<NodeId, JobId> node_job;
        std::map<NodeId, TimeMs> last_pool_change;
    };

    struct PodRuntime {
        PodSpec spec;
        ClusterId source;
        bool retrain = false;
    };

    struct ProxyRuntime {
        ProxyPod proxy;
        std::map<ClusterId, CandidateReport> reports;
        std::set<ClusterId> excluded;
        int retries = 0;
        std::uint64_t generation = 0;
        bool timer_armed = false;
        bool timed_out = false;
        bool backing_off = false;
    };

    struct JobRuntime {
        BatchJob job;
        ClusterId cluster;
    };

    struct TriggerRuntime {
        CameraEvent reading;
        int model_version = 1;
        std::vector<WorkloadSubmission> submissions;
    };

    void emit(Effect e);
    void schedule(TimeMs at, EventPayload p);
    void send(const std::string& subject, const ClusterId& from, const ClusterId& to, EventPayload p);
    bool busy() const;
    ClusterRuntime& rt(const ClusterId& id);
    PodRuntime& pod_rt(const PodId& id);

    void dispatch(const Event& e);
    void on(const ev::PodSubmit& e);
    void on(const ev::BatchJobSubmit& e);
    void on(const ev::ChaperonCreate& e);
    void on(const ev::CandidateReport& e);
    void on(const ev::ElectionTimeout& e);
    void on(const ev::DelegateBind& e);
    void on(const ev::CandidateDelete& e);
    void on(const ev::StatusMirror& e);
    void on(const ev::PodComplete& e);
    void on(const ev::JobComplete& e);
    void on(const ev::RebalanceTick& e);
    void on(const ev::HeartbeatTick& e);
    void on(const ev::SensorMessage& e);
    void on(const ev::TriggerFired& e);
    void on(const ev::AggregateReport& e);
    void on(const ev::NodeReady& e);

    void set_phase(PodRuntime& p, PodPhase to);
    void start_workload(PodRuntime& p, const ClusterId& cluster, const NodeId& node, bool delegated);
    void try_schedule(const ClusterId& cluster);
    void push_aggregates(const ClusterId& target);
    void evaluate(ProxyRuntime& pr, bool from_timer);
    void arm_timer(ProxyRuntime& pr, TimeMs delay);
    void fail_round(ProxyRuntime& pr);
    void give_up(ProxyRuntime& pr);
    void run_batch(const ClusterId& cluster);
    void release_chaperon(ClusterRuntime& c, PodChaperon& ch);
    void pool_effect(const ClusterId& cluster, const NodeSpec& n);

    RunConfig config_;
    Engine engine_;
    std::map<ClusterId, ClusterRuntime> clusters_;
    std::map<PodId, PodRuntime> pods_;
    std::map<PodId, ProxyRuntime> proxies_;
    std::map<ClusterId, std::map<ClusterId, VirtualNode>> virtual_nodes_;
    std::map<JobId, JobRuntime> jobs_;
    std::map<PodId, int> delegate_count_;
    std::set<std::pair<PodId, ClusterId>> pending_conflicts_;
    std::map<std::string, TriggerRuntime> triggers_;
    std::map<std::string, TimeMs> camera_last_fire_;
    ModelRegistry registry_;
    std::int64_t trigger_counter_ = 0;
    std::int64_t foreground_events_ = 0;

    std::vector<LogRecord> log_;
    LogRecord* current_ = nullptr;
    MetricsCollector metrics_;
};

// Runs a configuration to completion.
struct RunResult {
    MetricsReport metrics;
    std::vector<LogRecord> log;
};
RunResult run(const RunConfig& config, std::uint64_t seed);

} // namespace fedsched
