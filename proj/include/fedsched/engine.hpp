#pragma once

#include "fedsched/graph.hpp"
#include "fedsched/metascale.hpp"
#include "fedsched/protocol.hpp"
#include "fedsched/rng.hpp"
#include "fedsched/wildfire.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace fedsched {

// Event kinds of the federated control and data planes, plus simulator timers.
// AggregateReport and NodeReady extend the base protocol taxonomy.
enum class EventKind {
    PodSubmit,
    BatchJobSubmit,
    ChaperonCreate,
    CandidateReport,
    ElectionTimeout,
    DelegateBind,
    CandidateDelete,
    StatusMirror,
    PodComplete,
    JobComplete,
    RebalanceTick,
    HeartbeatTick,
    SensorMessage,
    TriggerFired,
    AggregateReport,
    NodeReady,
};

std::string_view to_string(EventKind k) noexcept;
EventKind parse_event_kind(std::string_view s);

namespace ev {

struct PodSubmit { PodId pod; ClusterId cluster; };
struct BatchJobSubmit { JobId job; };
struct ChaperonCreate { PodId pod; ClusterId source; ClusterId target; };
struct CandidateReport { PodId pod; ClusterId source; ClusterId target; ReportStatus status; std::int64_t score; };
struct ElectionTimeout { PodId pod; std::uint64_t generation; };
struct DelegateBind { PodId pod; ClusterId source; ClusterId target; };
struct CandidateDelete { PodId pod; ClusterId source; ClusterId target; };
struct StatusMirror { PodId pod; ClusterId source; ClusterId target; PodPhase phase; };
struct PodComplete { PodId pod; ClusterId cluster; };
struct JobComplete { JobId job; };
struct RebalanceTick { ClusterId cluster; };
struct HeartbeatTick {};
struct SensorMessage { CameraEvent reading; };
struct TriggerFired { std::string trigger; };
struct AggregateReport { ClusterId source; ClusterId target; ClusterAggregate aggregate; };
struct NodeReady { ClusterId cluster; NodeId node; };

} // namespace ev

using EventPayload =
    std::variant<ev::PodSubmit, ev::BatchJobSubmit, ev::ChaperonCreate, ev::CandidateReport, ev::ElectionTimeout,
                 ev::DelegateBind, ev::CandidateDelete, ev::StatusMirror, ev::PodComplete, ev::JobComplete,
                 ev::RebalanceTick, ev::HeartbeatTick, ev::SensorMessage, ev::TriggerFired, ev::AggregateReport,
                 ev::NodeReady>;

// Payload alternatives are declared in EventKind order.
EventKind kind_of(const EventPayload& p) noexcept;

struct Event {
    TimeMs time = 0;
    std::uint64_t seq = 0;
    EventPayload payload;

    EventKind kind() const noexcept { return kind_of(payload); }
};

// Ordered, reliable message stream from one cluster to another about one
// subject (a pod id, or the aggregate reports of an edge). Replies travel on
// the reverse channel.
struct ChannelKey {
    std::string subject;
    ClusterId from;
    ClusterId to;
    friend auto operator<=>(const ChannelKey&, const ChannelKey&) = default;
};

// Event queue and clock. Events pop in strict (time, seq) order; seq is
// assigned at scheduling time, so equal-time events keep insertion order.
class Engine {
public:
    explicit Engine(std::uint64_t seed = 0)
        : seed_(seed) {}

    TimeMs now() const noexcept { return now_; }
    std::uint64_t seed() const noexcept { return seed_; }
    bool empty() const noexcept { return queue_.empty(); }
    std::size_t pending() const noexcept { return queue_.size(); }
    std::uint64_t next_seq() const noexcept { return seq_; }
    const Event& peek() const;

    // Throws CausalityError if `at` is before the current clock.
    std::uint64_t schedule(TimeMs at, EventPayload payload);

    // Sends a message over a federation edge: delivered at now + base + jitter,
    // never before an earlier message on the same channel.
    TimeMs deliver(const ChannelKey& channel, const LatencyModel& latency, EventPayload payload);

    // Pops the next event and advances the clock. Throws EmptyQueue.
    Event step();

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const noexcept {
            return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
        }
    };

    std::uint64_t seed_;
    // Jitter draws, one stream per directed cluster pair ("net/<from>><to>").
    std::map<std::pair<ClusterId, ClusterId>, Rng> link_rng_;
    TimeMs now_ = 0;
    std::uint64_t seq_ = 1;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::map<ChannelKey, TimeMs> channel_tail_;
};

} // namespace fedsched
