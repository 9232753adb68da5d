#include "fedsched/engine.hpp"

#include "fedsched/errors.hpp"

#include <stdexcept>

namespace fedsched {

namespace {

constexpr std::string_view kKindNames[] = {
    "PodSubmit",     "BatchJobSubmit", "ChaperonCreate", "CandidateReport", "ElectionTimeout", "DelegateBind",
    "CandidateDelete", "StatusMirror", "PodComplete",    "JobComplete",     "RebalanceTick",   "HeartbeatTick",
    "SensorMessage", "TriggerFired",   "AggregateReport", "NodeReady",
};
static_assert(std::size(kKindNames) == std::variant_size_v<EventPayload>);

} // namespace

std::string_view to_string(EventKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }

EventKind parse_event_kind(std::string_view s) {
    for (std::size_t i = 0; i < std::size(kKindNames); ++i)
        if (kKindNames[i] == s) return static_cast<EventKind>(i);
    throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

EventKind kind_of(const EventPayload& p) noexcept { return static_cast<EventKind>(p.index()); }

const Event& Engine::peek() const {
    if (queue_.empty()) throw EmptyQueue("event queue is empty");
    return queue_.top();
}

std::uint64_t Engine::schedule(TimeMs at, EventPayload payload) {
    if (at < now_)
        throw CausalityError("event " + std::string(to_string(kind_of(payload))) + " scheduled at " +
                             std::to_string(at) + "ms, before the clock (" + std::to_string(now_) + "ms)");
    const auto seq = seq_++;
    queue_.push(Event{at, seq, std::move(payload)});
    return seq;
}

TimeMs Engine::deliver(const ChannelKey& channel, const LatencyModel& latency, EventPayload payload) {
    TimeMs at = now_ + latency.base;
    if (latency.jitter > 0) {
        auto key = std::pair{channel.from, channel.to};
        auto it = link_rng_.find(key);
        if (it == link_rng_.end())
            it = link_rng_.emplace(key, Rng(seed_, "net/" + channel.from + ">" + channel.to)).first;
        at += it->second.uniform_int(0, latency.jitter);
    }
    // FIFO per channel: equal times keep send order through seq.
    auto [tail, inserted] = channel_tail_.try_emplace(channel, at);
    if (!inserted) {
        at = std::max(at, tail->second);
        tail->second = at;
    }
    schedule(at, std::move(payload));
    return at;
}

Event Engine::step() {
    if (queue_.empty()) throw EmptyQueue("event queue is empty");
    Event e = queue_.top();
    queue_.pop();
    if (e.time < now_) throw CausalityError("clock would move backwards");
    now_ = e.time;
    return e;
}

} // namespace fedsched
