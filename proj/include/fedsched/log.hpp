#pragma once

// Event log: one record per processed event, carrying the event payload and
// every state change ("effect") the event caused. The log alone is enough to
// rebuild the metrics of a run.
//
// Line format (JSON Lines, keys in this order):
//   {"t": <ms>, "seq": <n>, "kind": "<EventKind|Setup>", "data": {...}, "effects": [{"type": ...}, ...]}

#include "fedsched/engine.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace fedsched {

namespace fx {

struct Submitted { PodId pod; Namespace ns; ClusterId source; bool federated = false; ResourceVector request; };
struct Phase { PodId pod; PodPhase from; PodPhase to; };
// `delegated` marks a binding reached through the federation protocol.
struct Bound { PodId pod; ClusterId source; ClusterId cluster; NodeId node; ResourceVector request; bool delegated = false; };
struct Released { PodId pod; ClusterId cluster; NodeId node; ResourceVector request; };
struct Reserved { PodId pod; ClusterId cluster; NodeId node; ResourceVector request; };
struct Unreserved { PodId pod; ClusterId cluster; NodeId node; ResourceVector request; };
struct Chaperon { PodId pod; ClusterId cluster; ChaperonState state; };
struct Proxy { PodId pod; ClusterId cluster; ProxyState state; ClusterId target; };
struct Mirror { PodId pod; ClusterId cluster; PodPhase phase; };
struct Pool { ClusterId cluster; NodeId node; NodePool pool; NodeState state; ResourceVector capacity; };
struct Job { JobId job; ClusterId cluster; JobState state; std::vector<NodeId> nodes; };
struct Registry { int version = 1; };
struct Trigger { std::string trigger; std::string camera; int model_version = 1; std::vector<PodId> pods; };

} // namespace fx

using Effect = std::variant<fx::Submitted, fx::Phase, fx::Bound, fx::Released, fx::Reserved, fx::Unreserved,
                            fx::Chaperon, fx::Proxy, fx::Mirror, fx::Pool, fx::Job, fx::Registry, fx::Trigger>;

struct LogRecord {
    TimeMs time = 0;
    std::uint64_t seq = 0;
    std::string kind;
    nlohmann::ordered_json data;
    std::vector<Effect> effects;
};

nlohmann::ordered_json payload_to_json(const EventPayload& p);
nlohmann::ordered_json effect_to_json(const Effect& e);
Effect effect_from_json(const nlohmann::json& j);

nlohmann::ordered_json record_to_json(const LogRecord& r);
LogRecord record_from_json(const nlohmann::json& j);

std::string to_jsonl(const std::vector<LogRecord>& log);
void write_jsonl(std::ostream& out, const std::vector<LogRecord>& log);
std::vector<LogRecord> read_jsonl(std::istream& in);

nlohmann::ordered_json resources_to_json(const ResourceVector& r);
ResourceVector resources_from_json(const nlohmann::json& j);

} // namespace fedsched
