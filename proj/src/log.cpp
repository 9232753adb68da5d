#include "fedsched/log.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fedsched {

using ojson = nlohmann::ordered_json;

nlohmann::ordered_json resources_to_json(const ResourceVector& r) {
    return ojson{{"cpu_m", r.cpu_millicores}, {"mem_b", r.memory_bytes}, {"gpu", r.gpu_count}};
}

ResourceVector resources_from_json(const nlohmann::json& j) {
    return {j.at("cpu_m").get<std::int64_t>(), j.at("mem_b").get<std::int64_t>(), j.at("gpu").get<std::int64_t>()};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string str(std::string_view s) { return std::string(s); }

} // namespace

nlohmann::ordered_json payload_to_json(const EventPayload& p) {
    return std::visit(
        overloaded{
            [](const ev::PodSubmit& e) { return ojson{{"pod", e.pod}, {"cluster", e.cluster}}; },
            [](const ev::BatchJobSubmit& e) { return ojson{{"job", e.job}}; },
            [](const ev::ChaperonCreate& e) {
                return ojson{{"pod", e.pod}, {"source", e.source}, {"target", e.target}};
            },
            [](const ev::CandidateReport& e) {
                return ojson{{"pod", e.pod},
                             {"source", e.source},
                             {"target", e.target},
                             {"status", str(to_string(e.status))},
                             {"score", e.score}};
            },
            [](const ev::ElectionTimeout& e) { return ojson{{"pod", e.pod}, {"generation", e.generation}}; },
            [](const ev::DelegateBind& e) {
                return ojson{{"pod", e.pod}, {"source", e.source}, {"target", e.target}};
            },
            [](const ev::CandidateDelete& e) {
                return ojson{{"pod", e.pod}, {"source", e.source}, {"target", e.target}};
            },
            [](const ev::StatusMirror& e) {
                return ojson{{"pod", e.pod}, {"source", e.source}, {"target", e.target}, {"phase", str(to_string(e.phase))}};
            },
            [](const ev::PodComplete& e) { return ojson{{"pod", e.pod}, {"cluster", e.cluster}}; },
            [](const ev::JobComplete& e) { return ojson{{"job", e.job}}; },
            [](const ev::RebalanceTick& e) { return ojson{{"cluster", e.cluster}}; },
            [](const ev::HeartbeatTick&) { return ojson::object(); },
            [](const ev::SensorMessage& e) {
                return ojson{{"camera", e.reading.camera_id}, {"probability", e.reading.smoke_probability}};
            },
            [](const ev::TriggerFired& e) { return ojson{{"trigger", e.trigger}}; },
            [](const ev::AggregateReport& e) {
                return ojson{{"source", e.source},
                             {"target", e.target},
                             {"capacity", resources_to_json(e.aggregate.capacity)},
                             {"allocatable", resources_to_json(e.aggregate.allocatable)}};
            },
            [](const ev::NodeReady& e) { return ojson{{"cluster", e.cluster}, {"node", e.node}}; },
        },
        p);
}

nlohmann::ordered_json effect_to_json(const Effect& e) {
    return std::visit(
        overloaded{
            [](const fx::Submitted& f) {
                return ojson{{"type", "submitted"},      {"pod", f.pod},
                             {"ns", f.ns},               {"source", f.source},
                             {"federated", f.federated}, {"request", resources_to_json(f.request)}};
            },
            [](const fx::Phase& f) {
                return ojson{{"type", "phase"}, {"pod", f.pod}, {"from", str(to_string(f.from))}, {"to", str(to_string(f.to))}};
            },
            [](const fx::Bound& f) {
                return ojson{{"type", "bound"},   {"pod", f.pod},   {"source", f.source},
                             {"cluster", f.cluster}, {"node", f.node}, {"request", resources_to_json(f.request)},
                             {"delegated", f.delegated}};
            },
            [](const fx::Released& f) {
                return ojson{{"type", "released"}, {"pod", f.pod}, {"cluster", f.cluster}, {"node", f.node},
                             {"request", resources_to_json(f.request)}};
            },
            [](const fx::Reserved& f) {
                return ojson{{"type", "reserved"}, {"pod", f.pod}, {"cluster", f.cluster}, {"node", f.node},
                             {"request", resources_to_json(f.request)}};
            },
            [](const fx::Unreserved& f) {
                return ojson{{"type", "unreserved"}, {"pod", f.pod}, {"cluster", f.cluster}, {"node", f.node},
                             {"request", resources_to_json(f.request)}};
            },
            [](const fx::Chaperon& f) {
                return ojson{{"type", "chaperon"}, {"pod", f.pod}, {"cluster", f.cluster}, {"state", str(to_string(f.state))}};
            },
            [](const fx::Proxy& f) {
                return ojson{{"type", "proxy"}, {"pod", f.pod}, {"cluster", f.cluster}, {"state", str(to_string(f.state))},
                             {"target", f.target}};
            },
            [](const fx::Mirror& f) {
                return ojson{{"type", "mirror"}, {"pod", f.pod}, {"cluster", f.cluster}, {"phase", str(to_string(f.phase))}};
            },
            [](const fx::Pool& f) {
                return ojson{{"type", "pool"},
                             {"cluster", f.cluster},
                             {"node", f.node},
                             {"pool", str(to_string(f.pool))},
                             {"state", str(to_string(f.state))},
                             {"capacity", resources_to_json(f.capacity)}};
            },
            [](const fx::Job& f) {
                return ojson{{"type", "job"}, {"job", f.job}, {"cluster", f.cluster}, {"state", str(to_string(f.state))},
                             {"nodes", f.nodes}};
            },
            [](const fx::Registry& f) { return ojson{{"type", "registry"}, {"version", f.version}}; },
            [](const fx::Trigger& f) {
                return ojson{{"type", "trigger"},
                             {"trigger", f.trigger},
                             {"camera", f.camera},
                             {"model_version", f.model_version},
                             {"pods", f.pods}};
            },
        },
        e);
}

Effect effect_from_json(const nlohmann::json& j) {
    const auto type = j.at("type").get<std::string>();
    auto s = [&](const char* k) { return j.at(k).get<std::string>(); };
    if (type == "submitted")
        return fx::Submitted{s("pod"), s("ns"), s("source"), j.at("federated").get<bool>(),
                             resources_from_json(j.at("request"))};
    if (type == "phase") return fx::Phase{s("pod"), parse_pod_phase(s("from")), parse_pod_phase(s("to"))};
    if (type == "bound")
        return fx::Bound{s("pod"), s("source"), s("cluster"), s("node"), resources_from_json(j.at("request")),
                         j.at("delegated").get<bool>()};
    if (type == "released") return fx::Released{s("pod"), s("cluster"), s("node"), resources_from_json(j.at("request"))};
    if (type == "reserved") return fx::Reserved{s("pod"), s("cluster"), s("node"), resources_from_json(j.at("request"))};
    if (type == "unreserved")
        return fx::Unreserved{s("pod"), s("cluster"), s("node"), resources_from_json(j.at("request"))};
    if (type == "chaperon") return fx::Chaperon{s("pod"), s("cluster"), parse_chaperon_state(s("state"))};
    if (type == "proxy") return fx::Proxy{s("pod"), s("cluster"), parse_proxy_state(s("state")), s("target")};
    if (type == "mirror") return fx::Mirror{s("pod"), s("cluster"), parse_pod_phase(s("phase"))};
    if (type == "pool")
        return fx::Pool{s("cluster"), s("node"), parse_node_pool(s("pool")), parse_node_state(s("state")),
                        resources_from_json(j.at("capacity"))};
    if (type == "job") {
        const auto st = s("state");
        JobState js = st == "Queued" ? JobState::Queued : st == "Running" ? JobState::Running : JobState::Done;
        return fx::Job{s("job"), s("cluster"), js, j.at("nodes").get<std::vector<NodeId>>()};
    }
    if (type == "registry") return fx::Registry{j.at("version").get<int>()};
    if (type == "trigger")
        return fx::Trigger{s("trigger"), s("camera"), j.at("model_version").get<int>(),
                           j.at("pods").get<std::vector<PodId>>()};
    throw std::invalid_argument("unknown effect type '" + type + "'");
}

nlohmann::ordered_json record_to_json(const LogRecord& r) {
    ojson effects = ojson::array();
    for (const auto& e : r.effects) effects.push_back(effect_to_json(e));
    return ojson{{"t", r.time}, {"seq", r.seq}, {"kind", r.kind}, {"data", r.data}, {"effects", std::move(effects)}};
}

LogRecord record_from_json(const nlohmann::json& j) {
    LogRecord r;
    r.time = j.at("t").get<TimeMs>();
    r.seq = j.at("seq").get<std::uint64_t>();
    r.kind = j.at("kind").get<std::string>();
    r.data = j.at("data");
    for (const auto& e : j.at("effects")) r.effects.push_back(effect_from_json(e));
    return r;
}

void write_jsonl(std::ostream& out, const std::vector<LogRecord>& log) {
    for (const auto& r : log) out << record_to_json(r).dump() << '\n';
}

std::string to_jsonl(const std::vector<LogRecord>& log) {
    std::ostringstream os;
    write_jsonl(os, log);
    return os.str();
}

std::vector<LogRecord> read_jsonl(std::istream& in) {
    std::vector<LogRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // Parse twice: the ordered copy keeps `data` byte-identical on re-serialization.
        const auto ordered = nlohmann::ordered_json::parse(line);
        auto r = record_from_json(nlohmann::json::parse(line));
        r.data = ordered.at("data");
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace fedsched
