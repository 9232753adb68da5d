#include "fedsched/config.hpp"

#include "fedsched/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

namespace fedsched {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return join(path, std::to_string(i)); }

const json& expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

const json& expect_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array");
    return j;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    expect_object(j, path);
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(join(path, key), "unknown key");
}

void require(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ConfigError(join(path, key), "missing required field");
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    auto s = j.get<std::string>();
    if (s.empty()) throw ConfigError(path, "must not be empty");
    return s;
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

std::int64_t get_int(const json& j, const std::string& path, std::int64_t min = 0) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < min) throw ConfigError(path, "must be at least " + std::to_string(min));
    return v;
}

std::uint64_t get_u64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) throw ConfigError(path, "must not be negative");
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw ConfigError(path, "expected a non-negative integer");
}

double get_double(const json& j, const std::string& path, double lo, double hi) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (v < lo || v > hi) throw ConfigError(path, "must lie in [" + json(lo).dump() + ", " + json(hi).dump() + "]");
    return v;
}

// "5s", "250ms", or an integer count of milliseconds.
TimeMs get_duration(const json& j, const std::string& path) {
    TimeMs v = 0;
    if (j.is_number_integer()) {
        v = j.get<std::int64_t>();
    } else if (j.is_string()) {
        try {
            v = parse_duration(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path, e.what());
        }
    } else {
        throw ConfigError(path, "expected a duration such as \"5s\" or an integer of milliseconds");
    }
    if (v < 0) throw ConfigError(path, "must not be negative");
    return v;
}

// Number of cores, or a quantity string ("500m", "2").
std::int64_t get_cpu(const json& j, const std::string& path) {
    std::int64_t v = 0;
    try {
        if (j.is_number_integer()) v = j.get<std::int64_t>() * 1000;
        else if (j.is_number()) v = parse_cpu(j.dump());
        else if (j.is_string()) v = parse_cpu(j.get<std::string>());
        else throw ConfigError(path, "expected a cpu quantity");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    if (v < 0) throw ConfigError(path, "must not be negative");
    return v;
}

// Bytes, or a quantity string ("16Gi").
std::int64_t get_memory(const json& j, const std::string& path) {
    std::int64_t v = 0;
    try {
        if (j.is_number_integer()) v = j.get<std::int64_t>();
        else if (j.is_string()) v = parse_memory(j.get<std::string>());
        else throw ConfigError(path, "expected a memory quantity");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    if (v < 0) throw ConfigError(path, "must not be negative");
    return v;
}

ResourceVector get_resources(const json& j, const std::string& path) {
    only_keys(j, path, {"cpu", "memory", "gpu"});
    ResourceVector r;
    if (j.contains("cpu")) r.cpu_millicores = get_cpu(j["cpu"], join(path, "cpu"));
    if (j.contains("memory")) r.memory_bytes = get_memory(j["memory"], join(path, "memory"));
    if (j.contains("gpu")) r.gpu_count = get_int(j["gpu"], join(path, "gpu"));
    return r;
}

Labels get_labels(const json& j, const std::string& path) {
    expect_object(j, path);
    Labels out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) throw ConfigError(join(path, k), "label values must be strings");
        out[k] = v.get<std::string>();
    }
    return out;
}

LatencyModel get_latency(const json& j, const std::string& path, LatencyModel base) {
    only_keys(j, path, {"base", "jitter"});
    if (j.contains("base")) base.base = get_duration(j["base"], join(path, "base"));
    if (j.contains("jitter")) base.jitter = get_duration(j["jitter"], join(path, "jitter"));
    return base;
}

std::string numbered(const std::string& prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", i);
    return prefix + buf;
}

// ---------------------------------------------------------------------------

std::vector<NodeSpec> parse_nodes(const json& arr, const std::string& path, const ClusterId& cluster) {
    std::vector<NodeSpec> out;
    expect_array(arr, path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto p = join(path, i);
        const auto& j = arr[i];
        only_keys(j, p, {"id", "cpu", "memory", "gpu", "labels", "pool", "count"});
        require(j, p, "id");
        NodeSpec base;
        base.node_id = get_string(j["id"], join(p, "id"));
        base.cluster_id = cluster;
        if (j.contains("cpu")) base.capacity.cpu_millicores = get_cpu(j["cpu"], join(p, "cpu"));
        if (j.contains("memory")) base.capacity.memory_bytes = get_memory(j["memory"], join(p, "memory"));
        if (j.contains("gpu")) base.capacity.gpu_count = get_int(j["gpu"], join(p, "gpu"));
        if (j.contains("labels")) base.labels = get_labels(j["labels"], join(p, "labels"));
        if (j.contains("pool")) {
            const auto pool = get_string(j["pool"], join(p, "pool"));
            if (pool == "batch") base.pool = NodePool::Batch;
            else if (pool == "container") base.pool = NodePool::Container;
            else throw ConfigError(join(p, "pool"), "expected \"batch\" or \"container\"");
        }
        const auto count = j.contains("count") ? get_int(j["count"], join(p, "count"), 1) : 1;
        if (count == 1) {
            out.push_back(base);
        } else {
            for (int k = 0; k < count; ++k) {
                auto n = base;
                n.node_id = base.node_id + "-" + std::to_string(k);
                out.push_back(std::move(n));
            }
        }
    }
    return out;
}

PluginPipeline parse_scheduler(const json& j, const std::string& path) {
    only_keys(j, path, {"filters", "scores"});
    PluginPipeline out = builtin_plugins();
    if (j.contains("filters")) {
        const auto fp = join(path, "filters");
        expect_array(j["filters"], fp);
        out.filters.clear();
        for (std::size_t i = 0; i < j["filters"].size(); ++i) {
            const auto name = get_string(j["filters"][i], join(fp, i));
            auto f = plugins::filter_by_name(name);
            if (!f) throw ConfigError(join(fp, i), "unknown filter plugin '" + name + "'");
            out.filters.push_back(std::move(*f));
        }
    }
    if (j.contains("scores")) {
        const auto sp = join(path, "scores");
        expect_array(j["scores"], sp);
        out.scores.clear();
        for (std::size_t i = 0; i < j["scores"].size(); ++i) {
            const auto p = join(sp, i);
            const auto& s = j["scores"][i];
            only_keys(s, p, {"plugin", "weight"});
            require(s, p, "plugin");
            const auto name = get_string(s["plugin"], join(p, "plugin"));
            const auto weight = s.contains("weight") ? get_int(s["weight"], join(p, "weight")) : 1;
            auto plugin = plugins::score_by_name(name, weight);
            if (!plugin) throw ConfigError(join(p, "plugin"), "unknown score plugin '" + name + "'");
            out.scores.push_back(std::move(*plugin));
        }
    }
    return out;
}

ClusterConfig parse_cluster(const json& j, const std::string& path) {
    only_keys(j, path, {"id", "profile", "scale_divisor", "batch_nodes", "nodes", "namespaces", "scheduler", "metascale"});
    require(j, path, "id");
    ClusterConfig c;
    c.spec.cluster_id = get_string(j["id"], join(path, "id"));
    const auto& id = c.spec.cluster_id;

    const int divisor = j.contains("scale_divisor") ? static_cast<int>(get_int(j["scale_divisor"], join(path, "scale_divisor"), 1)) : 1;
    const int batch = j.contains("batch_nodes") ? static_cast<int>(get_int(j["batch_nodes"], join(path, "batch_nodes"))) : 0;
    if (j.contains("profile")) {
        const auto profile = get_string(j["profile"], join(path, "profile"));
        try {
            c.spec.nodes = profile_nodes(profile, id, divisor, batch);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(join(path, "profile"), e.what());
        }
    } else if (j.contains("scale_divisor") || j.contains("batch_nodes")) {
        throw ConfigError(path, "scale_divisor and batch_nodes apply to profiles only");
    }
    if (j.contains("nodes")) {
        auto extra = parse_nodes(j["nodes"], join(path, "nodes"), id);
        c.spec.nodes.insert(c.spec.nodes.end(), extra.begin(), extra.end());
    }

    if (j.contains("namespaces")) {
        const auto np = join(path, "namespaces");
        const auto& ns = j["namespaces"];
        only_keys(ns, np, {"allow", "quota"});
        if (ns.contains("allow")) {
            const auto ap = join(np, "allow");
            expect_array(ns["allow"], ap);
            std::set<Namespace> allow;
            for (std::size_t i = 0; i < ns["allow"].size(); ++i) allow.insert(get_string(ns["allow"][i], join(ap, i)));
            c.spec.namespace_allowlist = std::move(allow);
        }
        if (ns.contains("quota")) {
            const auto qp = join(np, "quota");
            expect_object(ns["quota"], qp);
            for (const auto& [name, q] : ns["quota"].items()) c.spec.namespace_quota[name] = get_resources(q, join(qp, name));
        }
    }
    if (j.contains("scheduler")) c.pipeline = parse_scheduler(j["scheduler"], join(path, "scheduler"));
    if (j.contains("metascale")) c.metascale = get_bool(j["metascale"], join(path, "metascale"));
    return c;
}

FederationGraph parse_topology_graph(const json& t, const std::string& path, const std::set<ClusterId>& ids) {
    const auto latency = t.contains("default_latency") ? get_latency(t["default_latency"], join(path, "default_latency"), {})
                                                      : LatencyModel{};
    const auto kind = t.contains("kind") ? get_string(t["kind"], join(path, "kind")) : std::string("decentralized");

    auto known = [&](const json& v, const std::string& p) {
        auto id = get_string(v, p);
        if (!ids.contains(id)) throw ConfigError(p, "unknown cluster '" + id + "'");
        return id;
    };

    if (kind == "central") {
        if (t.contains("edges") || t.contains("burst")) throw ConfigError(join(path, "kind"), "central topology takes only the 'central' section");
        require(t, path, "central");
        const auto cp = join(path, "central");
        const auto& c = t["central"];
        only_keys(c, cp, {"hub", "leaves"});
        require(c, cp, "hub");
        require(c, cp, "leaves");
        const auto hub = known(c["hub"], join(cp, "hub"));
        expect_array(c["leaves"], join(cp, "leaves"));
        std::set<ClusterId> leaves;
        for (std::size_t i = 0; i < c["leaves"].size(); ++i) leaves.insert(known(c["leaves"][i], join(join(cp, "leaves"), i)));
        try {
            auto g = build_central(hub, leaves, latency);
            for (const auto& id : ids) g.add_cluster(id);
            return g;
        } catch (const HubInLeaves& e) {
            throw ConfigError(join(cp, "leaves"), e.what());
        }
    }
    if (kind == "burst") {
        if (t.contains("edges") || t.contains("central")) throw ConfigError(join(path, "kind"), "burst topology takes only the 'burst' section");
        require(t, path, "burst");
        const auto bp = join(path, "burst");
        const auto& b = t["burst"];
        only_keys(b, bp, {"local", "cloud", "self_target"});
        require(b, bp, "local");
        require(b, bp, "cloud");
        const auto local = known(b["local"], join(bp, "local"));
        const auto cloud = known(b["cloud"], join(bp, "cloud"));
        const bool self = b.contains("self_target") ? get_bool(b["self_target"], join(bp, "self_target")) : true;
        auto g = build_burst(local, cloud, self, latency);
        for (const auto& id : ids) g.add_cluster(id);
        return g;
    }
    if (kind != "decentralized")
        throw ConfigError(join(path, "kind"), "expected \"decentralized\", \"central\" or \"burst\"");
    if (t.contains("central") || t.contains("burst"))
        throw ConfigError(join(path, "kind"), "decentralized topology takes only the 'edges' section");

    FederationGraph g(ids);
    if (!t.contains("edges")) return g;
    const auto ep = join(path, "edges");
    expect_array(t["edges"], ep);
    for (std::size_t i = 0; i < t["edges"].size(); ++i) {
        const auto p = join(ep, i);
        const auto& e = t["edges"][i];
        only_keys(e, p, {"source", "target", "latency"});
        require(e, p, "source");
        require(e, p, "target");
        const auto src = get_string(e["source"], join(p, "source"));
        const auto tgt = get_string(e["target"], join(p, "target"));
        if (!ids.contains(src) || !ids.contains(tgt))
            throw ConfigError(p, "edge " + src + " -> " + tgt + " references unknown cluster '" +
                                     (ids.contains(src) ? tgt : src) + "'");
        const auto lat = e.contains("latency") ? get_latency(e["latency"], join(p, "latency"), latency) : latency;
        g.add_edge(src, tgt, lat);
    }
    return g;
}

FederationParams parse_federation(const json& j, const std::string& path) {
    only_keys(j, path, {"election_timeout", "retry_backoff", "max_retries", "hop_limit", "reservations", "heartbeat", "prefer_local"});
    FederationParams f;
    if (j.contains("election_timeout")) f.election_timeout = get_duration(j["election_timeout"], join(path, "election_timeout"));
    if (j.contains("retry_backoff")) f.retry_backoff = get_duration(j["retry_backoff"], join(path, "retry_backoff"));
    if (j.contains("max_retries")) f.max_retries = static_cast<int>(get_int(j["max_retries"], join(path, "max_retries")));
    if (j.contains("hop_limit")) f.hop_limit = static_cast<int>(get_int(j["hop_limit"], join(path, "hop_limit")));
    if (j.contains("reservations")) f.reservations = get_bool(j["reservations"], join(path, "reservations"));
    if (j.contains("heartbeat")) f.heartbeat = get_duration(j["heartbeat"], join(path, "heartbeat"));
    if (j.contains("prefer_local")) f.prefer_local = get_bool(j["prefer_local"], join(path, "prefer_local"));
    return f;
}

MetaScalePolicy parse_metascale(const json& j, const std::string& path) {
    only_keys(j, path, {"tick", "provisioning_delay", "cooldown", "min_batch_nodes", "min_container_nodes"});
    MetaScalePolicy m;
    if (j.contains("tick")) m.tick = get_duration(j["tick"], join(path, "tick"));
    if (j.contains("provisioning_delay")) m.provisioning_delay = get_duration(j["provisioning_delay"], join(path, "provisioning_delay"));
    if (j.contains("cooldown")) m.cooldown = get_duration(j["cooldown"], join(path, "cooldown"));
    if (j.contains("min_batch_nodes")) m.min_batch_nodes = static_cast<int>(get_int(j["min_batch_nodes"], join(path, "min_batch_nodes")));
    if (j.contains("min_container_nodes"))
        m.min_container_nodes = static_cast<int>(get_int(j["min_container_nodes"], join(path, "min_container_nodes")));
    return m;
}

// Fields shared by scenario pods and workload templates.
void apply_pod_fields(PodSpec& pod, const json& j, const std::string& path) {
    if (j.contains("namespace")) pod.ns = get_string(j["namespace"], join(path, "namespace"));
    if (j.contains("cpu")) pod.request.cpu_millicores = get_cpu(j["cpu"], join(path, "cpu"));
    if (j.contains("memory")) pod.request.memory_bytes = get_memory(j["memory"], join(path, "memory"));
    if (j.contains("gpu")) pod.request.gpu_count = get_int(j["gpu"], join(path, "gpu"));
    if (j.contains("selector")) pod.node_selector = get_labels(j["selector"], join(path, "selector"));
    if (j.contains("duration")) pod.duration = get_duration(j["duration"], join(path, "duration"));
}

std::vector<PodSubmission> parse_pods(const json& arr, const std::string& path) {
    expect_array(arr, path);
    std::vector<PodSubmission> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto p = join(path, i);
        const auto& j = arr[i];
        only_keys(j, p, {"id", "cluster", "namespace", "cpu", "memory", "gpu", "selector", "federated", "submit",
                         "duration", "count", "interval"});
        require(j, p, "id");
        require(j, p, "cluster");
        PodSubmission base;
        base.pod.pod_id = get_string(j["id"], join(p, "id"));
        base.cluster = get_string(j["cluster"], join(p, "cluster"));
        apply_pod_fields(base.pod, j, p);
        if (j.contains("federated")) base.pod.federation_eligible = get_bool(j["federated"], join(p, "federated"));
        if (j.contains("submit")) base.pod.submit_time = get_duration(j["submit"], join(p, "submit"));
        const auto count = j.contains("count") ? get_int(j["count"], join(p, "count"), 1) : 1;
        const auto interval = j.contains("interval") ? get_duration(j["interval"], join(p, "interval")) : 0;
        if (count == 1) {
            out.push_back(base);
            continue;
        }
        for (std::int64_t k = 0; k < count; ++k) {
            auto s = base;
            s.pod.pod_id = base.pod.pod_id + "-" + std::to_string(k);
            s.pod.submit_time = base.pod.submit_time + k * interval;
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<JobSubmission> parse_jobs(const json& arr, const std::string& path) {
    expect_array(arr, path);
    std::vector<JobSubmission> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto p = join(path, i);
        const auto& j = arr[i];
        only_keys(j, p, {"id", "cluster", "nodes", "submit", "duration"});
        require(j, p, "id");
        require(j, p, "cluster");
        JobSubmission s;
        s.job.job_id = get_string(j["id"], join(p, "id"));
        s.cluster = get_string(j["cluster"], join(p, "cluster"));
        if (j.contains("nodes")) s.job.node_count = static_cast<int>(get_int(j["nodes"], join(p, "nodes"), 1));
        if (j.contains("submit")) s.job.submit_time = get_duration(j["submit"], join(p, "submit"));
        if (j.contains("duration")) s.job.duration = get_duration(j["duration"], join(p, "duration"));
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<CameraEvent> parse_trace_events(const json& arr, const std::string& path) {
    expect_array(arr, path);
    std::vector<CameraEvent> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto p = join(path, i);
        const auto& j = arr[i];
        only_keys(j, p, {"camera", "time", "probability"});
        require(j, p, "camera");
        require(j, p, "time");
        require(j, p, "probability");
        out.push_back({get_string(j["camera"], join(p, "camera")), get_duration(j["time"], join(p, "time")),
                       get_double(j["probability"], join(p, "probability"), 0.0, 1.0)});
    }
    return out;
}

std::vector<CameraEvent> parse_generator(const json& j, const std::string& path) {
    only_keys(j, path, {"cameras", "rate_per_hour", "duration", "p_high", "high_min", "high_max", "low_max", "seed"});
    require(j, path, "cameras");
    require(j, path, "rate_per_hour");
    require(j, path, "duration");
    TraceParams tp;
    const auto cp = join(path, "cameras");
    expect_array(j["cameras"], cp);
    for (std::size_t i = 0; i < j["cameras"].size(); ++i) tp.cameras.push_back(get_string(j["cameras"][i], join(cp, i)));
    tp.rate_per_hour = get_double(j["rate_per_hour"], join(path, "rate_per_hour"), 0.0, 1e9);
    tp.duration = get_duration(j["duration"], join(path, "duration"));
    if (j.contains("p_high")) tp.p_high = get_double(j["p_high"], join(path, "p_high"), 0.0, 1.0);
    if (j.contains("high_min")) tp.high_min = get_double(j["high_min"], join(path, "high_min"), 0.0, 1.0);
    if (j.contains("high_max")) tp.high_max = get_double(j["high_max"], join(path, "high_max"), 0.0, 1.0);
    if (j.contains("low_max")) tp.low_max = get_double(j["low_max"], join(path, "low_max"), 0.0, 1.0);
    if (tp.high_min > tp.high_max) throw ConfigError(join(path, "high_min"), "must not exceed high_max");
    // The trace is part of the scenario, so it has its own seed rather than the run seed.
    const auto seed = j.contains("seed") ? get_u64(j["seed"], join(path, "seed")) : 1;
    return generate_trace(tp, seed);
}

WildfireConfig parse_wildfire(const json& j, const std::string& path, const std::filesystem::path& base_dir) {
    only_keys(j, path, {"submit_cluster", "threshold", "ensemble_size", "camera_cooldown", "trigger_delay", "retrain",
                        "ensemble", "trace", "trace_file", "generator"});
    require(j, path, "submit_cluster");
    WildfireConfig w;
    w.submit_cluster = get_string(j["submit_cluster"], join(path, "submit_cluster"));
    if (j.contains("threshold")) w.rule.confidence_threshold = get_double(j["threshold"], join(path, "threshold"), 0.0, 1.0);
    if (j.contains("ensemble_size")) w.rule.ensemble_size = static_cast<int>(get_int(j["ensemble_size"], join(path, "ensemble_size"), 1));
    if (j.contains("camera_cooldown")) w.rule.camera_cooldown = get_duration(j["camera_cooldown"], join(path, "camera_cooldown"));
    if (j.contains("trigger_delay")) w.trigger_delay = get_duration(j["trigger_delay"], join(path, "trigger_delay"));
    for (const char* key : {"retrain", "ensemble"}) {
        if (!j.contains(key)) continue;
        const auto p = join(path, key);
        only_keys(j[key], p, {"namespace", "cpu", "memory", "gpu", "selector", "duration"});
        apply_pod_fields(std::string_view(key) == "retrain" ? w.rule.retrain_template : w.rule.ensemble_template, j[key], p);
    }

    const int sources = int(j.contains("trace")) + int(j.contains("trace_file")) + int(j.contains("generator"));
    if (sources > 1) throw ConfigError(path, "give at most one of trace, trace_file, generator");
    if (j.contains("trace")) {
        w.trace = parse_trace_events(j["trace"], join(path, "trace"));
    } else if (j.contains("trace_file")) {
        const auto p = join(path, "trace_file");
        std::filesystem::path file = get_string(j["trace_file"], p);
        if (file.is_relative()) file = base_dir / file;
        std::ifstream in(file);
        if (!in) throw ConfigError(p, "cannot read trace file " + file.string());
        try {
            w.trace = load_trace(in);
        } catch (const std::exception& e) {
            throw ConfigError(p, e.what());
        }
    } else if (j.contains("generator")) {
        w.trace = parse_generator(j["generator"], join(path, "generator"));
    }
    std::stable_sort(w.trace.begin(), w.trace.end(),
                     [](const CameraEvent& a, const CameraEvent& b) { return a.time < b.time; });
    return w;
}

FaultConfig parse_faults(const json& j, const std::string& path) {
    only_keys(j, path, {"bind_conflicts", "drop_reports"});
    FaultConfig f;
    if (j.contains("bind_conflicts")) {
        const auto bp = join(path, "bind_conflicts");
        expect_array(j["bind_conflicts"], bp);
        for (std::size_t i = 0; i < j["bind_conflicts"].size(); ++i) {
            const auto p = join(bp, i);
            const auto& e = j["bind_conflicts"][i];
            only_keys(e, p, {"pod", "cluster"});
            require(e, p, "pod");
            require(e, p, "cluster");
            f.bind_conflicts.insert({get_string(e["pod"], join(p, "pod")), get_string(e["cluster"], join(p, "cluster"))});
        }
    }
    if (j.contains("drop_reports")) {
        const auto dp = join(path, "drop_reports");
        expect_array(j["drop_reports"], dp);
        for (std::size_t i = 0; i < j["drop_reports"].size(); ++i) {
            const auto p = join(dp, i);
            const auto& e = j["drop_reports"][i];
            only_keys(e, p, {"source", "target"});
            require(e, p, "source");
            require(e, p, "target");
            f.drop_reports.insert({get_string(e["source"], join(p, "source")), get_string(e["target"], join(p, "target"))});
        }
    }
    return f;
}

SimParams parse_sim(const json& j, const std::string& path) {
    only_keys(j, path, {"seed", "duration", "check_invariants"});
    SimParams s;
    if (j.contains("seed")) s.seed = get_u64(j["seed"], join(path, "seed"));
    if (j.contains("duration")) s.duration = get_duration(j["duration"], join(path, "duration"));
    if (j.contains("check_invariants")) s.check_invariants = get_bool(j["check_invariants"], join(path, "check_invariants"));
    return s;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

// ---------------------------------------------------------------------------

std::vector<NodeSpec> profile_nodes(const std::string& profile, const ClusterId& cluster, int divisor, int batch_nodes) {
    if (divisor < 1) throw std::invalid_argument("scale divisor must be at least 1");
    struct Kind {
        std::string name;
        int count;
        ResourceVector capacity;
        Labels labels;
    };
    std::vector<Kind> kinds;
    if (profile == "expanse-sscu") {
        kinds = {
            {"std", 56, ResourceVector::cores(128, 256), {{"node-type", "standard"}, {"memory-class", "large"}}},
            {"gpu", 4, ResourceVector::cores(40, 384, 4),
             {{"node-type", "gpu"}, {"gpu-model", "V100"}, {"accelerator", "nvidia-gpu"}, {"memory-class", "large"}}},
        };
    } else if (profile == "nautilus-mini") {
        kinds = {
            {"cpu-small", 4, ResourceVector::cores(4, 16), {{"node-type", "standard"}}},
            {"cpu", 4, ResourceVector::cores(32, 128), {{"node-type", "standard"}}},
            {"bigmem", 2, ResourceVector::cores(96, 4096), {{"node-type", "standard"}, {"memory-class", "large"}}},
            {"gtx1080", 2, ResourceVector::cores(16, 64, 4),
             {{"node-type", "gpu"}, {"gpu-model", "1080"}, {"accelerator", "nvidia-gpu"}}},
            {"gtx1080ti", 2, ResourceVector::cores(16, 96, 8),
             {{"node-type", "gpu"}, {"gpu-model", "1080Ti"}, {"accelerator", "nvidia-gpu"}}},
            {"a100", 1, ResourceVector::cores(64, 512, 8),
             {{"node-type", "gpu"}, {"gpu-model", "A100"}, {"accelerator", "nvidia-gpu"}, {"memory-class", "large"}}},
        };
    } else {
        throw std::invalid_argument("unknown node profile '" + profile + "'");
    }

    std::vector<NodeSpec> out;
    int batch_left = batch_nodes;
    for (const auto& k : kinds) {
        const int n = std::max(1, k.count / divisor);
        for (int i = 0; i < n; ++i) {
            NodeSpec node{numbered(cluster + "-" + k.name + "-", i), cluster, k.capacity, k.labels};
            if (k.labels.at("node-type") == "standard" && batch_left > 0) {
                node.pool = NodePool::Batch;
                --batch_left;
            }
            out.push_back(std::move(node));
        }
    }
    if (batch_left > 0) throw std::invalid_argument("batch_nodes exceeds the number of standard nodes");
    return out;
}

const ClusterConfig& RunConfig::cluster(const ClusterId& id) const {
    for (const auto& c : clusters)
        if (c.spec.cluster_id == id) return c;
    throw UnknownCluster("unknown cluster '" + id + "'");
}

void RunConfig::validate() const {
    if (clusters.empty()) throw ConfigError("topology.clusters", "at least one cluster is required");
    std::set<ClusterId> ids;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const auto p = join("topology.clusters", i);
        const auto& spec = clusters[i].spec;
        if (spec.cluster_id.empty()) throw ConfigError(join(p, "id"), "must not be empty");
        if (!ids.insert(spec.cluster_id).second) throw ConfigError(join(p, "id"), "duplicate cluster id '" + spec.cluster_id + "'");
        std::set<NodeId> nodes;
        for (const auto& n : spec.nodes) {
            if (n.node_id.empty()) throw ConfigError(join(p, "nodes"), "node id must not be empty");
            if (!nodes.insert(n.node_id).second) throw ConfigError(join(p, "nodes"), "duplicate node id '" + n.node_id + "'");
            if (n.cluster_id != spec.cluster_id) throw ConfigError(join(p, "nodes"), "node '" + n.node_id + "' belongs to another cluster");
            if (!n.capacity.valid()) throw ConfigError(join(p, "nodes"), "node '" + n.node_id + "' has negative capacity");
            if (n.state != NodeState::Ready) throw ConfigError(join(p, "nodes"), "node '" + n.node_id + "' must start Ready");
        }
        for (const auto& [ns, q] : spec.namespace_quota)
            if (!q.valid()) throw ConfigError(join(join(p, "namespaces.quota"), ns), "must not be negative");
    }
    if (graph.clusters() != ids) throw ConfigError("topology", "federation graph clusters differ from the declared clusters");
    for (const auto& e : graph.edges())
        if (e.latency.base < 0 || e.latency.jitter < 0)
            throw ConfigError("topology.edges", "edge " + e.source + " -> " + e.target + " has negative latency");

    if (federation.hop_limit != 1)
        throw ConfigError("federation.hop_limit", "only single-hop federation (hop_limit 1) is supported");
    if (federation.election_timeout <= 0) throw ConfigError("federation.election_timeout", "must be positive");
    if (federation.retry_backoff <= 0) throw ConfigError("federation.retry_backoff", "must be positive");
    if (federation.max_retries < 0 || federation.max_retries > 30) throw ConfigError("federation.max_retries", "must lie in [0, 30]");
    if (federation.heartbeat < 0) throw ConfigError("federation.heartbeat", "must not be negative");
    if (metascale.tick <= 0) throw ConfigError("metascale.tick", "must be positive");
    if (metascale.provisioning_delay < 0) throw ConfigError("metascale.provisioning_delay", "must not be negative");
    if (metascale.cooldown < 0) throw ConfigError("metascale.cooldown", "must not be negative");
    if (metascale.min_batch_nodes < 0 || metascale.min_container_nodes < 0)
        throw ConfigError("metascale", "pool minimums must not be negative");
    if (sim.duration < 0) throw ConfigError("sim.duration", "must not be negative");

    std::set<PodId> pods;
    for (std::size_t i = 0; i < scenario.pods.size(); ++i) {
        const auto p = join("scenario.pods", i);
        const auto& s = scenario.pods[i];
        if (s.pod.pod_id.empty()) throw ConfigError(join(p, "id"), "must not be empty");
        if (!pods.insert(s.pod.pod_id).second) throw ConfigError(join(p, "id"), "duplicate pod id '" + s.pod.pod_id + "'");
        if (!ids.contains(s.cluster)) throw ConfigError(join(p, "cluster"), "unknown cluster '" + s.cluster + "'");
        if (!s.pod.request.valid()) throw ConfigError(p, "negative request");
        if (s.pod.submit_time < 0 || s.pod.duration < 0) throw ConfigError(p, "negative time");
        if (s.pod.phase != PodPhase::Pending) throw ConfigError(p, "pods must start Pending");
    }
    std::set<JobId> jobs;
    for (std::size_t i = 0; i < scenario.jobs.size(); ++i) {
        const auto p = join("scenario.batch_jobs", i);
        const auto& s = scenario.jobs[i];
        if (s.job.job_id.empty()) throw ConfigError(join(p, "id"), "must not be empty");
        if (!jobs.insert(s.job.job_id).second) throw ConfigError(join(p, "id"), "duplicate job id '" + s.job.job_id + "'");
        if (!ids.contains(s.cluster)) throw ConfigError(join(p, "cluster"), "unknown cluster '" + s.cluster + "'");
        if (s.job.node_count < 1) throw ConfigError(join(p, "nodes"), "must be at least 1");
        if (s.job.submit_time < 0 || s.job.duration < 0) throw ConfigError(p, "negative time");
    }
    if (const auto& w = scenario.wildfire) {
        const std::string p = "scenario.wildfire";
        if (!ids.contains(w->submit_cluster)) throw ConfigError(join(p, "submit_cluster"), "unknown cluster '" + w->submit_cluster + "'");
        if (w->rule.confidence_threshold < 0 || w->rule.confidence_threshold > 1) throw ConfigError(join(p, "threshold"), "must lie in [0, 1]");
        if (w->rule.ensemble_size < 1) throw ConfigError(join(p, "ensemble_size"), "must be at least 1");
        if (w->rule.retrain_template.request.gpu_count < 1) throw ConfigError(join(p, "retrain.gpu"), "retraining needs at least one GPU");
        if (!w->rule.retrain_template.request.valid() || !w->rule.ensemble_template.request.valid())
            throw ConfigError(p, "negative template request");
        for (const auto& e : w->trace)
            if (e.time < 0 || e.smoke_probability < 0 || e.smoke_probability > 1)
                throw ConfigError(join(p, "trace"), "malformed event for camera '" + e.camera_id + "'");
        for (const auto& id : pods)
            if (id.starts_with("trig")) throw ConfigError("scenario.pods", "pod ids starting with 'trig' are reserved for wildfire triggers");
    }
    for (const auto& [pod, cluster] : faults.bind_conflicts)
        if (!ids.contains(cluster)) throw ConfigError("faults.bind_conflicts", "unknown cluster '" + cluster + "'");
    for (const auto& [src, tgt] : faults.drop_reports)
        if (!graph.has_edge(src, tgt)) throw ConfigError("faults.drop_reports", "no edge " + src + " -> " + tgt);
}

RunConfig parse_config_json(const json& root, const std::filesystem::path& base_dir) {
    if (root.is_null()) throw ConfigError("", "empty configuration");
    only_keys(root, "", {"topology", "federation", "metascale", "scenario", "faults", "sim"});
    require(root, "", "topology");
    RunConfig cfg;

    const auto& t = root["topology"];
    only_keys(t, "topology", {"kind", "clusters", "edges", "central", "burst", "default_latency"});
    require(t, "topology", "clusters");
    expect_array(t["clusters"], "topology.clusters");
    std::set<ClusterId> ids;
    for (std::size_t i = 0; i < t["clusters"].size(); ++i) {
        const auto p = join("topology.clusters", i);
        cfg.clusters.push_back(parse_cluster(t["clusters"][i], p));
        if (!ids.insert(cfg.clusters.back().spec.cluster_id).second)
            throw ConfigError(join(p, "id"), "duplicate cluster id '" + cfg.clusters.back().spec.cluster_id + "'");
    }
    cfg.graph = parse_topology_graph(t, "topology", ids);

    if (root.contains("federation")) cfg.federation = parse_federation(root["federation"], "federation");
    if (root.contains("metascale")) cfg.metascale = parse_metascale(root["metascale"], "metascale");
    if (root.contains("scenario")) {
        const auto& s = root["scenario"];
        only_keys(s, "scenario", {"pods", "batch_jobs", "wildfire"});
        if (s.contains("pods")) cfg.scenario.pods = parse_pods(s["pods"], "scenario.pods");
        if (s.contains("batch_jobs")) cfg.scenario.jobs = parse_jobs(s["batch_jobs"], "scenario.batch_jobs");
        if (s.contains("wildfire")) cfg.scenario.wildfire = parse_wildfire(s["wildfire"], "scenario.wildfire", base_dir);
    }
    if (root.contains("faults")) cfg.faults = parse_faults(root["faults"], "faults");
    if (root.contains("sim")) cfg.sim = parse_sim(root["sim"], "sim");

    cfg.validate();
    return cfg;
}

namespace {

json parse_json_text(const std::string& text, const std::string& origin) {
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
        throw ConfigError(origin, "empty configuration");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte);
        std::string what = e.what();
        if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col), what);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

json load_config_json(const std::filesystem::path& path) { return parse_json_text(read_file(path), path.string()); }

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    return parse_config_json(parse_json_text(text, origin));
}

RunConfig parse_config(const std::filesystem::path& path) {
    return parse_config_json(load_config_json(path), path.parent_path());
}

void set_config_value(json& j, const std::string& dotted_path, const json& value) {
    if (dotted_path.empty()) throw ConfigError("", "empty parameter path");
    json* cur = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted_path.find('.', start);
        const auto key = dotted_path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        const auto here = dotted_path.substr(0, dot);
        if (key.empty()) throw ConfigError(dotted_path, "malformed parameter path");
        json* next = nullptr;
        if (cur->is_array()) {
            std::size_t idx = 0;
            auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
            if (ec != std::errc() || ptr != key.data() + key.size() || idx >= cur->size())
                throw ConfigError(here, "no such array element");
            next = &(*cur)[idx];
        } else if (cur->is_object() || cur->is_null()) {
            next = &(*cur)[key];
        } else {
            throw ConfigError(here, "cannot descend into a scalar");
        }
        if (dot == std::string::npos) {
            *next = value;
            return;
        }
        cur = next;
        start = dot + 1;
    }
}

} // namespace fedsched
