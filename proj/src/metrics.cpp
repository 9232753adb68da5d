#include "fedsched/metrics.hpp"

#include <fstream>
#include <stdexcept>

namespace fedsched {

std::int64_t MetricsReport::offloads(const ClusterId& source, const ClusterId& target) const {
    auto it = offload_count.find({source, target});
    return it == offload_count.end() ? 0 : it->second;
}

void MetricsCollector::record(const LogRecord& r) {
    ++report_.records;
    for (const auto& e : r.effects) apply(r.time, e);

    for (const auto& c : touched_util_) {
        const auto& view = clusters_[c];
        UtilizationSample s{r.time, view.used, {}};
        for (const auto& [_, n] : view.nodes)
            if (n.pool == NodePool::Container && n.state == NodeState::Ready) s.capacity += n.capacity;
        auto& series = report_.utilization[c];
        if (!series.empty() && series.back().time == s.time) series.back() = s;
        else series.push_back(s);
    }
    for (const auto& c : touched_pending_) {
        PendingSample s{r.time, clusters_[c].pending};
        auto& series = report_.pending_depth[c];
        if (!series.empty() && series.back().time == s.time) series.back() = s;
        else series.push_back(s);
    }
    touched_util_.clear();
    touched_pending_.clear();
}

void MetricsCollector::apply(TimeMs t, const Effect& e) {
    if (auto* f = std::get_if<fx::Submitted>(&e)) {
        PodMetrics m;
        m.pod = f->pod;
        m.ns = f->ns;
        m.source = f->source;
        m.federated = f->federated;
        m.submit_time = t;
        report_.pods[f->pod] = m;
        ++clusters_[f->source].pending;
        touched_pending_.insert(f->source);
    } else if (auto* f = std::get_if<fx::Phase>(&e)) {
        auto& m = report_.pods.at(f->pod);
        if (f->from == PodPhase::Pending) {
            --clusters_[m.source].pending;
            touched_pending_.insert(m.source);
        }
        m.phase = f->to;
        if (f->to == PodPhase::Completed || f->to == PodPhase::Failed) m.complete_time = t;
    } else if (auto* f = std::get_if<fx::Bound>(&e)) {
        auto& m = report_.pods.at(f->pod);
        m.bind_time = t;
        m.placement = Placement{f->cluster, f->node};
        clusters_[f->cluster].used += f->request;
        touched_util_.insert(f->cluster);
        if (f->delegated) ++report_.offload_count[{f->source, f->cluster}];
        if (auto trig = pod_trigger_.find(f->pod); trig != pod_trigger_.end()) {
            auto& waiting = trigger_waiting_[trig->second];
            waiting.erase(f->pod);
            if (waiting.empty()) report_.triggers.at(trig->second).all_bound_at = t;
        }
    } else if (auto* f = std::get_if<fx::Released>(&e)) {
        auto& used = clusters_[f->cluster].used;
        used = checked_sub(used, f->request);
        touched_util_.insert(f->cluster);
    } else if (auto* f = std::get_if<fx::Pool>(&e)) {
        clusters_[f->cluster].nodes[f->node] = {f->pool, f->state, f->capacity};
        touched_util_.insert(f->cluster);
    } else if (auto* f = std::get_if<fx::Registry>(&e)) {
        report_.model_version = f->version;
    } else if (auto* f = std::get_if<fx::Trigger>(&e)) {
        TriggerMetrics tm{f->trigger, f->camera, t, f->model_version, f->pods, std::nullopt};
        report_.triggers[f->trigger] = tm;
        for (const auto& p : f->pods) pod_trigger_[p] = f->trigger;
        trigger_waiting_[f->trigger] = {f->pods.begin(), f->pods.end()};
    }
}

MetricsReport metrics_from_log(const std::vector<LogRecord>& log) {
    MetricsCollector c;
    for (const auto& r : log) c.record(r);
    return c.report();
}

namespace {

std::ofstream open_csv(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

template <class T>
std::string opt(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string();
}

} // namespace

nlohmann::ordered_json metrics_summary(const MetricsReport& m) {
    nlohmann::ordered_json j;
    std::map<std::string, std::int64_t> phases;
    std::int64_t federated = 0, bound = 0;
    TimeMs ttb_sum = 0, ttb_max = 0;
    for (const auto& [_, p] : m.pods) {
        ++phases[std::string(to_string(p.phase))];
        federated += p.federated ? 1 : 0;
        if (auto ttb = p.time_to_bind()) {
            ++bound;
            ttb_sum += *ttb;
            ttb_max = std::max(ttb_max, *ttb);
        }
    }
    j["pods"] = m.pods.size();
    j["federated_pods"] = federated;
    j["phases"] = phases;
    j["bound_pods"] = bound;
    j["mean_time_to_bind_ms"] = bound ? static_cast<double>(ttb_sum) / static_cast<double>(bound) : 0.0;
    j["max_time_to_bind_ms"] = ttb_max;
    nlohmann::ordered_json offloads = nlohmann::ordered_json::array();
    for (const auto& [edge, n] : m.offload_count)
        offloads.push_back({{"source", edge.first}, {"target", edge.second}, {"count", n}});
    j["offloads"] = offloads;
    j["triggers"] = m.triggers.size();
    j["model_version"] = m.model_version;
    j["log_records"] = m.records;
    return j;
}

void write_metrics(const MetricsReport& m, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_csv(dir / "pods.csv");
        out << "pod,namespace,source,federated,submit_ms,bind_ms,time_to_bind_ms,complete_ms,phase,cluster,node\n";
        for (const auto& [id, p] : m.pods) {
            out << id << ',' << p.ns << ',' << p.source << ',' << (p.federated ? 1 : 0) << ',' << p.submit_time << ','
                << opt(p.bind_time) << ',' << opt(p.time_to_bind()) << ',' << opt(p.complete_time) << ','
                << to_string(p.phase) << ',' << (p.placement ? p.placement->cluster : "") << ','
                << (p.placement ? p.placement->node : "") << '\n';
        }
    }
    {
        auto out = open_csv(dir / "utilization.csv");
        out << "cluster,time_ms,cpu_used_m,cpu_capacity_m,mem_used_b,mem_capacity_b,gpu_used,gpu_capacity\n";
        for (const auto& [c, series] : m.utilization)
            for (const auto& s : series)
                out << c << ',' << s.time << ',' << s.used.cpu_millicores << ',' << s.capacity.cpu_millicores << ','
                    << s.used.memory_bytes << ',' << s.capacity.memory_bytes << ',' << s.used.gpu_count << ','
                    << s.capacity.gpu_count << '\n';
    }
    {
        auto out = open_csv(dir / "pending.csv");
        out << "cluster,time_ms,pending\n";
        for (const auto& [c, series] : m.pending_depth)
            for (const auto& s : series) out << c << ',' << s.time << ',' << s.depth << '\n';
    }
    {
        auto out = open_csv(dir / "offloads.csv");
        out << "source,target,count\n";
        for (const auto& [edge, n] : m.offload_count) out << edge.first << ',' << edge.second << ',' << n << '\n';
    }
    {
        auto out = open_csv(dir / "triggers.csv");
        out << "trigger,camera,fired_ms,model_version,pods,all_bound_ms,latency_ms\n";
        for (const auto& [id, t] : m.triggers)
            out << id << ',' << t.camera << ',' << t.fired_at << ',' << t.model_version << ',' << t.pods.size() << ','
                << opt(t.all_bound_at) << ',' << opt(t.latency()) << '\n';
    }
    std::ofstream summary(dir / "summary.json");
    if (!summary) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
    summary << metrics_summary(m).dump(2) << '\n';
}

} // namespace fedsched
