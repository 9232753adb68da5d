#include "fedsched/wildfire.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace fedsched {

TriggerRule default_trigger_rule() {
    TriggerRule rule;
    rule.retrain_template.ns = "wildfire";
    rule.retrain_template.request = ResourceVector::cores(8, 64, 1);
    rule.retrain_template.node_selector = {{"accelerator", "nvidia-gpu"}};
    rule.retrain_template.duration = 30 * kMinute;
    rule.retrain_template.federation_eligible = true;

    rule.ensemble_template.ns = "wildfire";
    rule.ensemble_template.request = ResourceVector::cores(16, 128, 0);
    rule.ensemble_template.node_selector = {{"memory-class", "large"}};
    rule.ensemble_template.duration = 10 * kMinute;
    rule.ensemble_template.federation_eligible = true;
    return rule;
}

std::vector<WorkloadSubmission> on_message(const CameraEvent& event, const TriggerRule& rule,
                                           const std::string& id_prefix) {
    std::vector<WorkloadSubmission> out;
    if (event.smoke_probability < rule.confidence_threshold) return out;

    PodSpec retrain = rule.retrain_template;
    retrain.pod_id = id_prefix + "-retrain";
    retrain.submit_time = event.time;
    retrain.federation_eligible = true;
    retrain.phase = PodPhase::Pending;
    out.push_back({std::move(retrain), WorkloadRole::Retrain});

    for (int i = 0; i < rule.ensemble_size; ++i) {
        PodSpec sim = rule.ensemble_template;
        sim.pod_id = id_prefix + "-sim" + std::to_string(i);
        sim.submit_time = event.time;
        sim.federation_eligible = true;
        sim.phase = PodPhase::Pending;
        out.push_back({std::move(sim), WorkloadRole::Ensemble});
    }
    return out;
}

ModelRegistry::ModelRegistry()
    : created_{0} {}

int ModelRegistry::retrain_complete(TimeMs at) {
    if (at < created_.back()) throw std::invalid_argument("model registry: version created in the past");
    created_.push_back(at);
    return latest();
}

int ModelRegistry::read(TimeMs at) const {
    auto it = std::upper_bound(created_.begin(), created_.end(), at);
    return static_cast<int>(it - created_.begin());
}

std::vector<CameraEvent> generate_trace(const TraceParams& params, std::uint64_t seed) {
    std::vector<CameraEvent> out;
    if (params.rate_per_hour <= 0 || params.duration <= 0) return out;
    const double rate_per_ms = params.rate_per_hour / static_cast<double>(kHour);
    for (const auto& camera : params.cameras) {
        Rng rng(seed, "trace/" + camera);
        double t = 0;
        while (true) {
            t += rng.exponential(rate_per_ms);
            const auto at = static_cast<TimeMs>(std::floor(t));
            if (at >= params.duration) break;
            const double p = rng.bernoulli(params.p_high) ? rng.uniform(params.high_min, params.high_max)
                                                          : rng.uniform(0.0, params.low_max);
            out.push_back({camera, at, std::min(1.0, p)});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CameraEvent& a, const CameraEvent& b) {
        return a.time != b.time ? a.time < b.time : a.camera_id < b.camera_id;
    });
    return out;
}

std::vector<CameraEvent> load_trace(std::istream& in) {
    std::vector<CameraEvent> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string camera, time, prob;
        if (!std::getline(fields, camera, ',') || !std::getline(fields, time, ',') || !std::getline(fields, prob))
            throw std::invalid_argument("trace line " + std::to_string(lineno) + ": expected camera_id,time,probability");
        CameraEvent ev{camera, parse_duration(time), 0};
        std::size_t used = 0;
        ev.smoke_probability = std::stod(prob, &used);
        if (used != prob.size() || ev.smoke_probability < 0 || ev.smoke_probability > 1)
            throw std::invalid_argument("trace line " + std::to_string(lineno) + ": probability must be in [0,1]");
        out.push_back(std::move(ev));
    }
    return out;
}

} // namespace fedsched
