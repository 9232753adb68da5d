#pragma once

#include "fedsched/cluster.hpp"
#include "fedsched/rng.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fedsched {

// Smoke inference result from one edge camera.
struct CameraEvent {
    std::string camera_id;
    TimeMs time = 0;
    double smoke_probability = 0;
    friend bool operator==(const CameraEvent&, const CameraEvent&) = default;
};

struct TriggerRule {
    double confidence_threshold = 0.9;
    PodSpec retrain_template;
    PodSpec ensemble_template;
    int ensemble_size = 8;
    // Minimum spacing between two firings for the same camera; 0 fires on every qualifying message.
    TimeMs camera_cooldown = 0;
};

// The stock templates: a 1-GPU retraining pod pinned to GPU nodes and a
// CPU-only, memory-heavy fire-simulation pod pinned to large-memory nodes.
TriggerRule default_trigger_rule();

enum class WorkloadRole { Retrain, Ensemble };

struct WorkloadSubmission {
    PodSpec pod;
    WorkloadRole role = WorkloadRole::Retrain;
};

// Lambda trigger: a message at or above the threshold yields one retraining pod
// and `ensemble_size` simulation pods, all opted into federation. Pod ids are
// prefixed by `id_prefix`.
std::vector<WorkloadSubmission> on_message(const CameraEvent& event, const TriggerRule& rule,
                                           const std::string& id_prefix);

// Model versions shared across clusters; version 1 exists from t=0.
class ModelRegistry {
public:
    ModelRegistry();

    // Registers a new version created at `at` and returns it.
    int retrain_complete(TimeMs at);
    // Latest version whose creation time is <= `at`.
    int read(TimeMs at) const;
    int latest() const noexcept { return static_cast<int>(created_.size()); }
    const std::vector<TimeMs>& creation_times() const noexcept { return created_; }

private:
    std::vector<TimeMs> created_;  // created_[v-1] = creation time of version v
};

struct TraceParams {
    std::vector<std::string> cameras;
    double rate_per_hour = 0;  // per camera
    TimeMs duration = 0;
    double p_high = 0.05;      // probability a message comes from the high-confidence mode
    double high_min = 0.9;
    double high_max = 1.0;
    double low_max = 0.5;
};

// Poisson arrivals per camera; probability mixture of a low mode U[0, low_max)
// and a high mode U[high_min, high_max]. Sorted by (time, camera).
std::vector<CameraEvent> generate_trace(const TraceParams& params, std::uint64_t seed);

// One event per line: "camera_id,time,probability". Time takes duration units.
// Blank lines and lines starting with '#' are skipped.
std::vector<CameraEvent> load_trace(std::istream& in);

} // namespace fedsched
