#pragma once

#include "fedsched/graph.hpp"
#include "fedsched/metascale.hpp"
#include "fedsched/protocol.hpp"
#include "fedsched/scheduling.hpp"
#include "fedsched/wildfire.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fedsched {

struct ClusterConfig {
    ClusterSpec spec;
    PluginPipeline pipeline = builtin_plugins();
    bool metascale = false;
};

struct PodSubmission {
    PodSpec pod;
    ClusterId cluster;
};

struct JobSubmission {
    BatchJob job;
    ClusterId cluster;
};

struct WildfireConfig {
    ClusterId submit_cluster;
    TriggerRule rule = default_trigger_rule();
    std::vector<CameraEvent> trace;
    TimeMs trigger_delay = 0;
};

struct Scenario {
    std::vector<PodSubmission> pods;
    std::vector<JobSubmission> jobs;
    std::optional<WildfireConfig> wildfire;
};

// Fault injection for robustness experiments.
struct FaultConfig {
    // One-shot: the first delegate bind of `pod` in `cluster` fails.
    std::set<std::pair<PodId, ClusterId>> bind_conflicts;
    // Candidate reports travelling target -> source on these edges are lost.
    std::set<std::pair<ClusterId, ClusterId>> drop_reports;
};

struct SimParams {
    std::uint64_t seed = 1;
    TimeMs duration = 24 * kHour;
    bool check_invariants = true;
};

struct RunConfig {
    std::vector<ClusterConfig> clusters;
    FederationGraph graph;
    FederationParams federation;
    MetaScalePolicy metascale;
    Scenario scenario;
    FaultConfig faults;
    SimParams sim;

    const ClusterConfig& cluster(const ClusterId& id) const;
    // Structural checks shared by the JSON parser and programmatic configs.
    // Throws ConfigError.
    void validate() const;
};

// Built-in node profiles. Known names: "expanse-sscu", "nautilus-mini".
// `divisor` scales node counts down (each node kind keeps at least one node);
// the first `batch_nodes` standard nodes start in the Batch pool.
std::vector<NodeSpec> profile_nodes(const std::string& profile, const ClusterId& cluster, int divisor = 1,
                                    int batch_nodes = 0);

// Parses and validates a run configuration. Diagnostics carry a line:column
// for syntax errors and a dotted field path for validation errors.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

// Reads the raw JSON of a config file, reporting syntax errors as ConfigError.
nlohmann::json load_config_json(const std::filesystem::path& path);

// Sets the value at a dotted path ("federation.election_timeout"). Array
// elements are addressed by index ("topology.clusters.0.id").
void set_config_value(nlohmann::json& j, const std::string& dotted_path, const nlohmann::json& value);

} // namespace fedsched
