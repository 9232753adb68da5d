// fedsched: run, validate and sweep federated-cluster simulations.
//
// Exit codes: 0 success, 1 invalid input, 2 invariant violation during a run.

#include "fedsched/config.hpp"
#include "fedsched/errors.hpp"
#include "fedsched/simulator.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace fedsched;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInvariant = 2 };

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::string duration;
};

struct SweepOptions {
    RunOptions run;
    std::string param;
    std::vector<std::string> values;
    unsigned jobs = 0;
};

// Runs one configuration and writes its outputs. Throws on failure.
void execute(RunConfig cfg, std::uint64_t seed, const fs::path& out, const std::string& label) {
    Simulator sim(std::move(cfg), seed);
    sim.run();
    fs::create_directories(out);
    write_metrics(sim.metrics(), out);
    std::ofstream events(out / "events.jsonl", std::ios::binary);
    if (!events) throw Error("cannot write " + (out / "events.jsonl").string());
    write_jsonl(events, sim.log());

    const auto summary = metrics_summary(sim.metrics());
    spdlog::info("{}seed {}: {} events, {} pods, {} triggers, model version {} -> {}", label, seed,
                 sim.log().size(), summary["pods"].get<std::int64_t>(), summary["triggers"].get<std::int64_t>(),
                 summary["model_version"].get<int>(), out.string());
}

std::uint64_t resolve_seed(const RunOptions& o, const RunConfig& cfg) { return o.seed ? *o.seed : cfg.sim.seed; }

void apply_duration(RunConfig& cfg, const std::string& duration) {
    if (duration.empty()) return;
    try {
        cfg.sim.duration = parse_duration(duration);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--duration", e.what());
    }
    if (cfg.sim.duration < 0) throw ConfigError("--duration", "must not be negative");
}

// Config values on the command line: JSON when it parses, a plain string otherwise.
nlohmann::json value_of(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    return j.is_discarded() ? nlohmann::json(text) : j;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return kOk;
    } catch (const ConfigError& e) {
        spdlog::error("invalid configuration: {}", e.what());
        return kInvalid;
    } catch (const InvariantViolation& e) {
        spdlog::critical("invariant violation: {}", e.what());
        return kInvariant;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kInvalid;
    }
}

int cmd_validate(const RunOptions& o) {
    return guarded([&] {
        auto cfg = parse_config(o.config);
        apply_duration(cfg, o.duration);
        std::size_t nodes = 0;
        for (const auto& c : cfg.clusters) nodes += c.spec.nodes.size();
        spdlog::info("{}: ok ({} clusters, {} nodes, {} edges, {} pods, {} batch jobs)", o.config,
                     cfg.clusters.size(), nodes, cfg.graph.edge_count(), cfg.scenario.pods.size(),
                     cfg.scenario.jobs.size());
    });
}

int cmd_run(const RunOptions& o) {
    return guarded([&] {
        auto cfg = parse_config(o.config);
        apply_duration(cfg, o.duration);
        const auto seed = resolve_seed(o, cfg);
        execute(std::move(cfg), seed, o.out, "");
    });
}

int cmd_sweep(const SweepOptions& o) {
    std::vector<std::pair<std::string, RunConfig>> runs;
    std::uint64_t seed = 0;
    int rc = guarded([&] {
        const auto raw = load_config_json(o.run.config);
        const auto base_dir = fs::path(o.run.config).parent_path();
        for (const auto& v : o.values) {
            auto j = raw;
            set_config_value(j, o.param, value_of(v));
            RunConfig cfg;
            try {
                cfg = parse_config_json(j, base_dir);
            } catch (const ConfigError& e) {
                throw ConfigError(o.param + "=" + v, e.what());
            }
            apply_duration(cfg, o.run.duration);
            runs.emplace_back(v, std::move(cfg));
        }
        seed = runs.empty() ? 1 : resolve_seed(o.run, runs.front().second);
    });
    if (rc != kOk) return rc;

    const unsigned width = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
    std::vector<int> codes(runs.size(), kOk);
    for (std::size_t start = 0; start < runs.size(); start += width) {
        std::vector<std::future<int>> batch;
        for (std::size_t i = start; i < std::min(runs.size(), start + width); ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
                const auto& [value, cfg] = runs[i];
                const fs::path out = fs::path(o.run.out) / (o.param + "=" + value);
                return guarded([&] { execute(cfg, seed, out, o.param + "=" + value + " "); });
            }));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) codes[start + k] = batch[k].get();
    }
    return *std::max_element(codes.begin(), codes.end());
}

void add_common(CLI::App* app, RunOptions& o, bool with_outputs) {
    app->add_option("--config", o.config, "configuration file (JSON)")->required()->check(CLI::ExistingFile);
    app->add_option("--duration", o.duration, "override sim.duration, e.g. 6h");
    if (!with_outputs) return;
    app->add_option("--seed", o.seed, "root seed (falls back to FEDSCHED_SEED, then sim.seed)")
        ->envname("FEDSCHED_SEED");
    app->add_option("--out", o.out, "output directory")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator of federated container clusters"};
    app.require_subcommand(1);

    std::string log_level = "info";
    app.add_option("--log-level", log_level, "error, warn, info or debug")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}))
        ->capture_default_str();

    RunOptions run_opts, validate_opts;
    SweepOptions sweep_opts;

    auto* run = app.add_subcommand("run", "execute a configuration and write metrics and the event log");
    add_common(run, run_opts, true);

    auto* validate = app.add_subcommand("validate", "parse and validate a configuration");
    add_common(validate, validate_opts, false);

    auto* sweep = app.add_subcommand("sweep", "vary one parameter over a list of values");
    add_common(sweep, sweep_opts.run, true);
    sweep->add_option("--param", sweep_opts.param, "dotted config path, e.g. federation.election_timeout")
        ->required();
    sweep->add_option("--values", sweep_opts.values, "comma separated values")->required()->delimiter(',');
    sweep->add_option("--jobs", sweep_opts.jobs, "parallel runs (default: hardware threads)");

    for (auto* sub : {run, validate, sweep})
        sub->add_option("--log-level", log_level, "error, warn, info or debug")
            ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalid;
    }

    auto logger = spdlog::stderr_color_mt("fedsched");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::from_str(log_level));

    if (*run) return cmd_run(run_opts);
    if (*validate) return cmd_validate(validate_opts);
    return cmd_sweep(sweep_opts);
}
