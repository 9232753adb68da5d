// Python extension: configs, runs and step-wise simulation.
// JSON crosses the boundary as text; the package decodes it.

#include "fedsched/config.hpp"
#include "fedsched/errors.hpp"
#include "fedsched/simulator.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

namespace py = pybind11;
using namespace fedsched;

namespace {

std::string summary_json(const MetricsReport& m) { return metrics_summary(m).dump(); }

std::string pod_json(const PodSpec& p) {
    nlohmann::ordered_json j;
    j["pod"] = p.pod_id;
    j["namespace"] = p.ns;
    j["phase"] = to_string(p.phase);
    j["cluster"] = p.placement ? nlohmann::ordered_json(p.placement->cluster) : nullptr;
    j["node"] = p.placement ? nlohmann::ordered_json(p.placement->node) : nullptr;
    j["request"] = resources_to_json(p.request);
    return j.dump();
}

void write_outputs(const Simulator& sim, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    write_metrics(sim.metrics(), out);
    std::ofstream events(out / "events.jsonl", std::ios::binary);
    if (!events) throw Error("cannot write " + (out / "events.jsonl").string());
    write_jsonl(events, sim.log());
}

} // namespace

PYBIND11_MODULE(_fedsched, m) {
    m.doc() = "Discrete-event simulator of federated container clusters";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());

    py::class_<RunConfig>(m, "Config")
        .def_property_readonly("seed", [](const RunConfig& c) { return c.sim.seed; })
        .def_property(
            "duration_ms", [](const RunConfig& c) { return c.sim.duration; },
            [](RunConfig& c, TimeMs d) {
                if (d < 0) throw ConfigError("sim.duration", "must not be negative");
                c.sim.duration = d;
            })
        .def_property_readonly("clusters",
                               [](const RunConfig& c) {
                                   std::vector<std::string> ids;
                                   for (const auto& cc : c.clusters) ids.push_back(cc.spec.cluster_id);
                                   return ids;
                               })
        .def_property_readonly("edges",
                               [](const RunConfig& c) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& e : c.graph.edges()) out.emplace_back(e.source, e.target);
                                   return out;
                               })
        .def_property_readonly("node_count", [](const RunConfig& c) {
            std::size_t n = 0;
            for (const auto& cc : c.clusters) n += cc.spec.nodes.size();
            return n;
        });

    m.def("load_config", [](const std::filesystem::path& p) { return parse_config(p); }, py::arg("path"));
    m.def("_config_from_text", &parse_config_text, py::arg("text"), py::arg("origin") = "<string>");
    m.def("_config_from_text_in", [](const std::string& text, const std::filesystem::path& base_dir) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("<dict>", e.what());
        }
        return parse_config_json(j, base_dir);
    });

    py::class_<Simulator>(m, "Simulator")
        .def(py::init<RunConfig, std::uint64_t>(), py::arg("config"), py::arg("seed"))
        .def("run", &Simulator::run, py::call_guard<py::gil_scoped_release>())
        .def("step",
             [](Simulator& s) {
                 const auto e = s.step();
                 return py::make_tuple(e.time, e.seq, std::string(to_string(e.kind())));
             })
        .def("done", &Simulator::done)
        .def_property_readonly("now", &Simulator::now)
        .def("pod_ids", &Simulator::pod_ids)
        .def("_pod", [](const Simulator& s, const PodId& id) { return pod_json(s.pod(id)); })
        .def("_summary", [](const Simulator& s) { return summary_json(s.metrics()); })
        .def("events_jsonl", [](const Simulator& s) { return to_jsonl(s.log()); })
        .def("check_invariants", &Simulator::check_invariants)
        .def("write_outputs", &write_outputs, py::arg("out"));

    m.def("parse_duration", [](const std::string& s) { return parse_duration(s); });
    m.def("format_duration", &format_duration);
    m.def("least_allocated", [](std::int64_t cpu_cap, std::int64_t mem_cap, std::int64_t gpu_cap, std::int64_t cpu_free,
                                std::int64_t mem_free, std::int64_t gpu_free, std::int64_t cpu_req, std::int64_t mem_req,
                                std::int64_t gpu_req) {
        return least_allocated({cpu_cap, mem_cap, gpu_cap}, {cpu_free, mem_free, gpu_free}, {cpu_req, mem_req, gpu_req});
    });
    m.def("_metrics_from_jsonl", [](const std::string& text) {
        std::istringstream in(text);
        return summary_json(metrics_from_log(read_jsonl(in)));
    });
}
