#include "vanetcast/cli/commands.hpp"
#include "vanetcast/geometry.hpp"
#include "vanetcast/protocols/defer.hpp"
#include "vanetcast/scenario.hpp"
#include "vanetcast/simulation.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace vanetcast;

namespace {

using XY = std::pair<double, double>;

Position pos(const XY& p)
{
    return Position{p.first, p.second};
}

ProtocolKind protocol_named(const std::string& name)
{
    auto kind = parse_protocol(name);
    if (!kind) throw py::value_error("unknown protocol '" + name + "'");
    return *kind;
}

py::object opt(const std::optional<double>& v)
{
    return v ? py::object(py::float_(*v)) : py::none();
}

py::dict row_dict(const MetricsRow& r)
{
    py::dict d;
    d["packet_id"] = r.packet_id;
    d["send_time"] = r.send_time;
    d["pdr"] = r.pdr;
    d["redundancy"] = r.redundancy;
    d["latency"] = opt(r.latency);
    d["tx_count"] = r.tx_count;
    return d;
}

ScenarioConfig config_from(const std::string& text, std::optional<std::string> protocol,
                           std::optional<std::uint64_t> seed)
{
    ScenarioConfig cfg = parse(text);
    if (protocol) cfg.protocol = protocol_named(*protocol);
    if (seed) cfg.seed = *seed;
    validate(cfg);
    return cfg;
}

py::dict run(const std::string& text, std::optional<std::string> protocol, std::optional<std::uint64_t> seed,
             bool trace_events)
{
    const ScenarioConfig cfg = config_from(text, std::move(protocol), seed);
    std::ostringstream events;
    RunResult result;
    {
        py::gil_scoped_release release;
        Simulation sim(cfg, RunOptions{trace_events ? &events : nullptr, nullptr});
        result = sim.run();
    }
    const MetricsTable table = result.table();
    py::list rows;
    for (const auto& r : table.rows) rows.append(row_dict(r));

    py::dict out;
    out["rows"] = rows;
    if (table.summary) {
        py::dict s;
        s["packets"] = table.summary->packets;
        s["pdr"] = table.summary->pdr;
        s["redundancy"] = table.summary->redundancy;
        s["latency"] = opt(table.summary->latency);
        s["tx_count"] = table.summary->tx_count;
        out["summary"] = s;
    } else {
        out["summary"] = py::none();
    }
    out["events_processed"] = result.events_processed;
    out["evictions"] = result.evictions;
    out["stale_timers"] = result.stale_timers;
    out["source"] = result.source ? py::object(py::int_(*result.source)) : py::none();
    if (trace_events) out["events"] = events.str();
    return out;
}

std::set<NodeId> static_receivers(const std::vector<XY>& positions, NodeId origin, const std::string& protocol,
                                  double max_defer_time, double range)
{
    StaticTopology topo;
    for (const auto& p : positions) topo.positions.push_back(pos(p));
    topo.origin = origin;
    RadioConfig radio;
    radio.range = range;
    ProtocolConfig pc;
    pc.kind = protocol_named(protocol);
    pc.defer = DeferConfig{max_defer_time, 2, range};
    const RunResult r = Simulation(topo, pc, radio).run();
    std::set<NodeId> out;
    for (const auto& [node, at] : r.records.at(0).receptions) out.insert(node);
    return out;
}

py::dict fig1(double max_defer_time)
{
    const auto report = cli::replay_fig1(AngleVertex::Receiver, BranchPolarity::Prose, max_defer_time);
    auto side = [](const cli::Fig1Outcome& o) {
        py::dict d;
        d["receivers"] = o.receivers;
        d["pdr"] = o.pdr;
        d["reached_d"] = o.reached_d;
        return d;
    };
    py::dict d;
    d["odam"] = side(report.odam);
    d["odam-c"] = side(report.odamc);
    d["contrast_holds"] = report.contrast_holds;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Discrete-event VANET broadcast simulator";

    py::register_exception<DegenerateVertex>(m, "DegenerateVertex", PyExc_ValueError);
    py::register_exception<OutOfRange>(m, "OutOfRange", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<UnknownPreset>(m, "UnknownPreset", PyExc_ValueError);
    py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("defer_time", [](double d, double max_defer_time, int epsilon, double range) {
        return defer_time(d, DeferConfig{max_defer_time, epsilon, range});
    }, py::arg("d"), py::arg("max_defer_time"), py::arg("epsilon") = 2, py::arg("range") = 300.0);
    m.def("default_max_defer_time", &default_max_defer_time, py::arg("airtime"), py::arg("range"),
          py::arg("prop_speed"));
    m.def("distance", [](const XY& p, const XY& q) { return distance(pos(p), pos(q)); });
    m.def("angle_at", [](const XY& v, const XY& a, const XY& b) { return angle_at(pos(v), pos(a), pos(b)).value(); },
          py::arg("vertex"), py::arg("a"), py::arg("b"));

    m.def("preset_names", &preset_names);
    m.def("preset", [](const std::string& name) { return render(preset(name)); },
          "Full config text for a preset.");
    m.def("normalize", [](const std::string& text) { return render(parse(text)); },
          "Parse, validate and re-render config text.");
    m.def("config_keys", &config_keys);

    m.def("run", &run, py::arg("config") = std::string{}, py::arg("protocol") = py::none(),
          py::arg("seed") = py::none(), py::arg("trace_events") = false);
    m.def("run_to_dir", [](const std::string& text, const std::filesystem::path& out, bool events, bool positions) {
        const ScenarioConfig cfg = config_from(text, std::nullopt, std::nullopt);
        py::gil_scoped_release release;
        cli::run_to_dir(cfg, out, cli::TraceFlags{events, positions});
    }, py::arg("config"), py::arg("out_dir"), py::arg("trace_events") = false, py::arg("trace_positions") = false);
    m.def("static_receivers", &static_receivers, py::arg("positions"), py::arg("origin"), py::arg("protocol"),
          py::arg("max_defer_time") = cli::kFig1MaxDeferTime, py::arg("range") = 300.0);
    m.def("replay_fig1", &fig1, py::arg("max_defer_time") = cli::kFig1MaxDeferTime);
}
