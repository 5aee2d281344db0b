#include "vanetcast/cli/commands.hpp"

#include "vanetcast/format.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace vanetcast::cli {

namespace fs = std::filesystem;

std::optional<AngleVertex> parse_angle_vertex(std::string_view s)
{
    if (s == "receiver") return AngleVertex::Receiver;
    if (s == "sender") return AngleVertex::Sender;
    return std::nullopt;
}

std::optional<BranchPolarity> parse_branch_polarity(std::string_view s)
{
    if (s == "prose") return BranchPolarity::Prose;
    if (s == "pseudocode") return BranchPolarity::Pseudocode;
    return std::nullopt;
}

std::optional<CollisionModel> parse_collision_model(std::string_view s)
{
    if (s == "ideal") return CollisionModel::Ideal;
    if (s == "airtime-overlap") return CollisionModel::AirtimeOverlap;
    return std::nullopt;
}

ScenarioConfig load_config(const std::optional<fs::path>& config_path, const std::optional<std::string>& preset_name,
                           const Overrides& overrides)
{
    ScenarioConfig cfg;
    try {
        if (config_path && preset_name) {
            throw ConfigError("--config and --preset are mutually exclusive");
        }
        if (config_path) {
            std::ifstream in(*config_path);
            if (!in) {
                throw ConfigError("cannot read config file " + config_path->string());
            }
            std::stringstream buf;
            buf << in.rdbuf();
            cfg = parse(buf.str());
        } else if (preset_name) {
            cfg = preset(*preset_name);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    if (overrides.protocol) cfg.protocol = *overrides.protocol;
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.angle_vertex) cfg.angle_vertex = *overrides.angle_vertex;
    if (overrides.branch_polarity) cfg.branch_polarity = *overrides.branch_polarity;
    if (overrides.collision_model) cfg.radio.collision_model = *overrides.collision_model;

    try {
        validate(cfg);
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

namespace {

std::uint64_t parse_u64(std::string_view s)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("invalid seed '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) break;
        text = text.substr(pos + 1);
    }
    return parts;
}

} // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text)
{
    if (text.empty()) {
        throw ConfigError("empty seed list");
    }
    std::vector<std::uint64_t> seeds;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const auto lo = parse_u64(text.substr(0, dots));
        const auto hi = parse_u64(text.substr(dots + 2));
        if (hi < lo) {
            throw ConfigError("empty seed range '" + std::string(text) + "'");
        }
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    for (auto part : split(text, ',')) {
        seeds.push_back(parse_u64(part));
    }
    return seeds;
}

std::vector<ProtocolKind> parse_protocol_list(std::string_view text)
{
    if (text.empty()) {
        throw ConfigError("empty protocol list");
    }
    std::vector<ProtocolKind> out;
    for (auto part : split(text, ',')) {
        auto kind = parse_protocol(part);
        if (!kind) {
            throw ConfigError("unknown protocol '" + std::string(part) + "'");
        }
        out.push_back(*kind);
    }
    return out;
}

RunResult run_to_dir(const ScenarioConfig& cfg, const fs::path& out_dir, TraceFlags traces)
{
    fs::create_directories(out_dir);
    std::ofstream events;
    std::ofstream positions;
    RunOptions options;
    if (traces.events) {
        events.open(out_dir / "events.log");
        options.event_trace = &events;
    }
    if (traces.positions) {
        positions.open(out_dir / "positions.csv");
        options.position_trace = &positions;
    }

    Simulation sim(cfg, options);
    RunResult result = sim.run();
    const MetricsTable table = result.table();

    std::ofstream metrics(out_dir / "metrics.csv");
    write_metrics_csv(metrics, table);
    std::ofstream summary(out_dir / "summary.csv");
    write_summary_csv(summary, table);
    if (!metrics || !summary || (traces.events && !events) || (traces.positions && !positions)) {
        throw std::runtime_error("failed writing outputs under " + out_dir.string());
    }
    return result;
}

namespace {

struct CellResult
{
    ProtocolKind protocol;
    std::uint64_t seed;
    std::optional<MetricsTable> table;
};

std::string cell_name(ProtocolKind protocol, std::uint64_t seed)
{
    return std::string(to_string(protocol)) + "_seed" + std::to_string(seed);
}

} // namespace

SweepReport sweep(const ScenarioConfig& base, const std::vector<ProtocolKind>& protocols,
                  const std::vector<std::uint64_t>& seeds, const fs::path& out_dir, TraceFlags traces, unsigned jobs)
{
    if (protocols.empty()) throw ConfigError("empty protocol list");
    if (seeds.empty()) throw ConfigError("empty seed list");
    fs::create_directories(out_dir);

    std::vector<CellResult> cells;
    for (auto p : protocols) {
        for (auto s : seeds) cells.push_back(CellResult{p, s, std::nullopt});
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            auto& cell = cells[i];
            const fs::path dir = out_dir / cell_name(cell.protocol, cell.seed);
            ScenarioConfig cfg = base;
            cfg.protocol = cell.protocol;
            cfg.seed = cell.seed;
            try {
                fs::remove(dir / "FAILED");
                cell.table = run_to_dir(cfg, dir, traces).table();
            } catch (const std::exception& e) {
                fs::create_directories(dir);
                std::ofstream(dir / "FAILED") << e.what() << '\n';
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SweepReport report;
    report.cells = cells.size();
    std::ofstream out(out_dir / "comparison.csv");
    out << kComparisonHeader << '\n';
    for (auto p : protocols) {
        std::map<std::uint32_t, std::vector<MetricsRow>> by_packet;
        for (const auto& cell : cells) {
            if (cell.protocol != p) continue;
            if (!cell.table) continue;
            for (const auto& row : cell.table->rows) by_packet[row.packet_id].push_back(row);
        }
        for (const auto& [packet_id, rows] : by_packet) {
            const auto mean = summarize(rows);
            out << to_string(p) << ',' << packet_id << ',' << format_double(rows.front().send_time) << ','
                << format_double(mean->pdr) << ',' << format_double(mean->redundancy) << ','
                << (mean->latency ? format_double(*mean->latency) : std::string{}) << ','
                << format_double(mean->tx_count) << ',' << rows.size() << '\n';
        }
    }
    for (const auto& cell : cells) {
        if (!cell.table) ++report.failed;
    }
    return report;
}

// ------------------------------------------------------------ interference replay

StaticTopology fig1_topology()
{
    StaticTopology topo;
    topo.positions = {Position{0.0, 0.0}, Position{-160.0, 0.0}, Position{130.0, 0.0}, Position{420.0, 0.0}};
    topo.origin = kFig1A;
    return topo;
}

namespace {

Fig1Outcome run_fig1(ProtocolKind kind, AngleVertex vertex, BranchPolarity polarity, double max_defer_time)
{
    RadioConfig radio; // ideal medium, 300 m
    ProtocolConfig protocol;
    protocol.kind = kind;
    protocol.angle_vertex = vertex;
    protocol.branch_polarity = polarity;
    protocol.defer = DeferConfig{max_defer_time, 2, radio.range};

    Simulation sim(fig1_topology(), protocol, radio);
    const RunResult result = sim.run();
    const PacketRecord& rec = result.records.front();

    Fig1Outcome outcome;
    for (const auto& [node, at] : rec.receptions) outcome.receivers.insert(node);
    outcome.pdr = pdr(rec);
    outcome.reached_d = outcome.receivers.contains(kFig1D);
    return outcome;
}

std::string node_names(const std::set<NodeId>& nodes)
{
    static constexpr char names[] = {'A', 'B', 'C', 'D'};
    std::string out = "{";
    for (NodeId n : nodes) {
        if (out.size() > 1) out += ", ";
        out += names[n];
    }
    return out + "}";
}

} // namespace

Fig1Report replay_fig1(AngleVertex vertex, BranchPolarity polarity, double max_defer_time)
{
    if (!(max_defer_time > 0.0)) {
        throw ConfigError("max defer time must be positive");
    }
    Fig1Report report;
    report.odam = run_fig1(ProtocolKind::Odam, vertex, polarity, max_defer_time);
    report.odamc = run_fig1(ProtocolKind::OdamC, vertex, polarity, max_defer_time);
    report.contrast_holds = !report.odam.reached_d && report.odamc.reached_d;
    return report;
}

void print_fig1_report(std::ostream& out, const Fig1Report& report)
{
    out << "odam:   received " << node_names(report.odam.receivers) << " pdr=" << format_double(report.odam.pdr)
        << (report.odam.reached_d ? "" : " (D unreached)") << '\n';
    out << "odam-c: received " << node_names(report.odamc.receivers) << " pdr=" << format_double(report.odamc.pdr)
        << (report.odamc.reached_d ? "" : " (D unreached)") << '\n';
    out << "contrast " << (report.contrast_holds ? "holds" : "does not hold") << '\n';
}

} // namespace vanetcast::cli
