// Command-line runner: single runs, seed/protocol sweeps, and the static
// interference replay. Exit codes: 0 success, 1 internal failure or failed
// replay contrast, 2 configuration / usage error.

#include "vanetcast/cli/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace vanetcast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommonFlags
{
    std::string config;
    std::string preset;
    std::string protocol;
    std::uint64_t seed = 0;
    std::string angle_vertex;
    std::string branch_polarity;
    std::string collision_model;
    std::string out = "out";
    bool trace_events = false;
    bool trace_positions = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_protocol)
{
    cmd->add_option("--config", f.config, "Scenario config file (key = value)");
    cmd->add_option("--preset", f.preset, "Built-in scenario: scenario1 | scenario2 | scenario3");
    if (with_protocol) {
        cmd->add_option("--protocol", f.protocol, "flooding | wpbm | odam | odam-c");
        cmd->add_option("--seed", f.seed, "Run seed");
    }
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_flag("--trace-events", f.trace_events, "Write events.log");
    cmd->add_flag("--trace-positions", f.trace_positions, "Write positions.csv");
    cmd->add_option("--angle-vertex", f.angle_vertex, "receiver | sender");
    cmd->add_option("--branch-polarity", f.branch_polarity, "prose | pseudocode");
    cmd->add_option("--collision-model", f.collision_model, "ideal | airtime-overlap");
}

template <class T, class Parser>
std::optional<T> parse_flag(const std::string& value, const char* flag, Parser parser)
{
    if (value.empty()) return std::nullopt;
    auto parsed = parser(value);
    if (!parsed) {
        throw cli::ConfigError(std::string("invalid value for ") + flag + ": " + value);
    }
    return parsed;
}

ScenarioConfig config_from(const CommonFlags& f, const CLI::App* cmd)
{
    cli::Overrides o;
    o.protocol = parse_flag<ProtocolKind>(f.protocol, "--protocol", parse_protocol);
    if (cmd->get_option_no_throw("--seed") != nullptr && cmd->count("--seed") > 0) o.seed = f.seed;
    o.angle_vertex = parse_flag<AngleVertex>(f.angle_vertex, "--angle-vertex", cli::parse_angle_vertex);
    o.branch_polarity = parse_flag<BranchPolarity>(f.branch_polarity, "--branch-polarity", cli::parse_branch_polarity);
    o.collision_model = parse_flag<CollisionModel>(f.collision_model, "--collision-model", cli::parse_collision_model);
    return cli::load_config(f.config.empty() ? std::nullopt : std::optional<fs::path>(f.config),
                            f.preset.empty() ? std::nullopt : std::optional<std::string>(f.preset), o);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vanetcast: multi-hop VANET broadcast simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "Run one simulation");
    add_common(run, run_flags, true);

    CommonFlags sweep_flags;
    std::string protocols = "wpbm,odam,odam-c";
    std::string seeds;
    unsigned jobs = 1;
    auto* sw = app.add_subcommand("sweep", "Run every (protocol, seed) pair and compare");
    add_common(sw, sweep_flags, false);
    sw->add_option("--protocols", protocols, "Comma-separated protocol list");
    sw->add_option("--seeds", seeds, "Seed range a..b or list a,b,c")->required();
    sw->add_option("--jobs", jobs, "Cells to run concurrently");

    std::string fig1_out;
    std::string fig1_protocol;
    std::string fig1_vertex;
    std::string fig1_polarity;
    double fig1_defer = cli::kFig1MaxDeferTime;
    auto* fig1 = app.add_subcommand("replay-fig1", "Replay the static four-node interference geometry");
    fig1->add_option("--out", fig1_out, "Optional directory for a fig1.txt report");
    fig1->add_option("--protocol", fig1_protocol, "Not accepted: the replay always compares odam and odam-c");
    fig1->add_option("--angle-vertex", fig1_vertex, "receiver | sender");
    fig1->add_option("--branch-polarity", fig1_polarity, "prose | pseudocode");
    fig1->add_option("--max-defer-time", fig1_defer, "Defer ceiling in seconds")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) {
            const ScenarioConfig cfg = config_from(run_flags, run);
            const RunResult result =
                cli::run_to_dir(cfg, run_flags.out, {run_flags.trace_events, run_flags.trace_positions});
            const auto table = result.table();
            std::cerr << "wrote " << table.rows.size() << " packet rows to " << run_flags.out << '\n';
            return kExitOk;
        }
        if (*sw) {
            const ScenarioConfig cfg = config_from(sweep_flags, sw);
            const auto seed_list = cli::parse_seed_list(seeds);
            const auto protocol_list = cli::parse_protocol_list(protocols);
            const auto report = cli::sweep(cfg, protocol_list, seed_list, sweep_flags.out,
                                           {sweep_flags.trace_events, sweep_flags.trace_positions}, jobs);
            std::cerr << report.cells << " cells, " << report.failed << " failed\n";
            return report.failed == 0 ? kExitOk : kExitFailure;
        }
        if (*fig1) {
            if (!fig1_protocol.empty()) {
                throw cli::ConfigError("replay-fig1 does not take --protocol");
            }
            const auto vertex =
                parse_flag<AngleVertex>(fig1_vertex, "--angle-vertex", cli::parse_angle_vertex).value_or(AngleVertex::Receiver);
            const auto polarity = parse_flag<BranchPolarity>(fig1_polarity, "--branch-polarity", cli::parse_branch_polarity)
                                      .value_or(BranchPolarity::Prose);
            const auto report = cli::replay_fig1(vertex, polarity, fig1_defer);
            cli::print_fig1_report(std::cout, report);
            if (!fig1_out.empty()) {
                fs::create_directories(fig1_out);
                std::ofstream out(fs::path(fig1_out) / "fig1.txt");
                cli::print_fig1_report(out, report);
            }
            return report.contrast_holds ? kExitOk : kExitFailure;
        }
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
