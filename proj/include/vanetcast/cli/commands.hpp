#pragma once

#include "vanetcast/scenario.hpp"
#include "vanetcast/simulation.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vanetcast::cli {

/// Anything wrong with the user's configuration or flags (exit code 2).
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Overrides
{
    std::optional<ProtocolKind> protocol;
    std::optional<std::uint64_t> seed;
    std::optional<AngleVertex> angle_vertex;
    std::optional<BranchPolarity> branch_polarity;
    std::optional<CollisionModel> collision_model;
};

std::optional<AngleVertex> parse_angle_vertex(std::string_view s);
std::optional<BranchPolarity> parse_branch_polarity(std::string_view s);
std::optional<CollisionModel> parse_collision_model(std::string_view s);

/// Config file (or preset, or scenario1 defaults) with flag overrides applied.
/// Wraps every parse and validation failure in ConfigError.
ScenarioConfig load_config(const std::optional<std::filesystem::path>& config_path,
                           const std::optional<std::string>& preset_name, const Overrides& overrides);

/// "3..7" (inclusive) or "1,2,5". Throws ConfigError on an empty or malformed list.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// "odam,odam-c". Throws ConfigError on an empty list or an unknown name.
std::vector<ProtocolKind> parse_protocol_list(std::string_view text);

struct TraceFlags
{
    bool events = false;
    bool positions = false;
};

/// Runs one simulation and writes metrics.csv and summary.csv (plus
/// events.log / positions.csv when requested) into `out_dir`.
RunResult run_to_dir(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, TraceFlags traces);

struct SweepReport
{
    std::size_t cells = 0;
    std::size_t failed = 0;
};

/**
 * Runs every (protocol, seed) cell into `out_dir/<protocol>_seed<seed>/` and
 * writes `out_dir/comparison.csv` with per-protocol, per-packet means across
 * the successful seeds. A failed cell leaves a FAILED file with the reason.
 * Cells run on up to `jobs` threads; outputs do not depend on `jobs`.
 */
SweepReport sweep(const ScenarioConfig& base, const std::vector<ProtocolKind>& protocols,
                  const std::vector<std::uint64_t>& seeds, const std::filesystem::path& out_dir, TraceFlags traces,
                  unsigned jobs = 1);

inline constexpr const char* kComparisonHeader =
    "protocol,packet_id,send_time_s,pdr,redundancy,latency_s,tx_count,runs";

// ------------------------------------------------------------ interference replay

struct Fig1Outcome
{
    std::set<NodeId> receivers;
    double pdr = 0.0;
    bool reached_d = false;
};

struct Fig1Report
{
    Fig1Outcome odam;
    Fig1Outcome odamc;
    bool contrast_holds = false; // ODAM misses D and ODAM-C reaches it
};

/// Node ids of the four-vehicle interference geometry: A originates.
inline constexpr NodeId kFig1A = 0, kFig1B = 1, kFig1C = 2, kFig1D = 3;

StaticTopology fig1_topology();

/// Defer ceiling for the replay. The trace needs B's relay to reach C before
/// C's own timer fires, which the airtime-derived default is too short for.
inline constexpr double kFig1MaxDeferTime = 1.0;

/// Runs the static interference geometry under ODAM and ODAM-C with an ideal medium.
Fig1Report replay_fig1(AngleVertex vertex = AngleVertex::Receiver,
                       BranchPolarity polarity = BranchPolarity::Prose,
                       double max_defer_time = kFig1MaxDeferTime);

void print_fig1_report(std::ostream& out, const Fig1Report& report);

} // namespace vanetcast::cli
