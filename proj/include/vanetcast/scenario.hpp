#pragma once

#include "vanetcast/medium.hpp"
#include "vanetcast/mobility.hpp"
#include "vanetcast/protocols/protocol.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vanetcast {

struct ScenarioConfig
{
    // topology and traffic
    std::size_t vehicle_count = 100;
    double vehicular_gap = 200.0;
    std::size_t lane_count = 4;
    double road_length = 22000.0;
    double lane_width = 3.5;
    double min_gap = 2.0;
    FlowParams flow1{120.0, 4.5, 1.0};
    FlowParams flow2{70.0, 0.8, 4.5};
    double mobility_dt = 0.5;
    double mobility_sigma = 0.5;

    // source schedule; an unset source is the vehicle nearest mid-road at first_send
    std::optional<NodeId> source_node;
    double first_send = 600.0;
    double send_interval = 50.0;
    double last_send = 2000.0;
    double sim_end = 2100.0;

    RadioConfig radio;

    // protocol
    ProtocolKind protocol = ProtocolKind::OdamC;
    double p_fwd = 0.5;
    AngleVertex angle_vertex = AngleVertex::Receiver;
    BranchPolarity branch_polarity = BranchPolarity::Prose;
    std::optional<double> max_defer_time; // unset: twice the one-hop delay
    int epsilon = 2;
    PacketListConfig lists;

    std::uint64_t seed = 1;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

    RoadConfig road() const;
    PlatoonLayout layout() const;
    DeferConfig defer() const;
    ProtocolConfig protocol_config() const;
    MobilityParams mobility() const;

    /// Send instants first_send, first_send + interval, ... up to last_send.
    std::vector<double> send_times() const;
};

class UnknownPreset : public std::invalid_argument
{
public:
    explicit UnknownPreset(std::string_view name)
        : std::invalid_argument("unknown preset '" + std::string(name) + "'")
    {
    }
};

class ParseError : public std::runtime_error
{
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> preset_names();

/// Built-in highway scenarios: scenario1 (sparse), scenario2 (medium), scenario3 (dense).
ScenarioConfig preset(std::string_view name);

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioConfig& cfg);

/**
 * Parses the flat `key = value` format. `#` starts a comment. An optional
 * `preset = <name>` line must precede every other key; without one the
 * scenario1 values are the base. Unknown or repeated keys are errors.
 */
ScenarioConfig parse(std::string_view text);

/// Every key, one per line, in a form parse() accepts.
std::string render(const ScenarioConfig& cfg);

/// Every accepted key, in render order.
std::vector<std::string> config_keys();

} // namespace vanetcast
