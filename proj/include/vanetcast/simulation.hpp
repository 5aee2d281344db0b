#pragma once

#include "vanetcast/medium.hpp"
#include "vanetcast/metrics.hpp"
#include "vanetcast/mobility.hpp"
#include "vanetcast/protocols/protocol.hpp"
#include "vanetcast/scenario.hpp"
#include "vanetcast/sim/engine.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace vanetcast {

struct RunOptions
{
    std::ostream* event_trace = nullptr;    // one tab-separated line per executed event
    std::ostream* position_trace = nullptr; // CSV time,node_id,x,y,speed,lane per mobility tick
};

struct TransmissionLog
{
    SimTime at;
    NodeId node = kNoNode;
    PacketId packet;
    bool initial = false; // the origin's first send
};

struct NodeAngleDecision
{
    NodeId node = kNoNode;
    AngleDecision decision;
};

struct RunResult
{
    std::vector<PacketRecord> records; // in send order
    std::vector<TransmissionLog> transmissions;
    std::vector<NodeAngleDecision> angle_decisions; // ODAM-C only
    Medium::Stats medium;
    std::size_t events_processed = 0;
    std::size_t stale_timers = 0; // timers that fired without an armed entry
    std::size_t evictions = 0;    // LRU evictions across all nodes
    std::optional<NodeId> source;

    MetricsTable table(GroupBy group_by = GroupBy::PacketId) const { return aggregate(records, group_by); }

    /// Transmissions per (node, packet).
    std::map<std::pair<NodeId, PacketId>, std::size_t> transmissions_per_node() const;
};

/// Fixed node positions with a single origination; no mobility.
struct StaticTopology
{
    std::vector<Position> positions;
    NodeId origin = 0;
    double send_time = 0.0;
};

/**
 * One simulation run. Owns the engine and all node state; not copyable and
 * not shared between threads. Independent runs may execute concurrently.
 */
class Simulation
{
public:
    explicit Simulation(const ScenarioConfig& cfg, RunOptions options = {});
    Simulation(const StaticTopology& topology, const ProtocolConfig& protocol, const RadioConfig& radio,
               std::uint64_t seed = 1, RunOptions options = {});
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    RunResult run();

    const std::vector<Vehicle>& vehicles() const { return vehicles_; }
    const Engine& engine() const { return engine_; }

private:
    void schedule_mobility_tick(std::size_t index);
    void on_mobility_tick();
    void write_positions();
    void on_traffic_source();

    NodeContext context(NodeId node) const;
    void originate(NodeId node);
    void apply(NodeId node, const Actions& actions, bool initial);
    void transmit(NodeId node, const Packet& packet, bool initial);
    void deliver(NodeId receiver, const Packet& packet);
    void on_timer(NodeId node, const PacketId& id);
    NodeId pick_source() const;

    std::optional<ScenarioConfig> scenario_; // absent for static runs
    RunOptions options_;
    RadioConfig radio_;
    double end_time_ = 0.0;

    Engine engine_;
    RngStream mobility_rng_;
    RngStream wpbm_rng_;
    std::unique_ptr<Medium> medium_;
    std::vector<Vehicle> vehicles_;
    std::vector<Position> positions_;
    std::vector<std::unique_ptr<BroadcastProtocol>> nodes_;
    std::map<std::pair<NodeId, PacketId>, Ticket> timers_;
    std::vector<std::uint32_t> next_seq_;
    std::optional<NodeId> source_;

    std::map<PacketId, std::size_t> record_index_;
    RunResult result_;
};

} // namespace vanetcast
