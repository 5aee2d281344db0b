#pragma once

#include "vanetcast/geometry.hpp"
#include "vanetcast/protocols/packet.hpp"
#include "vanetcast/sim/engine.hpp"
#include "vanetcast/sim/rng.hpp"

#include <functional>
#include <span>
#include <vector>

namespace vanetcast {

enum class CollisionModel
{
    Ideal,
    AirtimeOverlap,
};

struct RadioConfig
{
    double range = 300.0;         // m
    double data_rate = 6.0e6;     // bit/s
    double packet_size = 8000.0;  // bits
    double prop_speed = 3.0e8;    // m/s
    CollisionModel collision_model = CollisionModel::Ideal;
    /// Optional edge loss: drop probability ramps linearly from 0 at
    /// edge_loss_start * range up to edge_loss_max at the range limit.
    double edge_loss_start = 1.0;
    double edge_loss_max = 0.0;

    double airtime() const { return packet_size / data_rate; }

    friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

struct Transmission
{
    Packet packet;
    NodeId tx_node = kNoNode;
    Position tx_pos;
    SimTime start;
    double airtime = 0.0;
};

/// Nodes other than `tx_node` within `range` of `tx_pos` (boundary inclusive), in id order.
/// With `ring_length` > 0 distances wrap along x.
std::vector<NodeId> neighbors(const Position& tx_pos, std::span<const Position> positions, double range,
                              NodeId tx_node, double ring_length = 0.0);

/**
 * Unit-disk broadcast medium.
 *
 * Each neighbour of the transmitter gets an Rx event at
 * start + airtime + distance / prop_speed. Under AirtimeOverlap a node that
 * has two receptions overlapping in time loses both, and a reception that
 * overlaps an already-voided one is lost as well.
 */
class Medium
{
public:
    using Deliver = std::function<void(NodeId receiver, const Packet& packet)>;

    struct Stats
    {
        std::size_t scheduled = 0;
        std::size_t collided = 0;
        std::size_t edge_lost = 0;
    };

    Medium(RadioConfig config, std::size_t node_count, RngStream rng, double ring_length = 0.0);

    const RadioConfig& config() const { return config_; }
    const Stats& stats() const { return stats_; }

    /// Schedules the receptions of `tx`; returns the tickets of those not lost on arrival.
    std::vector<Ticket> broadcast(const Transmission& tx, std::span<const Position> positions, Engine& engine,
                                  Deliver deliver);

private:
    struct Reception
    {
        double begin;
        double end;
        Ticket ticket;
        bool voided;
    };

    bool edge_lost(double d);

    RadioConfig config_;
    RngStream rng_;
    double ring_length_;
    std::vector<std::vector<Reception>> busy_;
    Stats stats_;
};

} // namespace vanetcast
