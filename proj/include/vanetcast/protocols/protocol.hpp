#pragma once

#include "vanetcast/protocols/defer.hpp"
#include "vanetcast/protocols/packet.hpp"
#include "vanetcast/protocols/packet_list.hpp"
#include "vanetcast/sim/rng.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace vanetcast {

enum class ProtocolKind
{
    Flooding,
    Wpbm,
    Odam,
    OdamC,
};

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);

/// Which point the inhibition angle is measured at.
enum class AngleVertex
{
    Receiver, // at this node, between the first sender and the current forwarder
    Sender,   // at the first sender, between the current forwarder and this node
};

/// How an L1 duplicate is handled on each side of the 90 degree threshold.
enum class BranchPolarity
{
    Prose,      // < 90: ignore and keep waiting; >= 90: move to L0 with a fresh timer
    Pseudocode, // < 90: stop forwarding;         >= 90: move to L0 with a fresh timer
};

struct PacketListConfig
{
    std::size_t l1_capacity = 64;
    std::size_t l0_capacity = 64;

    friend bool operator==(const PacketListConfig&, const PacketListConfig&) = default;
};

struct ProtocolConfig
{
    ProtocolKind kind = ProtocolKind::OdamC;
    double p_fwd = 0.5; // WPBM only
    AngleVertex angle_vertex = AngleVertex::Receiver;
    BranchPolarity branch_polarity = BranchPolarity::Prose;
    DeferConfig defer;
    PacketListConfig lists;

    friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

// Actions a node hands back to the simulator.
struct Forward
{
    Packet packet;
};
struct SetTimer
{
    PacketId packet_id;
    double delay = 0.0;
};
struct CancelTimer
{
    PacketId packet_id;
};
struct Drop
{
};

using ProtocolAction = std::variant<Forward, SetTimer, CancelTimer, Drop>;
using Actions = std::vector<ProtocolAction>;

/// What a node knows about itself when handling an event.
struct NodeContext
{
    NodeId id = kNoNode;
    Position pos;
    SimTime now;
    double ring_length = 0.0; // > 0 when x wraps (ring road)

    /// `p` as seen from this node, unwrapped across the ring seam.
    Position local(const Position& p) const { return nearest_image(p, pos, ring_length); }
};

class DuplicateOrigination : public std::logic_error
{
public:
    explicit DuplicateOrigination(const PacketId& id)
        : std::logic_error("packet " + to_string(id) + " originated twice")
    {
    }
};

/// Per-node broadcast protocol state machine.
class BroadcastProtocol
{
public:
    virtual ~BroadcastProtocol() = default;

    virtual ProtocolKind kind() const = 0;
    virtual Actions on_originate(const NodeContext& self, const Packet& packet) = 0;
    virtual Actions on_receive(const NodeContext& self, const Packet& packet) = 0;
    virtual Actions on_timer_expiry(const NodeContext& self, const PacketId& id) = 0;
};

/// Copy of `packet` as retransmitted by `self`.
Packet relay_copy(const Packet& packet, const NodeContext& self);

class FloodingProtocol final : public BroadcastProtocol
{
public:
    ProtocolKind kind() const override { return ProtocolKind::Flooding; }
    Actions on_originate(const NodeContext& self, const Packet& packet) override;
    Actions on_receive(const NodeContext& self, const Packet& packet) override;
    Actions on_timer_expiry(const NodeContext&, const PacketId&) override { return {}; }

private:
    std::unordered_set<PacketId> seen_;
};

/// Probabilistic flooding: a first reception is relayed with probability p_fwd.
class WpbmProtocol final : public BroadcastProtocol
{
public:
    WpbmProtocol(double p_fwd, RngStream& rng) : p_fwd_(p_fwd), rng_(&rng) {}

    ProtocolKind kind() const override { return ProtocolKind::Wpbm; }
    Actions on_originate(const NodeContext& self, const Packet& packet) override;
    Actions on_receive(const NodeContext& self, const Packet& packet) override;
    Actions on_timer_expiry(const NodeContext&, const PacketId&) override { return {}; }

private:
    double p_fwd_;
    RngStream* rng_;
    std::unordered_set<PacketId> seen_;
};

/// Distance-deferred relaying where any duplicate heard while waiting cancels the relay.
class OdamProtocol final : public BroadcastProtocol
{
public:
    explicit OdamProtocol(DeferConfig defer) : defer_(defer) {}

    ProtocolKind kind() const override { return ProtocolKind::Odam; }
    Actions on_originate(const NodeContext& self, const Packet& packet) override;
    Actions on_receive(const NodeContext& self, const Packet& packet) override;
    Actions on_timer_expiry(const NodeContext& self, const PacketId& id) override;

private:
    struct State
    {
        Packet packet;
        bool timer_armed = false;
    };

    DeferConfig defer_;
    std::unordered_map<PacketId, State> seen_;
};

/// Outcome of an L1 duplicate under the angle rule, kept for inspection.
struct AngleDecision
{
    enum class Outcome
    {
        Ignored,  // same side, own timer kept
        Stopped,  // same side, own timer stopped (pseudocode polarity)
        Promoted, // moved L1 -> L0 with a new timer
    };

    PacketId packet_id;
    SimTime at;
    double theta = 0.0; // degrees
    bool degenerate = false;
    Outcome outcome = Outcome::Ignored;
};

/**
 * Two-list relaying with angle-based inhibition.
 *
 * A first copy goes into L1 with a distance-deferred timer. A later copy
 * from the same side as the first sender is ignored; one from the far side
 * moves the packet to L0 and re-arms the timer for a second-chance relay.
 * Any copy of a packet already in L0 cancels its pending timer. Both lists
 * are LRU-bounded; evicting an entry cancels its timer.
 */
class OdamCProtocol final : public BroadcastProtocol
{
public:
    OdamCProtocol(DeferConfig defer, PacketListConfig lists, AngleVertex vertex, BranchPolarity polarity);

    ProtocolKind kind() const override { return ProtocolKind::OdamC; }
    Actions on_originate(const NodeContext& self, const Packet& packet) override;
    Actions on_receive(const NodeContext& self, const Packet& packet) override;
    Actions on_timer_expiry(const NodeContext& self, const PacketId& id) override;

    const PacketList& l1() const { return l1_; }
    const PacketList& l0() const { return l0_; }
    const std::vector<AngleDecision>& decisions() const { return decisions_; }
    std::size_t stale_timers() const { return stale_timers_; }
    std::size_t evictions() const { return evictions_; }

private:
    /// Inserts into `list` and appends a CancelTimer for an evicted armed entry.
    void insert(PacketList& list, PacketListEntry entry, SimTime now, Actions& out);

    DeferConfig defer_;
    AngleVertex vertex_;
    BranchPolarity polarity_;
    PacketList l1_;
    PacketList l0_;
    std::unordered_set<PacketId> originated_;
    std::vector<AngleDecision> decisions_;
    std::size_t stale_timers_ = 0;
    std::size_t evictions_ = 0;
};

/// Clamped to [0, R] before evaluating the defer curve; positions are
/// sampled per mobility tick, so a sender can drift just past R.
double defer_for_distance(double d, const DeferConfig& cfg);

std::unique_ptr<BroadcastProtocol> make_protocol(const ProtocolConfig& cfg, RngStream& wpbm_rng);

} // namespace vanetcast
