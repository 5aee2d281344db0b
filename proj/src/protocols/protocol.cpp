#include "vanetcast/protocols/protocol.hpp"

#include <algorithm>

namespace vanetcast {

std::string_view to_string(ProtocolKind kind)
{
    switch (kind) {
    case ProtocolKind::Flooding: return "flooding";
    case ProtocolKind::Wpbm: return "wpbm";
    case ProtocolKind::Odam: return "odam";
    case ProtocolKind::OdamC: return "odam-c";
    }
    return "unknown";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name)
{
    for (auto kind : {ProtocolKind::Flooding, ProtocolKind::Wpbm, ProtocolKind::Odam, ProtocolKind::OdamC}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

Packet relay_copy(const Packet& packet, const NodeContext& self)
{
    Packet copy = packet;
    copy.hop_sender = self.id;
    copy.hop_sender_pos = self.pos;
    return copy;
}

double defer_for_distance(double d, const DeferConfig& cfg)
{
    return defer_time(std::clamp(d, 0.0, cfg.range), cfg);
}

// ---------------------------------------------------------------- flooding

Actions FloodingProtocol::on_originate(const NodeContext& self, const Packet& packet)
{
    if (!seen_.insert(packet.id).second) {
        throw DuplicateOrigination(packet.id);
    }
    return {Forward{relay_copy(packet, self)}};
}

Actions FloodingProtocol::on_receive(const NodeContext& self, const Packet& packet)
{
    if (!seen_.insert(packet.id).second) {
        return {Drop{}};
    }
    return {Forward{relay_copy(packet, self)}};
}

// ---------------------------------------------------------------- WPBM

Actions WpbmProtocol::on_originate(const NodeContext& self, const Packet& packet)
{
    if (!seen_.insert(packet.id).second) {
        throw DuplicateOrigination(packet.id);
    }
    return {Forward{relay_copy(packet, self)}};
}

Actions WpbmProtocol::on_receive(const NodeContext& self, const Packet& packet)
{
    if (!seen_.insert(packet.id).second) {
        return {Drop{}};
    }
    if (rng_->bernoulli(p_fwd_)) {
        return {Forward{relay_copy(packet, self)}};
    }
    return {Drop{}};
}

// ---------------------------------------------------------------- ODAM

Actions OdamProtocol::on_originate(const NodeContext& self, const Packet& packet)
{
    if (!seen_.emplace(packet.id, State{packet, false}).second) {
        throw DuplicateOrigination(packet.id);
    }
    return {Forward{relay_copy(packet, self)}};
}

Actions OdamProtocol::on_receive(const NodeContext& self, const Packet& packet)
{
    auto it = seen_.find(packet.id);
    if (it == seen_.end()) {
        seen_.emplace(packet.id, State{packet, true});
        const double d = distance(self.pos, self.local(packet.hop_sender_pos));
        return {SetTimer{packet.id, defer_for_distance(d, defer_)}};
    }
    if (it->second.timer_armed) {
        it->second.timer_armed = false;
        return {CancelTimer{packet.id}, Drop{}};
    }
    return {Drop{}};
}

Actions OdamProtocol::on_timer_expiry(const NodeContext& self, const PacketId& id)
{
    auto it = seen_.find(id);
    if (it == seen_.end() || !it->second.timer_armed) {
        return {};
    }
    it->second.timer_armed = false;
    return {Forward{relay_copy(it->second.packet, self)}};
}

// ---------------------------------------------------------------- ODAM-C

OdamCProtocol::OdamCProtocol(DeferConfig defer, PacketListConfig lists, AngleVertex vertex,
                             BranchPolarity polarity)
    : defer_(defer),
      vertex_(vertex),
      polarity_(polarity),
      l1_(ListTag::L1, lists.l1_capacity),
      l0_(ListTag::L0, lists.l0_capacity)
{
}

void OdamCProtocol::insert(PacketList& list, PacketListEntry entry, SimTime now, Actions& out)
{
    auto evicted = list.touch_and_insert(std::move(entry), now);
    if (!evicted) {
        return;
    }
    ++evictions_;
    if (evicted->timer_armed) {
        out.emplace_back(CancelTimer{evicted->id()});
    }
}

Actions OdamCProtocol::on_originate(const NodeContext& self, const Packet& packet)
{
    if (!originated_.insert(packet.id).second) {
        throw DuplicateOrigination(packet.id);
    }
    Actions out{Forward{relay_copy(packet, self)}};
    // the originator keeps the packet in L1 but never arms a timer for it
    insert(l1_, PacketListEntry{packet, self.pos, false, ListTag::L1, self.now}, self.now, out);
    return out;
}

Actions OdamCProtocol::on_receive(const NodeContext& self, const Packet& packet)
{
    const double d = distance(self.pos, self.local(packet.hop_sender_pos));
    Actions out;

    if (PacketListEntry* in_l0 = l0_.find(packet.id)) {
        l0_.touch(packet.id, self.now);
        if (in_l0->timer_armed) {
            in_l0->timer_armed = false;
            out.emplace_back(CancelTimer{packet.id});
        }
        out.emplace_back(Drop{});
        return out;
    }

    PacketListEntry* in_l1 = l1_.find(packet.id);
    if (in_l1 == nullptr) {
        insert(l1_, PacketListEntry{packet, packet.hop_sender_pos, true, ListTag::L1, self.now}, self.now, out);
        out.emplace_back(SetTimer{packet.id, defer_for_distance(d, defer_)});
        return out;
    }

    l1_.touch(packet.id, self.now);
    AngleDecision decision{packet.id, self.now};
    try {
        const Position first = self.local(in_l1->first_sender_pos);
        const Position current = self.local(packet.hop_sender_pos);
        decision.theta = vertex_ == AngleVertex::Receiver ? angle_at(self.pos, first, current).value()
                                                          : angle_at(first, current, self.pos).value();
    } catch (const DegenerateVertex&) {
        decision.theta = 0.0;
        decision.degenerate = true;
    }

    if (decision.theta < 90.0) {
        if (polarity_ == BranchPolarity::Pseudocode && in_l1->timer_armed) {
            in_l1->timer_armed = false;
            out.emplace_back(CancelTimer{packet.id});
            decision.outcome = AngleDecision::Outcome::Stopped;
        } else {
            decision.outcome = AngleDecision::Outcome::Ignored;
        }
        decisions_.push_back(decision);
        out.emplace_back(Drop{});
        return out;
    }

    decision.outcome = AngleDecision::Outcome::Promoted;
    decisions_.push_back(decision);
    PacketListEntry moved = *l1_.erase(packet.id);
    if (moved.timer_armed) {
        out.emplace_back(CancelTimer{packet.id});
    }
    moved.timer_armed = true;
    insert(l0_, std::move(moved), self.now, out);
    out.emplace_back(SetTimer{packet.id, defer_for_distance(d, defer_)});
    return out;
}

Actions OdamCProtocol::on_timer_expiry(const NodeContext& self, const PacketId& id)
{
    PacketListEntry* entry = l0_.find(id);
    if (entry == nullptr) {
        entry = l1_.find(id);
    }
    if (entry == nullptr || !entry->timer_armed) {
        ++stale_timers_;
        return {};
    }
    entry->timer_armed = false;
    return {Forward{relay_copy(entry->packet, self)}};
}

// ----------------------------------------------------------------

std::unique_ptr<BroadcastProtocol> make_protocol(const ProtocolConfig& cfg, RngStream& wpbm_rng)
{
    switch (cfg.kind) {
    case ProtocolKind::Flooding: return std::make_unique<FloodingProtocol>();
    case ProtocolKind::Wpbm: return std::make_unique<WpbmProtocol>(cfg.p_fwd, wpbm_rng);
    case ProtocolKind::Odam: return std::make_unique<OdamProtocol>(cfg.defer);
    case ProtocolKind::OdamC:
        return std::make_unique<OdamCProtocol>(cfg.defer, cfg.lists, cfg.angle_vertex, cfg.branch_polarity);
    }
    throw std::invalid_argument("unknown protocol");
}

} // namespace vanetcast
