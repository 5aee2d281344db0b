#pragma once

#include "vanetcast/protocols/packet.hpp"

#include <cstddef>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

namespace vanetcast {

enum class ListTag
{
    L1, // first-seen packets
    L0, // packets heard again from the far side
};

struct PacketListEntry
{
    Packet packet; // copy retained for rebroadcast
    Position first_sender_pos;
    bool timer_armed = false;
    ListTag list = ListTag::L1;
    SimTime last_touch;

    const PacketId& id() const { return packet.id; }
};

/**
 * Bounded packet store with least-recently-used eviction.
 *
 * Recency is the order of inserts and touches; among entries touched at the
 * same simulated instant, the later touch counts as more recent.
 */
class PacketList
{
public:
    PacketList(ListTag tag, std::size_t capacity);

    ListTag tag() const { return tag_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return index_.size(); }
    bool contains(const PacketId& id) const { return index_.contains(id); }

    PacketListEntry* find(const PacketId& id);
    const PacketListEntry* find(const PacketId& id) const;

    /// Marks the entry most recently used. False if absent.
    bool touch(const PacketId& id, SimTime now);

    /// Inserts (or refreshes) the entry as most recently used. When this
    /// overflows the capacity, the least recently used entry is removed and
    /// returned so the caller can cancel its timer.
    std::optional<PacketListEntry> touch_and_insert(PacketListEntry entry, SimTime now);

    std::optional<PacketListEntry> erase(const PacketId& id);

    /// Ids from most to least recently used.
    std::vector<PacketId> ids_by_recency() const;

private:
    using Order = std::list<PacketListEntry>;

    ListTag tag_;
    std::size_t capacity_;
    Order order_; // front = most recent
    std::unordered_map<PacketId, Order::iterator> index_;
};

} // namespace vanetcast
