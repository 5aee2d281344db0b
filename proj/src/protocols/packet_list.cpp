#include "vanetcast/protocols/packet_list.hpp"

#include <stdexcept>

namespace vanetcast {

PacketList::PacketList(ListTag tag, std::size_t capacity) : tag_(tag), capacity_(capacity)
{
    if (capacity_ < 1) {
        throw std::invalid_argument("packet list capacity must be at least 1");
    }
}

PacketListEntry* PacketList::find(const PacketId& id)
{
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &*it->second;
}

const PacketListEntry* PacketList::find(const PacketId& id) const
{
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &*it->second;
}

bool PacketList::touch(const PacketId& id, SimTime now)
{
    auto it = index_.find(id);
    if (it == index_.end()) {
        return false;
    }
    it->second->last_touch = now;
    order_.splice(order_.begin(), order_, it->second);
    return true;
}

std::optional<PacketListEntry> PacketList::touch_and_insert(PacketListEntry entry, SimTime now)
{
    entry.list = tag_;
    entry.last_touch = now;
    if (auto it = index_.find(entry.id()); it != index_.end()) {
        *it->second = std::move(entry);
        order_.splice(order_.begin(), order_, it->second);
        return std::nullopt;
    }

    order_.push_front(std::move(entry));
    index_.emplace(order_.front().id(), order_.begin());
    if (index_.size() <= capacity_) {
        return std::nullopt;
    }
    PacketListEntry evicted = std::move(order_.back());
    index_.erase(evicted.id());
    order_.pop_back();
    return evicted;
}

std::optional<PacketListEntry> PacketList::erase(const PacketId& id)
{
    auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    PacketListEntry out = std::move(*it->second);
    order_.erase(it->second);
    index_.erase(it);
    return out;
}

std::vector<PacketId> PacketList::ids_by_recency() const
{
    std::vector<PacketId> ids;
    ids.reserve(order_.size());
    for (const auto& e : order_) ids.push_back(e.id());
    return ids;
}

} // namespace vanetcast
