#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

namespace vanetcast {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Network-wide packet identity: (originating node, per-origin sequence number).
struct PacketId
{
    NodeId origin = kNoNode;
    std::uint32_t seq = 0;

    friend constexpr auto operator<=>(const PacketId&, const PacketId&) = default;
};

inline std::string to_string(const PacketId& id)
{
    return std::to_string(id.origin) + ":" + std::to_string(id.seq);
}

} // namespace vanetcast

template <>
struct std::hash<vanetcast::PacketId>
{
    std::size_t operator()(const vanetcast::PacketId& id) const noexcept
    {
        return (static_cast<std::size_t>(id.origin) << 32) ^ id.seq;
    }
};
