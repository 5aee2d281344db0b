#pragma once

#include "vanetcast/geometry.hpp"
#include "vanetcast/sim/time.hpp"
#include "vanetcast/types.hpp"

namespace vanetcast {

/// One copy of a broadcast packet as seen on the air. The hop fields describe
/// whoever transmitted this copy.
struct Packet
{
    PacketId id;
    NodeId hop_sender = kNoNode;
    Position hop_sender_pos;
    SimTime created_at;

    NodeId origin() const { return id.origin; }
};

} // namespace vanetcast
