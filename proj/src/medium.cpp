#include "vanetcast/medium.hpp"

#include <algorithm>

namespace vanetcast {

std::vector<NodeId> neighbors(const Position& tx_pos, std::span<const Position> positions, double range,
                              NodeId tx_node, double ring_length)
{
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const auto id = static_cast<NodeId>(i);
        if (id != tx_node && ring_distance(tx_pos, positions[i], ring_length) <= range) {
            out.push_back(id);
        }
    }
    return out;
}

Medium::Medium(RadioConfig config, std::size_t node_count, RngStream rng, double ring_length)
    : config_(config), rng_(std::move(rng)), ring_length_(ring_length), busy_(node_count)
{
}

bool Medium::edge_lost(double d)
{
    if (config_.edge_loss_max <= 0.0) {
        return false;
    }
    const double start = config_.edge_loss_start * config_.range;
    if (d <= start) {
        return false;
    }
    const double span = config_.range - start;
    const double p = span > 0.0 ? config_.edge_loss_max * (d - start) / span : config_.edge_loss_max;
    return rng_.bernoulli(p);
}

std::vector<Ticket> Medium::broadcast(const Transmission& tx, std::span<const Position> positions, Engine& engine,
                                      Deliver deliver)
{
    std::vector<Ticket> tickets;
    const auto receivers = neighbors(tx.tx_pos, positions, config_.range, tx.tx_node, ring_length_);
    for (NodeId r : receivers) {
        const double d = ring_distance(tx.tx_pos, positions[r], ring_length_);
        if (edge_lost(d)) {
            ++stats_.edge_lost;
            continue;
        }
        const SimTime arrival = tx.start + (tx.airtime + d / config_.prop_speed);
        const double begin = arrival.seconds - tx.airtime;

        if (config_.collision_model == CollisionModel::AirtimeOverlap) {
            auto& busy = busy_[r];
            const double now = engine.now().seconds;
            std::erase_if(busy, [now](const Reception& e) { return e.end <= now; });

            bool collided = false;
            for (auto& other : busy) {
                if (begin < other.end && other.begin < arrival.seconds) {
                    collided = true;
                    if (!other.voided) {
                        engine.cancel(other.ticket);
                        other.voided = true;
                        ++stats_.collided;
                    }
                }
            }
            if (collided) {
                ++stats_.collided;
                busy.push_back(Reception{begin, arrival.seconds, Ticket{}, true});
                continue;
            }
            const Ticket t = engine.schedule(arrival, EventKind::Rx, EventPayload{r, tx.packet.id, tx.tx_node},
                                             [deliver, r, packet = tx.packet] { deliver(r, packet); });
            busy.push_back(Reception{begin, arrival.seconds, t, false});
            tickets.push_back(t);
        } else {
            tickets.push_back(engine.schedule(arrival, EventKind::Rx, EventPayload{r, tx.packet.id, tx.tx_node},
                                              [deliver, r, packet = tx.packet] { deliver(r, packet); }));
        }
        ++stats_.scheduled;
    }
    return tickets;
}

} // namespace vanetcast
