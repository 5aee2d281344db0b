#include "vanetcast/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace vanetcast {

double lane_center(const RoadConfig& road, std::size_t lane)
{
    return (static_cast<double>(lane) + 0.5) * road.lane_width;
}

std::vector<Vehicle> init_vehicles(const PlatoonLayout& layout, const RoadConfig& road)
{
    const std::size_t lanes = road.lane_count;
    const std::size_t per_lane = (layout.vehicle_count + lanes - 1) / lanes;
    const double spacing = std::max(layout.vehicular_gap, road.min_gap);
    // the ring closes behind the last vehicle, so it needs a full gap too
    if (static_cast<double>(per_lane) * spacing > road.road_length) {
        throw CapacityExceeded(std::to_string(per_lane) + " vehicles per lane at " +
                               std::to_string(spacing) + " m spacing exceed a " +
                               std::to_string(road.road_length) + " m road");
    }

    std::vector<Vehicle> vehicles;
    vehicles.reserve(layout.vehicle_count);
    for (std::size_t i = 0; i < layout.vehicle_count; ++i) {
        const FlowParams& params = (i % 2 == 0) ? layout.flow1 : layout.flow2;
        Vehicle v;
        v.id = static_cast<NodeId>(i);
        v.lane = i % lanes;
        v.pos = Position{static_cast<double>(i / lanes) * layout.vehicular_gap, lane_center(road, v.lane)};
        v.flow = (i % 2 == 0) ? Flow::Flow1 : Flow::Flow2;
        v.target_speed = params.target_speed();
        v.speed = v.target_speed;
        v.accel = params.accel;
        v.decel = params.decel;
        vehicles.push_back(v);
    }
    return vehicles;
}

namespace {

struct Motion
{
    double speed = 0.0;
    double dx = 0.0;
};

// Constant-rate speed change toward `goal`, holding `goal` once reached.
Motion advance(double v0, double goal, double rate, double dt)
{
    if (v0 == goal || rate <= 0.0) {
        return {v0, v0 * dt};
    }
    const double dir = goal > v0 ? 1.0 : -1.0;
    const double t_reach = std::abs(goal - v0) / rate;
    if (t_reach >= dt) {
        return {v0 + dir * rate * dt, v0 * dt + dir * 0.5 * rate * dt * dt};
    }
    return {goal, v0 * t_reach + dir * 0.5 * rate * t_reach * t_reach + goal * (dt - t_reach)};
}

double forward_gap(double from, double to, double length)
{
    double g = std::fmod(to - from, length);
    if (g < 0.0) g += length;
    return g;
}

class LaneIndex
{
public:
    LaneIndex(const std::vector<Vehicle>& vehicles, std::size_t lane_count)
        : vehicles_(vehicles), lanes_(lane_count)
    {
        for (const auto& v : vehicles) {
            lanes_[v.lane].push_back(v.id);
        }
        for (auto& lane : lanes_) {
            std::sort(lane.begin(), lane.end(), [this](NodeId a, NodeId b) { return less(a, b); });
        }
    }

    const std::vector<NodeId>& lane(std::size_t l) const { return lanes_[l]; }

    void move(NodeId id, std::size_t from, std::size_t to)
    {
        auto& src = lanes_[from];
        src.erase(std::find(src.begin(), src.end(), id));
        auto& dst = lanes_[to];
        dst.insert(std::upper_bound(dst.begin(), dst.end(), id, [this](NodeId a, NodeId b) { return less(a, b); }),
                   id);
    }

    /// Nearest vehicle at or ahead of x in `lane` on the ring, skipping `self`.
    std::optional<NodeId> ahead(std::size_t lane, double x, NodeId self) const
    {
        const auto& ids = lanes_[lane];
        const std::size_t m = ids.size();
        const std::size_t start = lower_index(ids, x);
        for (std::size_t k = 0; k < m; ++k) {
            const NodeId id = ids[(start + k) % m];
            if (id != self) return id;
        }
        return std::nullopt;
    }

    /// Nearest vehicle strictly behind x in `lane` on the ring, skipping `self`.
    std::optional<NodeId> behind(std::size_t lane, double x, NodeId self) const
    {
        const auto& ids = lanes_[lane];
        const std::size_t m = ids.size();
        const std::size_t start = lower_index(ids, x);
        for (std::size_t k = 1; k <= m; ++k) {
            const NodeId id = ids[(start + m - k) % m];
            if (id != self) return id;
        }
        return std::nullopt;
    }

private:
    bool less(NodeId a, NodeId b) const
    {
        const double xa = vehicles_[a].pos.x;
        const double xb = vehicles_[b].pos.x;
        return xa != xb ? xa < xb : a < b;
    }

    std::size_t lower_index(const std::vector<NodeId>& ids, double x) const
    {
        auto it = std::lower_bound(ids.begin(), ids.end(), x,
                                   [this](NodeId id, double value) { return vehicles_[id].pos.x < value; });
        return static_cast<std::size_t>(it - ids.begin());
    }

    const std::vector<Vehicle>& vehicles_;
    std::vector<std::vector<NodeId>> lanes_;
};

} // namespace

void mobility_step(std::vector<Vehicle>& vehicles, const RoadConfig& road, double dt,
                   const MobilityParams& params, RngStream* rng)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("mobility step requires dt > 0");
    }
    const double length = road.road_length;
    const std::size_t n = vehicles.size();

    // Decisions read start-of-step positions and speeds; lane changes made
    // earlier in the pass are visible to later vehicles.
    LaneIndex index(vehicles, road.lane_count);
    std::vector<std::size_t> lane(n);
    for (std::size_t i = 0; i < n; ++i) lane[i] = vehicles[i].lane;

    std::vector<Motion> plan(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vehicle& v = vehicles[i];
        const double safe_gap = road.min_gap + v.speed * params.headway;
        const auto leader = index.ahead(lane[i], v.pos.x, v.id);
        const bool blocked = leader && forward_gap(v.pos.x, vehicles[*leader].pos.x, length) < safe_gap;

        bool changed_lane = false;
        if (blocked) {
            for (int delta : {+1, -1}) {
                if (delta < 0 && lane[i] == 0) continue;
                const std::size_t target = lane[i] + delta;
                if (target >= road.lane_count) continue;
                const auto front = index.ahead(target, v.pos.x, v.id);
                const auto back = index.behind(target, v.pos.x, v.id);
                const bool front_ok = !front || forward_gap(v.pos.x, vehicles[*front].pos.x, length) >= safe_gap;
                const bool back_ok =
                    !back || forward_gap(vehicles[*back].pos.x, v.pos.x, length) >=
                                 road.min_gap + vehicles[*back].speed * params.headway;
                if (front_ok && back_ok) {
                    index.move(v.id, lane[i], target);
                    lane[i] = target;
                    changed_lane = true;
                    break;
                }
            }
        }

        Motion m;
        if (blocked && !changed_lane) {
            const double leader_speed = vehicles[*leader].speed;
            m = v.speed > leader_speed ? advance(v.speed, leader_speed, v.decel, dt) : Motion{v.speed, v.speed * dt};
        } else {
            m = advance(v.speed, v.target_speed, v.speed < v.target_speed ? v.accel : v.decel, dt);
        }

        if (params.sigma > 0.0 && rng != nullptr) {
            const double cut = std::min(m.speed, params.sigma * v.accel * dt * rng->uniform());
            m.speed -= cut;
            m.dx = std::max(0.0, m.dx - 0.5 * cut * dt);
        }
        plan[i] = m;
    }

    // No follower may end the step past its leader, nor closer than min_gap
    // unless it stays put.
    for (std::size_t l = 0; l < road.lane_count; ++l) {
        const auto& order = index.lane(l);
        const std::size_t m = order.size();
        if (m < 2) continue;
        for (std::size_t pass = 0; pass <= m; ++pass) {
            bool changed = false;
            for (std::size_t k = m; k-- > 0;) {
                const NodeId follower = order[k];
                const NodeId leader = order[(k + 1) % m];
                const double gap = forward_gap(vehicles[follower].pos.x, vehicles[leader].pos.x, length);
                const double limit = std::max(0.0, gap + plan[leader].dx - road.min_gap);
                if (plan[follower].dx > limit) {
                    plan[follower].dx = limit;
                    plan[follower].speed = std::min(plan[follower].speed, plan[leader].speed);
                    changed = true;
                }
            }
            if (!changed) break;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        Vehicle& v = vehicles[i];
        double x = v.pos.x + plan[i].dx;
        if (x >= length) {
            x = std::fmod(x, length);
        }
        v.lane = lane[i];
        v.pos = Position{x, lane_center(road, v.lane)};
        v.speed = plan[i].speed;
    }
}

} // namespace vanetcast
