#pragma once

#include "vanetcast/geometry.hpp"
#include "vanetcast/sim/rng.hpp"
#include "vanetcast/types.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vanetcast {

enum class Flow
{
    Flow1,
    Flow2,
};

/// Longitudinal dynamics of one vehicle flow.
struct FlowParams
{
    double speed_kmh = 0.0;
    double accel = 0.0; // m/s^2
    double decel = 0.0; // m/s^2

    double target_speed() const { return speed_kmh / 3.6; }

    friend bool operator==(const FlowParams&, const FlowParams&) = default;
};

struct RoadConfig
{
    std::size_t lane_count = 1;
    double road_length = 0.0;
    double lane_width = 3.5;
    double min_gap = 2.0;
};

struct Vehicle
{
    NodeId id = 0;
    std::size_t lane = 0;
    Position pos; // x along the road, y at the lane center
    double speed = 0.0;
    Flow flow = Flow::Flow1;
    double target_speed = 0.0;
    double accel = 0.0;
    double decel = 0.0;
};

struct PlatoonLayout
{
    std::size_t vehicle_count = 0;
    double vehicular_gap = 0.0;
    FlowParams flow1;
    FlowParams flow2;
};

class CapacityExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

double lane_center(const RoadConfig& road, std::size_t lane);

/**
 * Places vehicles round-robin over the lanes, consecutive same-lane vehicles
 * `vehicular_gap` apart starting at x = 0. Even ids join Flow1, odd ids Flow2,
 * each starting at its flow's target speed.
 */
std::vector<Vehicle> init_vehicles(const PlatoonLayout& layout, const RoadConfig& road);

struct MobilityParams
{
    /// Krauss-style driver imperfection in [0, 1]; 0 gives exact kinematics.
    double sigma = 0.0;
    /// Time headway used for the safe-gap test.
    double headway = 1.0;
};

/**
 * Advances every vehicle by dt on a ring road.
 *
 * Each vehicle speeds up toward its target speed. A follower closer to its
 * same-lane leader than min_gap + speed * headway first tries an adjacent lane
 * (higher index first) with enough room in front and behind; failing that it
 * brakes toward the leader's speed. Followers are never moved past their
 * leader. `rng` is drawn once per vehicle, in id order, only when sigma > 0.
 */
void mobility_step(std::vector<Vehicle>& vehicles, const RoadConfig& road, double dt,
                   const MobilityParams& params, RngStream* rng);

} // namespace vanetcast
