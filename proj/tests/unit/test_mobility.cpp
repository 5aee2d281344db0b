#include "vanetcast/mobility.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace vanetcast;

namespace {

Vehicle make(NodeId id, std::size_t lane, double x, double speed, double target, double accel = 1.0,
             double decel = 4.0)
{
    Vehicle v;
    v.id = id;
    v.lane = lane;
    v.pos = Position{x, (lane + 0.5) * 3.5};
    v.speed = speed;
    v.target_speed = target;
    v.accel = accel;
    v.decel = decel;
    return v;
}

const FlowParams kFlow1{120.0, 4.5, 1.0};
const FlowParams kFlow2{70.0, 0.8, 4.5};

} // namespace

TEST_CASE("init: scenario1 layout")
{
    const RoadConfig road{4, 22000.0};
    const auto v = init_vehicles(PlatoonLayout{100, 200.0, kFlow1, kFlow2}, road);
    REQUIRE(v.size() == 100);
    std::map<std::size_t, int> per_lane;
    double max_x = 0.0;
    for (const auto& veh : v) {
        ++per_lane[veh.lane];
        max_x = std::max(max_x, veh.pos.x);
        CHECK(veh.pos.y == lane_center(road, veh.lane));
        CHECK(veh.flow == (veh.id % 2 == 0 ? Flow::Flow1 : Flow::Flow2));
        CHECK(veh.speed == veh.target_speed);
    }
    for (const auto& [lane, n] : per_lane) CHECK(n == 25);
    CHECK(max_x == 4800.0);
    CHECK(v[0].target_speed == doctest::Approx(120.0 / 3.6));
    CHECK(v[1].decel == 4.5);
}

TEST_CASE("init: single vehicle")
{
    const auto v = init_vehicles(PlatoonLayout{1, 200.0, kFlow1, kFlow2}, RoadConfig{4, 22000.0});
    REQUIRE(v.size() == 1);
    CHECK(v[0].pos.x == 0.0);
    CHECK(v[0].lane == 0);
}

TEST_CASE("init: scenario3 layout")
{
    const auto v = init_vehicles(PlatoonLayout{500, 5.0, kFlow1, kFlow2}, RoadConfig{3, 22000.0});
    std::map<std::size_t, int> per_lane;
    double max_x = 0.0;
    for (const auto& veh : v) {
        ++per_lane[veh.lane];
        max_x = std::max(max_x, veh.pos.x);
    }
    CHECK(per_lane[0] == 167);
    CHECK(per_lane[2] == 166);
    CHECK(max_x == 830.0);
}

TEST_CASE("init: capacity")
{
    CHECK_THROWS_AS(init_vehicles(PlatoonLayout{30, 200.0, kFlow1, kFlow2}, RoadConfig{1, 5000.0}), CapacityExceeded);
    CHECK_NOTHROW(init_vehicles(PlatoonLayout{25, 200.0, kFlow1, kFlow2}, RoadConfig{1, 5000.0}));
}

TEST_CASE("step: free vehicle at target speed")
{
    std::vector<Vehicle> v{make(0, 0, 100.0, 20.0, 20.0)};
    mobility_step(v, RoadConfig{1, 10000.0}, 1.0, {}, nullptr);
    CHECK(v[0].pos.x == 120.0);
    CHECK(v[0].speed == 20.0);
}

TEST_CASE("step: acceleration from rest")
{
    std::vector<Vehicle> v{make(0, 0, 0.0, 0.0, 120.0 / 3.6, 4.5)};
    mobility_step(v, RoadConfig{1, 10000.0}, 1.0, {}, nullptr);
    CHECK(v[0].speed == 4.5);
    CHECK(v[0].pos.x == 2.25);
}

TEST_CASE("step: blocked follower overtakes into an empty lane")
{
    // gap 2 m < min_gap 2 + 20 m/s * 1 s
    std::vector<Vehicle> v{make(0, 0, 102.0, 10.0, 10.0), make(1, 0, 100.0, 20.0, 20.0)};
    mobility_step(v, RoadConfig{2, 1000.0}, 0.5, {}, nullptr);
    CHECK(v[1].lane == 1);
    CHECK(v[1].pos.y == 5.25);
    CHECK(v[1].pos.x == 110.0);
    CHECK(v[1].speed == 20.0);
    CHECK(v[0].lane == 0);
    CHECK(v[0].pos.x == 107.0);
}

TEST_CASE("step: blocked follower with no free lane brakes behind the leader")
{
    std::vector<Vehicle> v{make(0, 0, 102.0, 10.0, 10.0), make(1, 0, 100.0, 20.0, 20.0)};
    mobility_step(v, RoadConfig{1, 1000.0}, 0.5, {}, nullptr);
    CHECK(v[1].lane == 0);
    CHECK(v[0].pos.x == 107.0);
    // braking alone would cover 9.5 m; the leader only frees 5 m
    CHECK(v[1].pos.x == 105.0);
    CHECK(v[1].speed == 10.0);
}

TEST_CASE("step: unsafe target lane is refused")
{
    std::vector<Vehicle> v{make(0, 0, 102.0, 10.0, 10.0), make(1, 0, 100.0, 20.0, 20.0),
                           make(2, 1, 101.0, 10.0, 10.0)};
    mobility_step(v, RoadConfig{2, 1000.0}, 0.5, {}, nullptr);
    CHECK(v[1].lane == 0);
}

TEST_CASE("step: ring wrap")
{
    std::vector<Vehicle> v{make(0, 0, 995.0, 20.0, 20.0)};
    mobility_step(v, RoadConfig{1, 1000.0}, 0.5, {}, nullptr);
    CHECK(v[0].pos.x == doctest::Approx(5.0));
}

TEST_CASE("step: dt must be positive")
{
    std::vector<Vehicle> v{make(0, 0, 0.0, 1.0, 1.0)};
    CHECK_THROWS(mobility_step(v, RoadConfig{1, 1000.0}, 0.0, {}, nullptr));
}

TEST_CASE("halving dt reproduces single-vehicle kinematics")
{
    for (double v0 : {0.0, 5.0, 19.0, 25.0, 33.0}) {
        for (double dt : {0.1, 0.5, 1.0, 3.0}) {
            std::vector<Vehicle> one{make(0, 0, 10.0, v0, 20.0, 4.5, 1.0)};
            std::vector<Vehicle> two = one;
            const RoadConfig road{1, 100000.0};
            mobility_step(one, road, dt, {}, nullptr);
            mobility_step(two, road, dt / 2, {}, nullptr);
            mobility_step(two, road, dt / 2, {}, nullptr);
            CHECK(one[0].pos.x == doctest::Approx(two[0].pos.x).epsilon(1e-12));
            CHECK(one[0].speed == doctest::Approx(two[0].speed).epsilon(1e-12));
        }
    }
}

TEST_CASE("invariants over a dense two-flow run")
{
    const RoadConfig road{3, 3000.0};
    auto v = init_vehicles(PlatoonLayout{120, 5.0, kFlow1, kFlow2}, road);
    RngStream rng(11);
    const MobilityParams params{0.5, 1.0};
    const double dt = 0.5;
    for (int step = 0; step < 2000; ++step) {
        const auto before = v;
        mobility_step(v, road, dt, params, &rng);

        for (std::size_t i = 0; i < v.size(); ++i) {
            REQUIRE(v[i].lane < road.lane_count);
            REQUIRE(v[i].pos.x >= 0.0);
            REQUIRE(v[i].pos.x < road.road_length);
            REQUIRE(v[i].speed >= 0.0);
            REQUIRE(v[i].speed <= v[i].target_speed + v[i].accel * dt + 1e-9);
        }

        // same-lane neighbours that both stayed in lane keep their order
        auto moved = [&](std::size_t i) {
            double d = v[i].pos.x - before[i].pos.x;
            if (d < 0) d += road.road_length;
            return d;
        };
        for (std::size_t lane = 0; lane < road.lane_count; ++lane) {
            std::vector<std::size_t> ids;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (before[i].lane == lane) ids.push_back(i);
            }
            std::sort(ids.begin(), ids.end(), [&](auto a, auto b) { return before[a].pos.x < before[b].pos.x; });
            for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
                const auto f = ids[k], l = ids[k + 1];
                if (v[f].lane != lane || v[l].lane != lane) continue;
                const double gap_after = before[l].pos.x - before[f].pos.x + moved(l) - moved(f);
                REQUIRE(gap_after >= -1e-9);
            }
        }
    }
}
