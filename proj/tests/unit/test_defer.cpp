#include "vanetcast/protocols/defer.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vanetcast;

TEST_CASE("boundaries and hand value")
{
    const DeferConfig cfg{1.0, 2, 300.0};
    CHECK(defer_time(0.0, cfg) == 1.0);
    CHECK(defer_time(300.0, cfg) == 0.0);
    CHECK(defer_time(150.0, cfg) == 0.75);
}

TEST_CASE("out of range distances throw")
{
    const DeferConfig cfg{1.0, 2, 300.0};
    CHECK_THROWS_AS(defer_time(-0.001, cfg), OutOfRange);
    CHECK_THROWS_AS(defer_time(300.001, cfg), OutOfRange);
    CHECK_THROWS_AS(defer_time(std::nan(""), cfg), OutOfRange);
}

TEST_CASE("grid: bounded and strictly decreasing")
{
    for (int eps : {1, 2, 3}) {
        const DeferConfig cfg{0.01, eps, 300.0};
        double prev = defer_time(0.0, cfg);
        for (int i = 1; i <= 1000; ++i) {
            const double d = 300.0 * i / 1000.0;
            const double t = defer_time(d, cfg);
            CHECK(t >= 0.0);
            CHECK(t <= cfg.max_defer_time);
            CHECK(t < prev);
            prev = t;
        }
    }
}

TEST_CASE("default ceiling is twice the one-hop delay")
{
    const double airtime = 8000.0 / 6.0e6;
    CHECK(default_max_defer_time(airtime, 300.0, 3.0e8) == doctest::Approx(2.0 * (airtime + 1e-6)));
}

TEST_CASE("boundaries are exact for awkward ceilings and ranges")
{
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(1e-4, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const DeferConfig cfg{u(gen), 1 + i % 4, 100.0 * u(gen)};
        CHECK(defer_time(0.0, cfg) == cfg.max_defer_time);
        CHECK(defer_time(cfg.range, cfg) == 0.0);
    }
}
