#pragma once

#include <compare>

namespace vanetcast {

/// Simulated time in seconds. Comparisons are exact.
struct SimTime
{
    double seconds = 0.0;

    constexpr SimTime() = default;
    constexpr explicit SimTime(double s) : seconds(s) {}

    friend constexpr auto operator<=>(SimTime, SimTime) = default;

    friend constexpr SimTime operator+(SimTime t, double delta) { return SimTime{t.seconds + delta}; }
    friend constexpr double operator-(SimTime a, SimTime b) { return a.seconds - b.seconds; }
};

} // namespace vanetcast
