#pragma once

#include <stdexcept>

namespace vanetcast {

/// Planar coordinates in meters.
struct Position
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr bool operator==(const Position&, const Position&) = default;
};

/// An angle in degrees, always within [0, 180].
class AngleDeg
{
public:
    constexpr AngleDeg() = default;
    explicit AngleDeg(double degrees);

    constexpr double value() const { return value_; }

private:
    double value_ = 0.0;
};

class DegenerateVertex : public std::domain_error
{
public:
    DegenerateVertex() : std::domain_error("angle vertex coincides with an edge endpoint") {}
};

double distance(const Position& p, const Position& q);

/// Copy of `p` shifted by a multiple of `period` along x so it lies closest to
/// `ref`. A period <= 0 means the plane does not wrap.
Position nearest_image(const Position& p, const Position& ref, double period);

/// Distance on a road that wraps along x every `period` meters.
double ring_distance(const Position& p, const Position& q, double period);

/// Angle at `vertex` between the rays towards `a` and `b`, via the normalized
/// dot product. Throws DegenerateVertex if either ray has zero length.
AngleDeg angle_at(const Position& vertex, const Position& a, const Position& b);

} // namespace vanetcast
