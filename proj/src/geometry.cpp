#include "vanetcast/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vanetcast {

AngleDeg::AngleDeg(double degrees)
{
    if (!(degrees >= 0.0 && degrees <= 180.0)) {
        throw std::out_of_range("angle outside [0, 180] degrees");
    }
    value_ = degrees;
}

double distance(const Position& p, const Position& q)
{
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    return std::sqrt(dx * dx + dy * dy);
}

Position nearest_image(const Position& p, const Position& ref, double period)
{
    if (period <= 0.0) {
        return p;
    }
    Position out = p;
    out.x -= period * std::round((p.x - ref.x) / period);
    return out;
}

double ring_distance(const Position& p, const Position& q, double period)
{
    return distance(p, nearest_image(q, p, period));
}

AngleDeg angle_at(const Position& vertex, const Position& a, const Position& b)
{
    const double ux = a.x - vertex.x;
    const double uy = a.y - vertex.y;
    const double vx = b.x - vertex.x;
    const double vy = b.y - vertex.y;

    const double norm_u = std::sqrt(ux * ux + uy * uy);
    const double norm_v = std::sqrt(vx * vx + vy * vy);
    if (norm_u == 0.0 || norm_v == 0.0) {
        throw DegenerateVertex();
    }

    // rounding can push collinear inputs just outside [-1, 1]
    const double cosine = std::clamp((ux * vx + uy * vy) / (norm_u * norm_v), -1.0, 1.0);
    return AngleDeg(std::acos(cosine) * (180.0 / std::numbers::pi));
}

} // namespace vanetcast
