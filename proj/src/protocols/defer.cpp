#include "vanetcast/protocols/defer.hpp"

#include "vanetcast/format.hpp"

namespace vanetcast {

namespace {

double ipow(double base, int exp)
{
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace

double defer_time(double d, const DeferConfig& cfg)
{
    if (!(d >= 0.0 && d <= cfg.range)) {
        throw OutOfRange("distance " + format_double(d) + " m outside [0, " + format_double(cfg.range) + "]");
    }
    const double r_eps = ipow(cfg.range, cfg.epsilon);
    return cfg.max_defer_time * ((r_eps - ipow(d, cfg.epsilon)) / r_eps);
}

double default_max_defer_time(double airtime, double range, double prop_speed)
{
    return 2.0 * (airtime + range / prop_speed);
}

} // namespace vanetcast
