#pragma once

#include <stdexcept>

namespace vanetcast {

struct DeferConfig
{
    double max_defer_time = 0.0; // s
    int epsilon = 2;
    double range = 300.0; // m

    friend bool operator==(const DeferConfig&, const DeferConfig&) = default;
};

class OutOfRange : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// Rebroadcast wait for a receiver `d` meters from the transmitter:
/// max_defer_time * (R^eps - d^eps) / R^eps. Far receivers wait less.
double defer_time(double d, const DeferConfig& cfg);

/// Default wait bound: twice the one-hop delay (airtime plus propagation at full range).
double default_max_defer_time(double airtime, double range, double prop_speed);

} // namespace vanetcast
