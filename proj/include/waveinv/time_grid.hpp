#pragma once

#include "waveinv/types.hpp"

namespace waveinv {

/// Uniform time grid on [0,T] with `steps` intervals.
struct TimeGrid {
    double T = 0;
    int steps = 0;

    double tau() const { return T / steps; }
    int nodes() const { return steps + 1; }
    double time(int i) const { return (i == steps) ? T : i * tau(); }
};

inline TimeGrid make_time_grid(double T, int steps) {
    if (!(T > 0) || steps < 1)
        throw ValidationError("TimeGrid: need T > 0 and at least one step");
    return TimeGrid{T, steps};
}

} // namespace waveinv
