#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace waveinv {

/// Seedable generator with a pinned algorithm: mt19937_64 for the raw stream,
/// [0,1) doubles from the top 53 bits, normals via Box-Muller. Distribution
/// code is spelled out here instead of using <random> distributions, whose
/// output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(); // (0,1], keeps log finite
        const double u2 = uniform01();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

    static constexpr const char* name() { return "mt19937-64"; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0;
    bool have_spare_ = false;
};

} // namespace waveinv
