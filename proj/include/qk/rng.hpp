#pragma once

#include <cstdint>
#include <cmath>

#include "qk/hmat.hpp"

namespace qk {

/// Deterministic stream generator. Sampling campaigns derive one stream per
/// (master seed, point index), so results do not depend on evaluation order.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t index = 0)
        : state_(seed + 0x9E3779B97F4A7C15ull * (index + 1)) {}

    uint64_t next_u64() {
        // splitmix64
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1].
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller. Fully pinned down, no library state.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Quaternion next_quaternion() {
        return {next_normal(), next_normal(), next_normal(), next_normal()};
    }

    /// Gaussian quaternion triple, rejected while the norm is below 1e-3;
    /// uniform on the unit sphere of H^3 after projectivization.
    HVec3 next_hvec3() {
        for (;;) {
            HVec3 v{{next_quaternion(), next_quaternion(), next_quaternion()}};
            if (v.norm() >= 1e-3) return v;
        }
    }

    std::complex<double> next_complex() { return {next_normal(), next_normal()}; }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace qk
