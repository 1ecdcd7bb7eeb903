#ifndef UMSLI_HU_HPP
#define UMSLI_HU_HPP

#include <array>
#include <cmath>

#include "umsli/core.hpp"

namespace umsli {

/// The seven Hu invariant moments of a silhouette, each passed through a
/// signed log, sign(h) * log(1 + |h| * 1e7), so components are numerically
/// comparable. Invariant to translation, scale and rotation; the seventh
/// flips sign under mirroring.
struct HuState {
    std::array<double, 7> values{};

    double distance_sq(const HuState& other) const {
        double s = 0.0;
        for (int i = 0; i < 7; ++i) {
            const double d = values[static_cast<std::size_t>(i)] - other.values[static_cast<std::size_t>(i)];
            s += d * d;
        }
        return s;
    }
    double distance(const HuState& other) const { return std::sqrt(distance_sq(other)); }
};

HuState hu_moments(const Mask& mask);

/// The raw invariants before the signed-log mapping.
std::array<double, 7> hu_moments_raw(const Mask& mask);

double signed_log(double v);

}  // namespace umsli

#endif
