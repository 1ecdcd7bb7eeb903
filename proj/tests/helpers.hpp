#ifndef UMSLI_TESTS_HELPERS_HPP
#define UMSLI_TESTS_HELPERS_HPP

#include <random>

#include "umsli/core.hpp"

namespace test_helpers {

inline umsli::Image random_image(int w, int h, std::mt19937_64& rng, double lo = 0.0,
                                 double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    umsli::Image img(w, h);
    for (double& v : img.pixels()) v = u(rng);
    return img;
}

/// Random map whose values lie exactly on the 256-level threshold grid.
inline umsli::Image random_quantized_map(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> u(0, 255);
    umsli::Image img(w, h);
    for (double& v : img.pixels()) v = u(rng) / 255.0;
    return img;
}

inline umsli::Mask random_mask(int w, int h, std::mt19937_64& rng, double density = 0.3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    umsli::Mask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.set(x, y, u(rng) < density);
    return m;
}

inline double max_abs_diff(const umsli::Image& a, const umsli::Image& b) {
    double m = 0.0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            m = std::max(m, std::abs(a.at(x, y) - b.at(x, y)));
    return m;
}

}  // namespace test_helpers

#endif
