#include "umsli/hu.hpp"

namespace umsli {

double signed_log(double v) {
    const double s = v < 0 ? -1.0 : 1.0;
    return s * std::log1p(std::abs(v) * 1e7);
}

std::array<double, 7> hu_moments_raw(const Mask& mask) {
    const int w = mask.width(), h = mask.height();
    double m00 = 0.0, m10 = 0.0, m01 = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.get(x, y)) {
                m00 += 1.0;
                m10 += x;
                m01 += y;
            }
    if (m00 == 0.0) throw EmptyMask("hu_moments: empty mask");
    const double cx = m10 / m00, cy = m01 / m00;

    double mu20 = 0, mu02 = 0, mu11 = 0, mu30 = 0, mu03 = 0, mu21 = 0, mu12 = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.get(x, y)) {
                const double dx = x - cx, dy = y - cy;
                mu20 += dx * dx;
                mu02 += dy * dy;
                mu11 += dx * dy;
                mu30 += dx * dx * dx;
                mu03 += dy * dy * dy;
                mu21 += dx * dx * dy;
                mu12 += dx * dy * dy;
            }

    // normalized central moments: eta_pq = mu_pq / m00^(1 + (p+q)/2)
    const double n2 = m00 * m00;
    const double n3 = n2 * std::sqrt(m00);
    const double e20 = mu20 / n2, e02 = mu02 / n2, e11 = mu11 / n2;
    const double e30 = mu30 / n3, e03 = mu03 / n3, e21 = mu21 / n3, e12 = mu12 / n3;

    std::array<double, 7> hu{};
    hu[0] = e20 + e02;
    hu[1] = (e20 - e02) * (e20 - e02) + 4.0 * e11 * e11;
    hu[2] = (e30 - 3.0 * e12) * (e30 - 3.0 * e12) + (3.0 * e21 - e03) * (3.0 * e21 - e03);
    hu[3] = (e30 + e12) * (e30 + e12) + (e21 + e03) * (e21 + e03);
    hu[4] = (e30 - 3.0 * e12) * (e30 + e12) *
                ((e30 + e12) * (e30 + e12) - 3.0 * (e21 + e03) * (e21 + e03)) +
            (3.0 * e21 - e03) * (e21 + e03) *
                (3.0 * (e30 + e12) * (e30 + e12) - (e21 + e03) * (e21 + e03));
    hu[5] = (e20 - e02) * ((e30 + e12) * (e30 + e12) - (e21 + e03) * (e21 + e03)) +
            4.0 * e11 * (e30 + e12) * (e21 + e03);
    hu[6] = (3.0 * e21 - e03) * (e30 + e12) *
                ((e30 + e12) * (e30 + e12) - 3.0 * (e21 + e03) * (e21 + e03)) -
            (e30 - 3.0 * e12) * (e21 + e03) *
                (3.0 * (e30 + e12) * (e30 + e12) - (e21 + e03) * (e21 + e03));
    return hu;
}

HuState hu_moments(const Mask& mask) {
    const auto raw = hu_moments_raw(mask);
    HuState state;
    for (std::size_t i = 0; i < 7; ++i) state.values[i] = signed_log(raw[i]);
    return state;
}

}  // namespace umsli
