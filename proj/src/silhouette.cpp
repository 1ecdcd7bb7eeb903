#include "umsli/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace umsli {

namespace {

constexpr double kPi = std::numbers::pi;

double lerp(double a, double b, double t) { return a + (b - a) * t; }

bool in_ellipse(double u, double v, double cx, double cy, double ax, double ay, double tilt = 0.0) {
    const double du = u - cx, dv = v - cy;
    const double c = std::cos(tilt), s = std::sin(tilt);
    const double ru = c * du + s * dv;
    const double rv = -s * du + c * dv;
    return (ru * ru) / (ax * ax) + (rv * rv) / (ay * ay) <= 1.0;
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

bool in_triangle(double u, double v, double x0, double y0, double x1, double y1,
                 double x2, double y2) {
    const double d0 = cross(x1 - x0, y1 - y0, u - x0, v - y0);
    const double d1 = cross(x2 - x1, y2 - y1, u - x1, v - y1);
    const double d2 = cross(x0 - x2, y0 - y2, u - x2, v - y2);
    const bool neg = (d0 < 0) || (d1 < 0) || (d2 < 0);
    const bool pos = (d0 > 0) || (d1 > 0) || (d2 > 0);
    return !(neg && pos);
}

/// Body metric blended between the family shape and a reference blob so
/// every family degenerates to the same silhouette at morph = 1.
bool blob_body(double u, double v, double m) {
    const double r = 0.56;
    (void)m;
    return u * u + v * v <= r * r;
}

bool turtle_inside(double u, double v, double m) {
    const double app = std::max(0.0, 1.0 - 0.92 * m);
    const double ax = lerp(0.60, 0.56, m), ay = lerp(0.44, 0.56, m);
    if (in_ellipse(u, v, 0.0, 0.0, ax, ay)) return true;
    if (m >= 1.0) return blob_body(u, v, m);
    // head
    if (in_ellipse(u, v, 0.64, 0.0, 0.20 * app, 0.15 * app)) return true;
    // four flippers, tilted outward
    const double fa = 0.30 * app, fb = 0.12 * app;
    if (in_ellipse(u, v, 0.32, 0.42, fa, fb, 0.6)) return true;
    if (in_ellipse(u, v, 0.32, -0.42, fa, fb, -0.6)) return true;
    if (in_ellipse(u, v, -0.38, 0.38, fa, fb, -0.5)) return true;
    if (in_ellipse(u, v, -0.38, -0.38, fa, fb, 0.5)) return true;
    // short tail
    if (in_triangle(u, v, -0.55, 0.10, -0.55, -0.10, -0.62 - 0.22 * app, 0.0)) return true;
    return false;
}

bool fish_inside(double u, double v, double m) {
    const double app = std::max(0.0, 1.0 - 0.92 * m);
    const double ax = lerp(0.58, 0.56, m), ay = lerp(0.28, 0.56, m);
    if (in_ellipse(u, v, 0.0, 0.0, ax, ay)) return true;
    if (m >= 1.0) return false;
    // forked tail: two lobes meeting at the peduncle
    const double tx = -0.52;
    const double span = 0.34 * app, len = 0.40 * app;
    if (in_triangle(u, v, tx, 0.04, tx - len, span, tx - 0.55 * len, 0.0)) return true;
    if (in_triangle(u, v, tx, -0.04, tx - len, -span, tx - 0.55 * len, 0.0)) return true;
    // dorsal fin
    if (in_triangle(u, v, -0.12, 0.8 * ay, 0.30, 0.8 * ay, 0.02, ay + 0.30 * app)) return true;
    // pelvic fin
    if (in_triangle(u, v, -0.02, -0.8 * ay, 0.24, -0.8 * ay, 0.06, -ay - 0.20 * app)) return true;
    return false;
}

bool ray_inside(double u, double v, double m) {
    const double app = std::max(0.0, 1.0 - 0.92 * m);
    const double wx = lerp(0.62, 0.56, m), wy = lerp(0.82, 0.56, m);
    // wing disc: diamond blended toward an ellipse as morph grows
    const double dia = std::abs(u) / wx + std::abs(v) / wy;
    const double ell = std::sqrt((u * u) / (wx * wx) + (v * v) / (wy * wy));
    if (lerp(dia, ell, m) <= 1.0) return true;
    if (m >= 1.0) return false;
    // whip tail
    const double tail_len = 0.55 * app;
    if (u >= -0.5 - tail_len && u <= -0.45 && std::abs(v) <= 0.05 + 0.02 * app) return true;
    // snout
    if (in_triangle(u, v, 0.5 * wx, 0.18, 0.5 * wx, -0.18, wx + 0.24 * app, 0.0)) return true;
    return false;
}

bool family_inside(ShapeFamily f, double u, double v, double m) {
    switch (f) {
        case ShapeFamily::Disk:
            return u * u + v * v <= 0.36;
        case ShapeFamily::Square:
            return std::abs(u) <= 0.6 && std::abs(v) <= 0.6;
        case ShapeFamily::Triangle: {
            const double r = 0.72;
            return in_triangle(u, v, 0.0, r, -r * std::sin(kPi / 3.0) * 1.0,
                               -r * 0.5, r * std::sin(kPi / 3.0), -r * 0.5);
        }
        case ShapeFamily::Turtle:
            return turtle_inside(u, v, m);
        case ShapeFamily::Fish:
            return fish_inside(u, v, m);
        case ShapeFamily::Ray:
            return ray_inside(u, v, m);
    }
    return false;
}

struct JitterWave {
    double amp[4];
    double phase[4];
};

JitterWave make_jitter(double amplitude, std::uint64_t seed) {
    JitterWave w{};
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> a(0.2, 1.0);
    double total = 0.0;
    for (int h = 0; h < 4; ++h) {
        w.amp[h] = a(rng);
        w.phase[h] = ph(rng);
        total += w.amp[h];
    }
    if (total > 0) {
        for (int h = 0; h < 4; ++h) w.amp[h] *= amplitude / total;
    }
    return w;
}

double jitter_eval(const JitterWave& w, double theta) {
    double eta = 0.0;
    for (int h = 0; h < 4; ++h) eta += w.amp[h] * std::sin((h + 2) * theta + w.phase[h]);
    return eta;
}

}  // namespace

ShapeFamily shape_family_from_name(const std::string& name) {
    if (name == "disk") return ShapeFamily::Disk;
    if (name == "square") return ShapeFamily::Square;
    if (name == "triangle") return ShapeFamily::Triangle;
    if (name == "turtle") return ShapeFamily::Turtle;
    if (name == "fish") return ShapeFamily::Fish;
    if (name == "ray") return ShapeFamily::Ray;
    throw InvalidParam("unknown shape family: " + name);
}

std::string shape_family_name(ShapeFamily f) {
    switch (f) {
        case ShapeFamily::Disk: return "disk";
        case ShapeFamily::Square: return "square";
        case ShapeFamily::Triangle: return "triangle";
        case ShapeFamily::Turtle: return "turtle";
        case ShapeFamily::Fish: return "fish";
        case ShapeFamily::Ray: return "ray";
    }
    return "?";
}

bool silhouette_inside(const SilhouetteParams& params, double u, double v) {
    // rotate the query point into the canonical frame
    const double c = std::cos(-params.rotation), s = std::sin(-params.rotation);
    double ru = c * u - s * v;
    double rv = s * u + c * v;
    if (params.stretch != 1.0) {
        ru /= params.stretch;
        rv *= params.stretch;
    }
    if (params.jitter > 0.0) {
        const JitterWave w = make_jitter(params.jitter, params.jitter_seed);
        const double theta = std::atan2(rv, ru);
        const double k = 1.0 / (1.0 + jitter_eval(w, theta));
        ru *= k;
        rv *= k;
    }
    const double m = std::clamp(params.morph, 0.0, 1.0);
    return family_inside(params.family, ru, rv, m);
}

Mask render_silhouette(const SilhouetteParams& params, int size) {
    if (size < 4) throw InvalidParam("silhouette size too small");
    Mask mask(size, size);
    const double cx = 0.5 * (size - 1);
    const double scale = 0.46 * size;
    std::vector<std::pair<int, int>> inside;
    inside.reserve(static_cast<std::size_t>(size) * size / 2);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double u = (x - cx) / scale;
            const double v = (y - cx) / scale;
            if (silhouette_inside(params, u, v)) {
                mask.set(x, y, true);
                inside.emplace_back(x, y);
            }
        }
    }
    if (params.occlusion > 0.0 && !inside.empty()) {
        std::mt19937_64 rng(params.occlusion_seed * 0x9e3779b97f4a7c15ULL + 1);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
        const double psi = ang(rng);
        const double dx = std::cos(psi), dy = std::sin(psi);
        std::vector<double> proj(inside.size());
        for (std::size_t i = 0; i < inside.size(); ++i)
            proj[i] = dx * inside[i].first + dy * inside[i].second;
        std::vector<double> sorted = proj;
        const double keep = std::clamp(1.0 - params.occlusion, 0.0, 1.0);
        const std::size_t q = std::min(sorted.size() - 1,
                                       static_cast<std::size_t>(keep * (sorted.size() - 1)));
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(q), sorted.end());
        const double cut = sorted[q];
        for (std::size_t i = 0; i < inside.size(); ++i)
            if (proj[i] > cut) mask.set(inside[i].first, inside[i].second, false);
    }
    return mask;
}

}  // namespace umsli
