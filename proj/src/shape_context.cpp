#include "umsli/shape_context.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace umsli {

namespace {

constexpr double kPi = std::numbers::pi;

// clockwise neighbor order (screen coordinates, y down)
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_from(int from_x, int from_y, int to_x, int to_y) {
    for (int d = 0; d < 8; ++d)
        if (from_x + kDx[d] == to_x && from_y + kDy[d] == to_y) return d;
    return -1;
}

/// Mask of the largest 8-connected component, with its area.
std::pair<Mask, long> largest_component(const Mask& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<std::pair<int, int>> stack;
    std::vector<long> areas;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!mask.get(sx, sy) || label[static_cast<std::size_t>(sy) * w + sx] >= 0) continue;
            const int id = static_cast<int>(areas.size());
            areas.push_back(0);
            stack.assign(1, {sx, sy});
            label[static_cast<std::size_t>(sy) * w + sx] = id;
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                ++areas[static_cast<std::size_t>(id)];
                for (int d = 0; d < 8; ++d) {
                    const int nx = x + kDx[d], ny = y + kDy[d];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    auto& l = label[static_cast<std::size_t>(ny) * w + nx];
                    if (l >= 0 || !mask.get(nx, ny)) continue;
                    l = id;
                    stack.emplace_back(nx, ny);
                }
            }
        }
    }
    if (areas.empty()) throw EmptyMask("mask has no foreground pixels");
    const int best = static_cast<int>(std::max_element(areas.begin(), areas.end()) - areas.begin());
    Mask out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.set(x, y, label[static_cast<std::size_t>(y) * w + x] == best);
    return {out, areas[static_cast<std::size_t>(best)]};
}

}  // namespace

std::vector<Point2> trace_boundary(const Mask& mask) {
    const auto [comp, area] = largest_component(mask);
    const int w = comp.width(), h = comp.height();

    int sx = -1, sy = -1;
    for (int y = 0; y < h && sx < 0; ++y)
        for (int x = 0; x < w; ++x)
            if (comp.get(x, y)) {
                sx = x;
                sy = y;
                break;
            }

    std::vector<Point2> boundary;
    boundary.push_back({static_cast<double>(sx), static_cast<double>(sy)});

    // Moore-neighbor tracing; the raster-scan start guarantees the west
    // neighbor is background, which seeds the sweep direction.
    int cx = sx, cy = sy;
    int prev_dir = 4;  // direction from current to the previous (background) pixel
    int first_dir = -1;
    const long limit = 4 * area + 16;
    for (long step = 0; step < limit; ++step) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (prev_dir + k) % 8;
            const int nx = cx + kDx[d], ny = cy + kDy[d];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (comp.get(nx, ny)) {
                found = d;
                break;
            }
        }
        if (found < 0) break;  // isolated pixel
        const int nx = cx + kDx[found], ny = cy + kDy[found];
        if (first_dir < 0)
            first_dir = found;
        else if (cx == sx && cy == sy && found == first_dir)
            break;  // closed the loop entering the same way
        boundary.push_back({static_cast<double>(nx), static_cast<double>(ny)});
        const int back = direction_from(nx, ny, cx, cy);
        cx = nx;
        cy = ny;
        prev_dir = back;
    }
    if (boundary.size() > 1 && boundary.back().x == boundary.front().x &&
        boundary.back().y == boundary.front().y)
        boundary.pop_back();
    return boundary;
}

PointSet extract_points(const Mask& mask, int n) {
    if (n < 8) throw InvalidParam("boundary sampling count must be >= 8");
    if (mask.count() == 0) throw EmptyMask("mask has no foreground pixels");
    const std::vector<Point2> contour = trace_boundary(mask);
    if (contour.size() < 8)
        throw DegenerateBoundary("largest component boundary has fewer than 8 pixels");

    // canonical start: principal-axis direction from the component's second
    // moments, sign fixed by the third moment, then the boundary point with
    // the largest projection onto it
    const auto [comp, area] = largest_component(mask);
    double mx = 0.0, my = 0.0;
    for (int y = 0; y < comp.height(); ++y)
        for (int x = 0; x < comp.width(); ++x)
            if (comp.get(x, y)) {
                mx += x;
                my += y;
            }
    mx /= static_cast<double>(area);
    my /= static_cast<double>(area);
    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (int y = 0; y < comp.height(); ++y)
        for (int x = 0; x < comp.width(); ++x)
            if (comp.get(x, y)) {
                const double dx = x - mx, dy = y - my;
                mu20 += dx * dx;
                mu02 += dy * dy;
                mu11 += dx * dy;
            }
    const double phi = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
    double ax = std::cos(phi), ay = std::sin(phi);
    double skew = 0.0;
    for (int y = 0; y < comp.height(); ++y)
        for (int x = 0; x < comp.width(); ++x)
            if (comp.get(x, y)) {
                const double t = ax * (x - mx) + ay * (y - my);
                skew += t * t * t;
            }
    if (skew < 0.0) {
        ax = -ax;
        ay = -ay;
    }

    std::size_t start = 0;
    double best = -1e300;
    for (std::size_t i = 0; i < contour.size(); ++i) {
        const double proj = ax * (contour[i].x - mx) + ay * (contour[i].y - my);
        if (proj > best + 1e-12) {
            best = proj;
            start = i;
        }
    }

    // closed polyline arc lengths from the canonical start
    const std::size_t b = contour.size();
    std::vector<double> cum(b + 1, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
        const Point2& p = contour[(start + i) % b];
        const Point2& q = contour[(start + i + 1) % b];
        cum[i + 1] = cum[i] + std::hypot(q.x - p.x, q.y - p.y);
    }
    const double total = cum[b];
    if (total <= 0.0) throw DegenerateBoundary("boundary has zero length");

    PointSet out(static_cast<std::size_t>(n));
    std::size_t seg = 0;
    for (int i = 0; i < n; ++i) {
        const double target = total * i / n;
        while (seg + 1 < b && cum[seg + 1] < target) ++seg;
        const Point2& p = contour[(start + seg) % b];
        const Point2& q = contour[(start + seg + 1) % b];
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0.0 ? (target - cum[seg]) / len : 0.0;
        out[static_cast<std::size_t>(i)] = {p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t};
    }

    // center and scale to unit RMS radius
    double cx = 0.0, cy = 0.0;
    for (const auto& p : out) {
        cx += p.x;
        cy += p.y;
    }
    cx /= n;
    cy /= n;
    double rms = 0.0;
    for (auto& p : out) {
        p.x -= cx;
        p.y -= cy;
        rms += p.x * p.x + p.y * p.y;
    }
    rms = std::sqrt(rms / n);
    if (rms <= 1e-12) throw DegenerateBoundary("boundary collapses to a point");
    for (auto& p : out) {
        p.x /= rms;
        p.y /= rms;
    }
    return out;
}

ShapeContext shape_context(const PointSet& ps, int r_bins, int theta_bins) {
    const int n = static_cast<int>(ps.size());
    if (n < 2) throw InvalidParam("shape context needs at least 2 points");
    if (r_bins < 1 || theta_bins < 1) throw InvalidParam("bin counts must be positive");

    double mean_dist = 0.0;
    long pairs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            mean_dist += std::hypot(ps[static_cast<std::size_t>(j)].x - ps[static_cast<std::size_t>(i)].x,
                                    ps[static_cast<std::size_t>(j)].y - ps[static_cast<std::size_t>(i)].y);
            ++pairs;
        }
    mean_dist = pairs > 0 ? mean_dist / pairs : 1.0;
    if (mean_dist <= 0.0) mean_dist = 1.0;

    // log-spaced radial edges over [mean/8, 2*mean]; outliers clamp into the
    // first/last bin so each histogram always sums to n-1
    std::vector<double> edges(static_cast<std::size_t>(r_bins) + 1);
    const double lo = std::log(0.125 * mean_dist), hi = std::log(2.0 * mean_dist);
    for (int i = 0; i <= r_bins; ++i)
        edges[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / r_bins);

    ShapeContext sc;
    sc.r_bins = r_bins;
    sc.theta_bins = theta_bins;
    sc.points = n;
    sc.histograms.assign(static_cast<std::size_t>(n) * r_bins * theta_bins, 0.0);

    for (int i = 0; i < n; ++i) {
        double* hist = sc.histograms.data() + static_cast<std::size_t>(i) * r_bins * theta_bins;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = ps[static_cast<std::size_t>(j)].x - ps[static_cast<std::size_t>(i)].x;
            const double dy = ps[static_cast<std::size_t>(j)].y - ps[static_cast<std::size_t>(i)].y;
            const double r = std::hypot(dx, dy);
            int rb = r_bins - 1;
            for (int k = 0; k < r_bins; ++k)
                if (r < edges[static_cast<std::size_t>(k) + 1]) {
                    rb = k;
                    break;
                }
            double theta = std::atan2(dy, dx);
            if (theta < 0) theta += 2.0 * kPi;
            int tb = static_cast<int>(theta / (2.0 * kPi / theta_bins));
            tb = std::clamp(tb, 0, theta_bins - 1);
            hist[rb * theta_bins + tb] += 1.0;
        }
    }
    return sc;
}

double cosine_distance(const ShapeContext& a, const ShapeContext& b) {
    if (a.descriptor_size() != b.descriptor_size())
        throw DimMismatch("shape context descriptor sizes differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.histograms.size(); ++i) {
        dot += a.histograms[i] * b.histograms[i];
        na += a.histograms[i] * a.histograms[i];
        nb += b.histograms[i] * b.histograms[i];
    }
    if (na == 0.0 && nb == 0.0) return 0.0;
    if (na == 0.0 || nb == 0.0) return 1.0;
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace umsli
