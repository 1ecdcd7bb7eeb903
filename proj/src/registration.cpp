#include "umsli/registration.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace umsli {

Affine2 Affine2::compose(const Affine2& inner) const {
    Affine2 out;
    out.m00 = m00 * inner.m00 + m01 * inner.m10;
    out.m01 = m00 * inner.m01 + m01 * inner.m11;
    out.tx = m00 * inner.tx + m01 * inner.ty + tx;
    out.m10 = m10 * inner.m00 + m11 * inner.m10;
    out.m11 = m10 * inner.m01 + m11 * inner.m11;
    out.ty = m10 * inner.tx + m11 * inner.ty + ty;
    return out;
}

PointSet apply_affine(const Affine2& a, const PointSet& ps) {
    PointSet out(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) out[i] = a.apply(ps[i]);
    return out;
}

namespace {

std::vector<std::size_t> nearest_neighbors(const PointSet& x, const PointSet& y) {
    std::vector<std::size_t> nn(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < y.size(); ++j) {
            const double dx = x[i].x - y[j].x, dy = x[i].y - y[j].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                nn[i] = j;
            }
        }
    }
    return nn;
}

}  // namespace

double correntropy(const PointSet& x, const PointSet& y, double sigma) {
    if (x.empty() || y.empty()) throw InvalidParam("correntropy needs non-empty point sets");
    if (!(sigma > 0.0)) throw InvalidParam("correntropy bandwidth must be positive");
    const auto nn = nearest_neighbors(x, y);
    double total = 0.0;
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i].x - y[nn[i]].x, dy = x[i].y - y[nn[i]].y;
        total += std::exp(-(dx * dx + dy * dy) * inv);
    }
    return total / static_cast<double>(x.size());
}

AffineAlignment mcc_align(const PointSet& x, const PointSet& y, const MccOptions& options) {
    if (x.size() < 3 || y.size() < 3)
        throw InvalidParam("mcc_align needs at least 3 points per set");
    AffineAlignment result;
    PointSet cur = x;

    for (double sigma : options.sigma_schedule) {
        if (!(sigma > 0.0)) throw InvalidParam("sigma schedule entries must be positive");
        result.stage_starts.push_back(result.trace.size());
        double prev = correntropy(cur, y, sigma);
        result.trace.push_back(prev);
        result.sigma = sigma;
        for (int it = 0; it < options.max_iter_per_stage; ++it) {
            const auto nn = nearest_neighbors(cur, y);
            const double inv = 1.0 / (2.0 * sigma * sigma);

            Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
            Eigen::Vector3d bx = Eigen::Vector3d::Zero();
            Eigen::Vector3d by = Eigen::Vector3d::Zero();
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const Point2& t = y[nn[i]];
                const double dx = cur[i].x - t.x, dy = cur[i].y - t.y;
                const double w = std::exp(-(dx * dx + dy * dy) * inv);
                const Eigen::Vector3d phi(cur[i].x, cur[i].y, 1.0);
                m += w * phi * phi.transpose();
                bx += w * t.x * phi;
                by += w * t.y * phi;
            }
            Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
            if (!lu.isInvertible())
                throw SingularFit("degenerate point configuration in affine fit");
            const Eigen::Vector3d ax = lu.solve(bx);
            const Eigen::Vector3d ay = lu.solve(by);

            Affine2 step;
            step.m00 = ax[0];
            step.m01 = ax[1];
            step.tx = ax[2];
            step.m10 = ay[0];
            step.m11 = ay[1];
            step.ty = ay[2];
            if (std::abs(step.linear_det()) < 1e-10)
                throw SingularFit("affine fit collapsed to a singular map");

            cur = apply_affine(step, cur);
            result.transform = step.compose(result.transform);
            ++result.iterations;

            const double c = correntropy(cur, y, sigma);
            result.trace.push_back(c);
            const double gain = c - prev;
            prev = c;
            if (gain < options.min_gain) break;
        }
        result.final_correntropy = prev;
    }
    if (std::abs(result.transform.linear_det()) < 1e-8)
        throw SingularFit("composite alignment is singular");
    return result;
}

}  // namespace umsli
