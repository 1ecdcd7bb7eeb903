#ifndef UMSLI_REGISTRATION_HPP
#define UMSLI_REGISTRATION_HPP

#include <vector>

#include "umsli/shape_context.hpp"

namespace umsli {

/// 2-D affine transform (the last row of the 3x3 matrix is fixed [0,0,1]).
struct Affine2 {
    double m00 = 1.0, m01 = 0.0, tx = 0.0;
    double m10 = 0.0, m11 = 1.0, ty = 0.0;

    Point2 apply(const Point2& p) const {
        return {m00 * p.x + m01 * p.y + tx, m10 * p.x + m11 * p.y + ty};
    }
    double linear_det() const { return m00 * m11 - m01 * m10; }
    /// this applied after inner: (this o inner)(p) = this(inner(p)).
    Affine2 compose(const Affine2& inner) const;
};

PointSet apply_affine(const Affine2& a, const PointSet& ps);

/// Gaussian-kernel correntropy between x and y under nearest-neighbor
/// assignment from x into y: mean over i of exp(-|x_i - y_nn(i)|^2 / 2 sigma^2).
/// In (0, 1]; equals 1 iff every point coincides with its match.
double correntropy(const PointSet& x, const PointSet& y, double sigma);

struct MccOptions {
    /// Annealed bandwidth schedule; alignment runs each stage to convergence.
    std::vector<double> sigma_schedule = {0.5, 0.25, 0.125, 0.0625};
    int max_iter_per_stage = 25;
    double min_gain = 1e-6;
};

struct AffineAlignment {
    Affine2 transform;     // composite projection over all iterations
    double sigma = 0.0;    // final bandwidth
    int iterations = 0;    // total fit iterations
    double final_correntropy = 0.0;
    /// Correntropy after each iteration; non-decreasing within a stage.
    std::vector<double> trace;
    /// Index into trace where each bandwidth stage begins.
    std::vector<std::size_t> stage_starts;
};

/// Learns an affine map aligning x onto y by maximum-correntropy fitting:
/// per iteration, nearest-neighbor matching, a correntropy-weighted affine
/// least-squares step with weights frozen, then x <- A x.
AffineAlignment mcc_align(const PointSet& x, const PointSet& y, const MccOptions& options = {});

}  // namespace umsli

#endif
