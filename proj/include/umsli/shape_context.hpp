#ifndef UMSLI_SHAPE_CONTEXT_HPP
#define UMSLI_SHAPE_CONTEXT_HPP

#include <vector>

#include "umsli/core.hpp"

namespace umsli {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Boundary sample of a shape: centroid at the origin, RMS radius 1.
using PointSet = std::vector<Point2>;

/// Traces the outer boundary of the largest 8-connected component and
/// resamples it to n points at equal arc length. The start point and
/// traversal direction are made canonical from the shape's principal axis so
/// similar shapes yield corresponding orderings. The result is centered and
/// scaled to unit RMS radius.
PointSet extract_points(const Mask& mask, int n);

/// Ordered outer boundary pixels of the largest component (Moore tracing).
std::vector<Point2> trace_boundary(const Mask& mask);

/// Per-point log-polar histograms of the other n-1 points.
struct ShapeContext {
    int r_bins = 5;
    int theta_bins = 12;
    int points = 0;
    std::vector<double> histograms;  // points x (r_bins * theta_bins), row-major

    std::size_t descriptor_size() const { return histograms.size(); }
};

ShapeContext shape_context(const PointSet& ps, int r_bins = 5, int theta_bins = 12);

/// Standard cosine distance between flattened descriptors: in [0, 2], zero
/// iff one is a positive scalar multiple of the other.
double cosine_distance(const ShapeContext& a, const ShapeContext& b);

}  // namespace umsli

#endif
