#ifndef UMSLI_LIDAR_HPP
#define UMSLI_LIDAR_HPP

#include "umsli/core.hpp"

namespace umsli {

/// 3-D (x, y, t) grid of reflected intensities. t indexes the return-time
/// bin; summing over t yields the 2-D intensity image.
class LidarCube {
public:
    LidarCube() = default;
    LidarCube(int width, int height, int depth_bins, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    int depth_bins() const { return depth_; }

    double& at(int x, int y, int t) {
        return data_[(static_cast<std::size_t>(t) * height_ + y) * width_ + x];
    }
    double at(int x, int y, int t) const {
        return data_[(static_cast<std::size_t>(t) * height_ + y) * width_ + x];
    }

    std::span<double> samples() { return data_; }
    std::span<const double> samples() const { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    int depth_ = 0;
    std::vector<double> data_;
};

/// out(x, y) = sum over t of cube(x, y, t).
Image project_time_axis(const LidarCube& cube);

/// Spreads an intensity image into a cube: each pixel's value lands in a
/// single time bin chosen from its intensity (brighter = nearer). Projection
/// recovers the input exactly; used to emulate raw sensor captures.
LidarCube spread_to_cube(const Image& img, int depth_bins);

}  // namespace umsli

#endif
