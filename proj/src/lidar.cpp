#include "umsli/lidar.hpp"

#include <algorithm>
#include <cmath>

namespace umsli {

LidarCube::LidarCube(int width, int height, int depth_bins, double fill)
    : width_(width), height_(height), depth_(depth_bins) {
    if (width <= 0 || height <= 0 || depth_bins <= 0)
        throw InvalidParam("cube dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * height * depth_bins, fill);
}

Image project_time_axis(const LidarCube& cube) {
    Image out(cube.width(), cube.height(), 0.0);
    for (int t = 0; t < cube.depth_bins(); ++t)
        for (int y = 0; y < cube.height(); ++y)
            for (int x = 0; x < cube.width(); ++x)
                out.at(x, y) += cube.at(x, y, t);
    return out;
}

LidarCube spread_to_cube(const Image& img, int depth_bins) {
    if (depth_bins <= 0) throw InvalidParam("depth_bins must be positive");
    LidarCube cube(img.width(), img.height(), depth_bins);
    const double hi = std::max(img.max(), 1e-12);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double v = img.at(x, y);
            int bin = depth_bins - 1 -
                      static_cast<int>(std::floor(v / hi * (depth_bins - 1) + 0.5));
            bin = std::clamp(bin, 0, depth_bins - 1);
            cube.at(x, y, bin) = v;
        }
    }
    return cube;
}

}  // namespace umsli
