#include "umsli/core.hpp"

#include <algorithm>
#include <numeric>

namespace umsli {

Image::Image(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw InvalidParam("image dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

double Image::at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return at(x, y);
}

double Image::min() const {
    return *std::min_element(data_.begin(), data_.end());
}

double Image::max() const {
    return *std::max_element(data_.begin(), data_.end());
}

double Image::sum() const {
    return std::accumulate(data_.begin(), data_.end(), 0.0);
}

double Image::mean() const {
    return data_.empty() ? 0.0 : sum() / static_cast<double>(data_.size());
}

Mask::Mask(int width, int height, bool fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw InvalidParam("mask dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

}  // namespace umsli
