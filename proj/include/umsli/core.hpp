#ifndef UMSLI_CORE_HPP
#define UMSLI_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace umsli {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; byte_offset points at (or near) the offending byte.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " (byte " + std::to_string(byte_offset) + ")"),
          byte_offset(byte_offset) {}
    std::size_t byte_offset;
};

class InvalidParam : public Error {
public:
    using Error::Error;
};

class DimMismatch : public Error {
public:
    using Error::Error;
};

class SeTooLarge : public Error {
public:
    using Error::Error;
};

class MaskTooLarge : public Error {
public:
    using Error::Error;
};

class RegionOutOfBounds : public Error {
public:
    using Error::Error;
};

class EmptyMask : public Error {
public:
    using Error::Error;
};

class DegenerateBoundary : public Error {
public:
    using Error::Error;
};

class SingularFit : public Error {
public:
    using Error::Error;
};

/// Row-major 2-D grid of doubles. Used both for non-negative intensity
/// images and for signed intermediates (enhanced images, saliency scores
/// before clamping); constructors do not restrict sign.
class Image {
public:
    Image() = default;
    Image(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Edge-replicated access: coordinates are clamped into the frame.
    double at_clamped(int x, int y) const;

    std::span<double> pixels() { return data_; }
    std::span<const double> pixels() const { return data_; }

    double min() const;
    double max() const;
    double sum() const;
    double mean() const;

    bool same_shape(const Image& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Binary mask with the same layout as Image.
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    void set(int x, int y, bool v) { data_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
    bool get(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x] != 0; }

    std::span<const std::uint8_t> raw() const { return data_; }
    std::size_t count() const;

    bool same_shape(const Mask& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }
    bool same_shape(const Image& other) const {
        return width_ == other.width() && height_ == other.height();
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool contains(double px, double py) const {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
    bool inside(int frame_w, int frame_h) const {
        return x >= 0 && y >= 0 && w > 0 && h > 0 && x + w <= frame_w && y + h <= frame_h;
    }
};

/// Detection box: tight component bounds plus the mean saliency inside.
struct Box {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    double score = 0.0;

    Rect rect() const { return Rect{x, y, w, h}; }
    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
};

}  // namespace umsli

#endif
