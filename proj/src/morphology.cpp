#include "umsli/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace umsli {

StructuringElement StructuringElement::disk(int radius) {
    if (radius < 0) throw InvalidParam("disk radius must be >= 0");
    StructuringElement se;
    se.width_ = se.height_ = 2 * radius + 1;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) se.offsets_.emplace_back(dx, dy);
    se.describe_ = "disk:" + std::to_string(radius);
    return se;
}

StructuringElement StructuringElement::square(int side) {
    if (side < 1 || side % 2 == 0)
        throw InvalidParam("square side must be odd and >= 1");
    StructuringElement se;
    se.width_ = se.height_ = side;
    const int r = side / 2;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) se.offsets_.emplace_back(dx, dy);
    se.describe_ = "square:" + std::to_string(side);
    return se;
}

StructuringElement StructuringElement::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw InvalidParam("structuring element spec must be shape:size, got '" + spec + "'");
    const std::string shape = spec.substr(0, colon);
    int size = 0;
    try {
        size = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw InvalidParam("bad structuring element size in '" + spec + "'");
    }
    if (shape == "disk") return disk(size);
    if (shape == "square") return square(size);
    throw InvalidParam("unknown structuring element shape '" + shape + "'");
}

namespace {

void check_fit(const Image& img, const StructuringElement& se) {
    if (se.width() > img.width() || se.height() > img.height())
        throw SeTooLarge("structuring element " + se.describe() + " exceeds image " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
}

template <typename Op>
Image morph(const Image& img, const StructuringElement& se, bool reflect, Op op, double init) {
    check_fit(img, se);
    Image out(img.width(), img.height());
    const int w = img.width(), h = img.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = init;
            for (const auto& [dx, dy] : se.offsets()) {
                const int sx = reflect ? x - dx : x + dx;
                const int sy = reflect ? y - dy : y + dy;
                acc = op(acc, img.at_clamped(sx, sy));
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

}  // namespace

Image erode(const Image& img, const StructuringElement& se) {
    return morph(
        img, se, false, [](double a, double b) { return std::min(a, b); },
        std::numeric_limits<double>::infinity());
}

Image dilate(const Image& img, const StructuringElement& se) {
    return morph(
        img, se, true, [](double a, double b) { return std::max(a, b); },
        -std::numeric_limits<double>::infinity());
}

Image open(const Image& img, const StructuringElement& se) {
    return dilate(erode(img, se), se);
}

Image EnhancedImage::clamped() const {
    Image out(signed_diff.width(), signed_diff.height());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out.at(x, y) = std::max(0.0, signed_diff.at(x, y));
    return out;
}

EnhancedImage illumination_correct(const Image& img, const StructuringElement& se) {
    EnhancedImage e;
    e.background = open(img, se);
    e.signed_diff = Image(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            e.signed_diff.at(x, y) = img.at(x, y) - e.background.at(x, y);
    return e;
}

StructuringElement default_se(int width, int height) {
    return StructuringElement::disk(std::max(1, std::max(width, height) / 8));
}

}  // namespace umsli
