#ifndef UMSLI_MORPHOLOGY_HPP
#define UMSLI_MORPHOLOGY_HPP

#include <string>
#include <vector>

#include "umsli/core.hpp"

namespace umsli {

/// Flat (boolean) structuring element, symmetric about its center.
class StructuringElement {
public:
    static StructuringElement disk(int radius);
    static StructuringElement square(int side);  // side must be odd

    /// Parses "disk:32" or "square:5".
    static StructuringElement parse(const std::string& spec);

    int width() const { return width_; }
    int height() const { return height_; }
    /// Offsets of active cells relative to the center.
    const std::vector<std::pair<int, int>>& offsets() const { return offsets_; }
    std::string describe() const { return describe_; }

private:
    StructuringElement() = default;
    int width_ = 0;
    int height_ = 0;
    std::vector<std::pair<int, int>> offsets_;
    std::string describe_;
};

/// Grayscale erosion: min over the se-neighborhood, borders edge-replicated.
Image erode(const Image& img, const StructuringElement& se);

/// Grayscale dilation: max over the reflected se-neighborhood.
Image dilate(const Image& img, const StructuringElement& se);

/// Morphological opening (erode then dilate): the background estimate.
Image open(const Image& img, const StructuringElement& se);

/// Result of illumination correction. The signed difference is what
/// detection consumes; clamped() is for display and file output.
struct EnhancedImage {
    Image background;   // B = open(I, se)
    Image signed_diff;  // E = I - B, may be negative

    Image clamped() const;
};

EnhancedImage illumination_correct(const Image& img, const StructuringElement& se);

/// Default structuring element for a frame: disk of radius max(w,h)/8.
StructuringElement default_se(int width, int height);

}  // namespace umsli

#endif
