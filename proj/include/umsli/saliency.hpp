#ifndef UMSLI_SALIENCY_HPP
#define UMSLI_SALIENCY_HPP

#include <vector>

#include "umsli/convolve.hpp"
#include "umsli/core.hpp"
#include "umsli/gamma.hpp"

namespace umsli {

/// Convolves the (possibly signed) image with the composite bank mask,
/// clamps negatives to zero and normalizes the maximum to 1 when positive.
Image saliency_map(const Image& img, const GammaKernelBank& bank,
                   ConvolvePath path = ConvolvePath::Auto);

/// mask(p) = map(p) >= threshold.
Mask binarize(const Image& map, double threshold);

/// alpha times the mean value of the map.
double adaptive_threshold(const Image& map, double alpha);

/// 8-connected components of the mask become boxes. Score is the mean
/// saliency inside the component; components smaller than min_area are
/// dropped. Sorted by score descending, ties by (y, x) ascending.
std::vector<Box> extract_boxes(const Image& map, const Mask& mask, int min_area);

struct SaliencyResult {
    Image map;
    Mask mask;
    std::vector<Box> boxes;
};

/// Full detection pass: map, adaptive binarization at alpha, boxes.
SaliencyResult detect(const Image& img, const GammaKernelBank& bank, double alpha, int min_area,
                      ConvolvePath path = ConvolvePath::Auto);

}  // namespace umsli

#endif
