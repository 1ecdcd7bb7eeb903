#ifndef UMSLI_CONVOLVE_HPP
#define UMSLI_CONVOLVE_HPP

#include "umsli/core.hpp"

namespace umsli {

enum class ConvolvePath {
    Auto,    // transform-domain when the operation count warrants it
    Direct,  // nested loops
    Fft,     // always via FFT
};

/// 'Same'-size linear filtering with edge-replicated borders:
/// out(p) = sum over mask offsets d of mask(d) * img(p + d), with the mask
/// center at (w/2, h/2). An impulse therefore reproduces the flipped mask.
/// The FFT path matches the direct path to better than 1e-9 absolute.
Image convolve(const Image& img, const Image& mask, ConvolvePath path = ConvolvePath::Auto);

}  // namespace umsli

#endif
