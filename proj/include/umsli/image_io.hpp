#ifndef UMSLI_IMAGE_IO_HPP
#define UMSLI_IMAGE_IO_HPP

#include <filesystem>

#include "umsli/core.hpp"

namespace umsli {

/// Loads an 8- or 16-bit grayscale PGM (P5) or PNG image. Pixel values are
/// mapped to [0, 1] by dividing by the format's max value. The format is
/// picked by file extension (.pgm / .png, case-insensitive).
Image load_image(const std::filesystem::path& path);

/// Writes img to .pgm or .png (by extension). Values are clamped to [0, 1]
/// and quantized to the requested bit depth (8 or 16).
void save_image(const Image& img, const std::filesystem::path& path, int bit_depth = 8);

/// Loads a binary mask: nonzero pixels (>= 0.5 after normalization) are true.
Mask load_mask(const std::filesystem::path& path);

/// Writes a mask as an 8-bit image (0 / 255).
void save_mask(const Mask& mask, const std::filesystem::path& path);

Image mask_to_image(const Mask& mask);
Mask image_to_mask(const Image& img, double threshold = 0.5);

}  // namespace umsli

#endif
