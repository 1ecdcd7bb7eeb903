#ifndef UMSLI_SILHOUETTE_HPP
#define UMSLI_SILHOUETTE_HPP

#include <cstdint>
#include <string>

#include "umsli/core.hpp"

namespace umsli {

/// Parametric shape families. Turtle / Fish / Ray are the marine-animal
/// stand-ins used by the classification benchmark; Disk / Square / Triangle
/// are plain geometric shapes for unit tests.
enum class ShapeFamily { Disk, Square, Triangle, Turtle, Fish, Ray };

ShapeFamily shape_family_from_name(const std::string& name);
std::string shape_family_name(ShapeFamily f);

struct SilhouetteParams {
    ShapeFamily family = ShapeFamily::Disk;
    /// 0 = fully detailed shape, 1 = featureless blob. All families converge
    /// to a near-identical blob as morph approaches 1, so high-morph
    /// instances of different families are genuinely confusable.
    double morph = 0.0;
    double rotation = 0.0;  // radians, counter-clockwise
    double stretch = 1.0;   // area-preserving anisotropic stretch along x
    double jitter = 0.0;    // smooth radial boundary perturbation amplitude
    std::uint64_t jitter_seed = 0;
    double occlusion = 0.0;  // fraction of area removed by a straight cut
    std::uint64_t occlusion_seed = 0;
};

/// Inside-test in canonical coordinates (shape spans roughly [-1, 1]^2).
/// Applies rotation, stretch and jitter but not occlusion.
bool silhouette_inside(const SilhouetteParams& params, double u, double v);

/// Renders the silhouette into a size x size mask, scaled to fill the frame
/// with a small margin. Occlusion (if any) removes the requested area
/// fraction behind a straight cut whose direction comes from occlusion_seed.
Mask render_silhouette(const SilhouetteParams& params, int size);

}  // namespace umsli

#endif
