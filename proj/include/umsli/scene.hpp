#ifndef UMSLI_SCENE_HPP
#define UMSLI_SCENE_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "umsli/core.hpp"
#include "umsli/silhouette.hpp"

namespace umsli {

/// Capture mode. Sparse covers the whole frame at base resolution; Dense
/// re-scans a sub-region at higher sample density and lower noise.
class ScanMode {
public:
    static ScanMode sparse() { return ScanMode(); }
    static ScanMode dense(const Rect& region) {
        ScanMode m;
        m.dense_ = true;
        m.region_ = region;
        return m;
    }

    bool is_dense() const { return dense_; }
    const Rect& region() const { return region_; }

private:
    bool dense_ = false;
    Rect region_{};
};

struct SceneObject {
    SilhouetteParams shape;
    double size = 16.0;  // canonical unit -> pixels
    double x = 0.0;      // centroid at frame 0, sparse-frame px
    double y = 0.0;
    double vx = 0.0;  // px per frame
    double vy = 0.0;
    double gain = 0.5;  // additive intensity inside the silhouette

    double cx(int frame) const { return x + vx * frame; }
    double cy(int frame) const { return y + vy * frame; }
};

/// Smooth polynomial background gradient over normalized coordinates,
/// emulating backscatter-induced non-uniform illumination.
struct GradientParams {
    double base = 0.0;
    double gx = 0.0;
    double gy = 0.0;
    double gxx = 0.0;
    double gyy = 0.0;
    double gxy = 0.0;

    double eval(double u, double v) const {
        return base + gx * u + gy * v + gxx * u * u + gyy * v * v + gxy * u * v;
    }
};

struct SyntheticScene {
    int width = 160;
    int height = 120;
    std::uint64_t seed = 0;
    GradientParams gradient;
    double noise_sigma = 0.0;
    int dense_upsample = 4;
    double dense_noise_divisor = 2.0;
    std::vector<SceneObject> objects;

    void validate() const;
};

/// Renders one frame. Sparse: full frame, gradient + Gaussian backscatter
/// noise + objects advanced by velocity * frame_index. Dense: the requested
/// region only, at dense_upsample x the base resolution with noise sigma
/// divided by dense_noise_divisor. Deterministic given (scene.seed, mode,
/// frame_index). Output intensities are clamped at 0.
Image render_scene(const SyntheticScene& scene, const ScanMode& mode, int frame_index);

/// Object-occupancy mask for the same sampling grid as render_scene.
Mask render_ground_truth(const SyntheticScene& scene, const ScanMode& mode, int frame_index);

SyntheticScene load_scene(const std::filesystem::path& path);
void save_scene(const SyntheticScene& scene, const std::filesystem::path& path);

}  // namespace umsli

#endif
