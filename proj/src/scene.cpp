#include "umsli/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "umsli/config.hpp"

namespace umsli {

namespace {

std::uint64_t frame_stream_seed(std::uint64_t scene_seed, int frame, bool dense) {
    std::uint64_t h = scene_seed;
    h ^= 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(frame) * 0xbf58476d1ce4e5b9ULL;
    h ^= dense ? 0x94d049bb133111ebULL : 0;
    h ^= h >> 31;
    return h;
}

double object_field(const SyntheticScene& scene, int frame, double px, double py) {
    double v = 0.0;
    for (const auto& obj : scene.objects) {
        const double u = (px - obj.cx(frame)) / obj.size;
        const double w = (py - obj.cy(frame)) / obj.size;
        if (u * u + w * w > 4.0) continue;  // outside any silhouette's support
        if (silhouette_inside(obj.shape, u, w)) v += obj.gain;
    }
    return v;
}

bool object_inside(const SyntheticScene& scene, int frame, double px, double py) {
    for (const auto& obj : scene.objects) {
        const double u = (px - obj.cx(frame)) / obj.size;
        const double w = (py - obj.cy(frame)) / obj.size;
        if (u * u + w * w > 4.0) continue;
        if (silhouette_inside(obj.shape, u, w)) return true;
    }
    return false;
}

}  // namespace

void SyntheticScene::validate() const {
    if (width <= 0 || height <= 0) throw InvalidParam("scene dimensions must be positive");
    if (noise_sigma < 0) throw InvalidParam("noise sigma must be >= 0");
    if (dense_upsample < 1) throw InvalidParam("dense upsample must be >= 1");
    if (dense_noise_divisor <= 0) throw InvalidParam("dense noise divisor must be > 0");
    for (const auto& obj : objects) {
        if (obj.size <= 0) throw InvalidParam("object size must be positive");
        if (obj.x < 0 || obj.x >= width || obj.y < 0 || obj.y >= height)
            throw InvalidParam("object position outside frame");
    }
}

Image render_scene(const SyntheticScene& scene, const ScanMode& mode, int frame_index) {
    scene.validate();
    std::mt19937_64 rng(frame_stream_seed(scene.seed, frame_index, mode.is_dense()));
    std::normal_distribution<double> gauss(0.0, 1.0);

    if (!mode.is_dense()) {
        Image img(scene.width, scene.height);
        const double nu = scene.width > 1 ? 1.0 / (scene.width - 1) : 0.0;
        const double nv = scene.height > 1 ? 1.0 / (scene.height - 1) : 0.0;
        for (int y = 0; y < scene.height; ++y) {
            for (int x = 0; x < scene.width; ++x) {
                double v = scene.gradient.eval(x * nu, y * nv);
                v += object_field(scene, frame_index, x, y);
                if (scene.noise_sigma > 0) v += scene.noise_sigma * gauss(rng);
                img.at(x, y) = std::max(0.0, v);
            }
        }
        return img;
    }

    const Rect& r = mode.region();
    if (!r.inside(scene.width, scene.height))
        throw RegionOutOfBounds("dense region outside sparse frame");
    const int up = scene.dense_upsample;
    const double sigma = scene.noise_sigma / scene.dense_noise_divisor;
    Image img(r.w * up, r.h * up);
    const double nu = scene.width > 1 ? 1.0 / (scene.width - 1) : 0.0;
    const double nv = scene.height > 1 ? 1.0 / (scene.height - 1) : 0.0;
    for (int j = 0; j < r.h * up; ++j) {
        for (int i = 0; i < r.w * up; ++i) {
            const double px = r.x + (i + 0.5) / up - 0.5;
            const double py = r.y + (j + 0.5) / up - 0.5;
            double v = scene.gradient.eval(px * nu, py * nv);
            v += object_field(scene, frame_index, px, py);
            if (sigma > 0) v += sigma * gauss(rng);
            img.at(i, j) = std::max(0.0, v);
        }
    }
    return img;
}

Mask render_ground_truth(const SyntheticScene& scene, const ScanMode& mode, int frame_index) {
    scene.validate();
    if (!mode.is_dense()) {
        Mask m(scene.width, scene.height);
        for (int y = 0; y < scene.height; ++y)
            for (int x = 0; x < scene.width; ++x)
                m.set(x, y, object_inside(scene, frame_index, x, y));
        return m;
    }
    const Rect& r = mode.region();
    if (!r.inside(scene.width, scene.height))
        throw RegionOutOfBounds("dense region outside sparse frame");
    const int up = scene.dense_upsample;
    Mask m(r.w * up, r.h * up);
    for (int j = 0; j < r.h * up; ++j) {
        for (int i = 0; i < r.w * up; ++i) {
            const double px = r.x + (i + 0.5) / up - 0.5;
            const double py = r.y + (j + 0.5) / up - 0.5;
            m.set(i, j, object_inside(scene, frame_index, px, py));
        }
    }
    return m;
}

SyntheticScene load_scene(const std::filesystem::path& path) {
    KeyValueFile kv = KeyValueFile::parse_file(path);
    SyntheticScene s;
    s.width = kv.get_int("width");
    s.height = kv.get_int("height");
    s.seed = kv.get_u64("seed", 0);
    s.noise_sigma = kv.get_double("noise.sigma", 0.0);
    s.gradient.base = kv.get_double("gradient.base", 0.0);
    s.gradient.gx = kv.get_double("gradient.x", 0.0);
    s.gradient.gy = kv.get_double("gradient.y", 0.0);
    s.gradient.gxx = kv.get_double("gradient.xx", 0.0);
    s.gradient.gyy = kv.get_double("gradient.yy", 0.0);
    s.gradient.gxy = kv.get_double("gradient.xy", 0.0);
    s.dense_upsample = kv.get_int("dense.upsample", 4);
    s.dense_noise_divisor = kv.get_double("dense.noise_divisor", 2.0);
    for (int i = 0;; ++i) {
        const std::string p = "object." + std::to_string(i) + ".";
        if (!kv.has(p + "family")) break;
        SceneObject obj;
        obj.shape.family = shape_family_from_name(kv.get_string(p + "family"));
        obj.shape.morph = kv.get_double(p + "morph", 0.0);
        obj.shape.rotation = kv.get_double(p + "rotation", 0.0);
        obj.shape.stretch = kv.get_double(p + "stretch", 1.0);
        obj.shape.jitter = kv.get_double(p + "jitter", 0.0);
        obj.shape.jitter_seed = kv.get_u64(p + "jitter_seed", 0);
        obj.size = kv.get_double(p + "size");
        obj.x = kv.get_double(p + "x");
        obj.y = kv.get_double(p + "y");
        obj.vx = kv.get_double(p + "vx", 0.0);
        obj.vy = kv.get_double(p + "vy", 0.0);
        obj.gain = kv.get_double(p + "gain", 0.5);
        s.objects.push_back(obj);
    }
    kv.throw_on_unconsumed();
    s.validate();
    return s;
}

void save_scene(const SyntheticScene& scene, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "width = " << scene.width << "\n";
    out << "height = " << scene.height << "\n";
    out << "seed = " << scene.seed << "\n";
    out << "noise.sigma = " << scene.noise_sigma << "\n";
    out << "gradient.base = " << scene.gradient.base << "\n";
    out << "gradient.x = " << scene.gradient.gx << "\n";
    out << "gradient.y = " << scene.gradient.gy << "\n";
    out << "gradient.xx = " << scene.gradient.gxx << "\n";
    out << "gradient.yy = " << scene.gradient.gyy << "\n";
    out << "gradient.xy = " << scene.gradient.gxy << "\n";
    out << "dense.upsample = " << scene.dense_upsample << "\n";
    out << "dense.noise_divisor = " << scene.dense_noise_divisor << "\n";
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const auto& obj = scene.objects[i];
        const std::string p = "object." + std::to_string(i) + ".";
        out << p << "family = " << shape_family_name(obj.shape.family) << "\n";
        out << p << "morph = " << obj.shape.morph << "\n";
        out << p << "rotation = " << obj.shape.rotation << "\n";
        out << p << "stretch = " << obj.shape.stretch << "\n";
        out << p << "jitter = " << obj.shape.jitter << "\n";
        out << p << "jitter_seed = " << obj.shape.jitter_seed << "\n";
        out << p << "size = " << obj.size << "\n";
        out << p << "x = " << obj.x << "\n";
        out << p << "y = " << obj.y << "\n";
        out << p << "vx = " << obj.vx << "\n";
        out << p << "vy = " << obj.vy << "\n";
        out << p << "gain = " << obj.gain << "\n";
    }
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace umsli
