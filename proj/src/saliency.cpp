#include "umsli/saliency.hpp"

#include <algorithm>
#include <queue>

namespace umsli {

Image saliency_map(const Image& img, const GammaKernelBank& bank, ConvolvePath path) {
    Image map = convolve(img, bank.composite, path);
    for (double& v : map.pixels()) v = std::max(0.0, v);
    const double hi = map.max();
    if (hi > 0.0)
        for (double& v : map.pixels()) v /= hi;
    return map;
}

Mask binarize(const Image& map, double threshold) {
    Mask mask(map.width(), map.height());
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            mask.set(x, y, map.at(x, y) >= threshold);
    return mask;
}

double adaptive_threshold(const Image& map, double alpha) {
    return alpha * map.mean();
}

std::vector<Box> extract_boxes(const Image& map, const Mask& mask, int min_area) {
    if (!mask.same_shape(map)) throw DimMismatch("extract_boxes: map/mask shape mismatch");
    const int w = mask.width(), h = mask.height();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<Box> boxes;
    std::vector<std::pair<int, int>> stack;

    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!mask.get(sx, sy) || seen[static_cast<std::size_t>(sy) * w + sx]) continue;
            int min_x = sx, max_x = sx, min_y = sy, max_y = sy;
            long area = 0;
            double score_sum = 0.0;
            stack.clear();
            stack.emplace_back(sx, sy);
            seen[static_cast<std::size_t>(sy) * w + sx] = 1;
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                ++area;
                score_sum += map.at(x, y);
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        auto& flag = seen[static_cast<std::size_t>(ny) * w + nx];
                        if (flag || !mask.get(nx, ny)) continue;
                        flag = 1;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            if (area < min_area) continue;
            Box b;
            b.x = min_x;
            b.y = min_y;
            b.w = max_x - min_x + 1;
            b.h = max_y - min_y + 1;
            b.score = score_sum / static_cast<double>(area);
            boxes.push_back(b);
        }
    }
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    return boxes;
}

SaliencyResult detect(const Image& img, const GammaKernelBank& bank, double alpha, int min_area,
                      ConvolvePath path) {
    SaliencyResult res;
    res.map = saliency_map(img, bank, path);
    res.mask = binarize(res.map, adaptive_threshold(res.map, alpha));
    res.boxes = extract_boxes(res.map, res.mask, min_area);
    return res;
}

}  // namespace umsli
