#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "umsli/saliency.hpp"
#include "umsli/scene.hpp"

using namespace umsli;

namespace {

/// Radius of the largest mask entry.
double radial_argmax(const GammaKernel& g) {
    double best = -1.0, best_r = 0.0;
    for (int n2 = -g.radius; n2 <= g.radius; ++n2)
        for (int n1 = -g.radius; n1 <= g.radius; ++n1) {
            const double v = g.at_offset(n1, n2);
            if (v > best) {
                best = v;
                best_r = std::hypot(n1, n2);
            }
        }
    return best_r;
}

}  // namespace

TEST_CASE("gamma kernel: origin entry is zero for k > 1") {
    const GammaKernel g = gamma_kernel(2, 0.8, 6);
    CHECK(g.at_offset(0, 0) == 0.0);
}

TEST_CASE("gamma kernel: k=1 origin entry equals mu^2 / 2pi") {
    const GammaKernel g = gamma_kernel(1, 0.5, 6);
    // direct high-precision evaluation: 0.25 / (2 pi)
    CHECK(g.at_offset(0, 0) == doctest::Approx(0.0397887357729738).epsilon(1e-12));
}

TEST_CASE("gamma kernel: radial peak sits at (k-1)/mu") {
    const GammaKernel g = gamma_kernel(10, 0.5, suggest_radius(10, 0.5));
    CHECK(std::abs(radial_argmax(g) - 18.0) <= 1.0);
}

TEST_CASE("gamma kernel: entries are non-negative and decay past the peak") {
    const GammaKernel g = gamma_kernel(8, 0.7, suggest_radius(8, 0.7));
    double prev = -1.0;
    bool past_peak = false;
    const double peak_r = (8 - 1) / 0.7;
    for (int r = 0; r <= g.radius; ++r) {
        const double v = g.at_offset(r, 0);
        CHECK(v >= 0.0);
        if (past_peak) CHECK(v <= prev);
        if (r > peak_r) past_peak = true;
        prev = v;
    }
    // tail invariant: edge max below 1e-3 of the mask max with auto radius
    double edge_max = 0.0, mask_max = 0.0;
    for (int n2 = -g.radius; n2 <= g.radius; ++n2)
        for (int n1 = -g.radius; n1 <= g.radius; ++n1) {
            mask_max = std::max(mask_max, g.at_offset(n1, n2));
            if (std::abs(n1) == g.radius || std::abs(n2) == g.radius)
                edge_max = std::max(edge_max, g.at_offset(n1, n2));
        }
    CHECK(edge_max < 1e-3 * mask_max);
}

TEST_CASE("gamma kernel parameter validation") {
    CHECK_THROWS_AS(gamma_kernel(0, 1.0, 4), InvalidParam);
    CHECK_THROWS_AS(gamma_kernel(2, 0.0, 4), InvalidParam);
    CHECK_THROWS_AS(gamma_kernel(2, 1.0, 0), InvalidParam);
}

TEST_CASE("kernel bank: canonical 2-kernel composite signs") {
    const GammaKernelBank bank = kernel_bank({{1, 2.0}, {20, 1.0}});
    const int c = bank.radius;
    CHECK(bank.composite.at(c, c) > 0.0);  // center-focused minus ring: positive at origin
    CHECK(bank.composite.at(c + 19, c) < 0.0);  // negative on the surround annulus
}

TEST_CASE("kernel bank: identical kernels cancel to zero") {
    const GammaKernelBank bank = kernel_bank({{5, 0.9}, {5, 0.9}});
    for (double v : bank.composite.pixels()) CHECK(v == 0.0);
}

TEST_CASE("kernel bank: a single kernel is rejected") {
    CHECK_THROWS_AS(kernel_bank({{3, 1.0}}), InvalidParam);
}

TEST_CASE("kernel bank: composite mass is near zero for equal-mass pairs") {
    const GammaKernelBank bank = kernel_bank({{1, 0.7}, {24, 1.0}});
    CHECK(std::abs(bank.composite.sum()) < 0.05);  // each kernel integrates to ~1
}

TEST_CASE("bank spec parsing") {
    const auto params = parse_bank_params("k1:1,mu1:0.7,k2:24,mu2:1.0");
    REQUIRE(params.size() == 2);
    CHECK(params[0].first == 1);
    CHECK(params[1].second == doctest::Approx(1.0));
    CHECK_THROWS_AS(parse_bank_params("k1:1,mu2:0.5"), InvalidParam);
}

TEST_CASE("convolve: impulse reproduces the flipped mask") {
    Image img(15, 15, 0.0);
    img.at(7, 7) = 1.0;
    Image mask(3, 3, 0.0);
    double v = 1.0;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) mask.at(i, j) = v++;
    const Image out = convolve(img, mask, ConvolvePath::Direct);
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            CHECK(out.at(7 + dx, 7 + dy) == mask.at(1 - dx, 1 - dy));
}

TEST_CASE("convolve: all-zero image stays zero") {
    Image img(10, 8, 0.0);
    const GammaKernelBank bank = kernel_bank({{1, 1.0}, {4, 1.0}}, 3);
    const Image out = convolve(img, bank.composite);
    for (double p : out.pixels()) CHECK(p == 0.0);
}

TEST_CASE("convolve: fft and direct paths agree with the loop oracle") {
    std::mt19937_64 rng(31);
    const Image img = test_helpers::random_image(16, 16, rng, -1.0, 1.0);
    const Image mask = test_helpers::random_image(5, 5, rng, -1.0, 1.0);
    const Image want = oracles::convolve_loops(img, mask);
    CHECK(test_helpers::max_abs_diff(convolve(img, mask, ConvolvePath::Direct), want) < 1e-12);
    CHECK(test_helpers::max_abs_diff(convolve(img, mask, ConvolvePath::Fft), want) < 1e-9);
}

TEST_CASE("convolve: linearity and shift-equivariance on interior pixels") {
    std::mt19937_64 rng(32);
    const Image a = test_helpers::random_image(20, 20, rng);
    const Image b = test_helpers::random_image(20, 20, rng);
    const Image mask = test_helpers::random_image(3, 3, rng, -0.5, 0.5);

    Image mix(20, 20);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x) mix.at(x, y) = 2.0 * a.at(x, y) - 3.0 * b.at(x, y);
    const Image ca = convolve(a, mask, ConvolvePath::Direct);
    const Image cb = convolve(b, mask, ConvolvePath::Direct);
    const Image cm = convolve(mix, mask, ConvolvePath::Direct);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x)
            CHECK(cm.at(x, y) ==
                  doctest::Approx(2.0 * ca.at(x, y) - 3.0 * cb.at(x, y)).epsilon(1e-12));

    // shift the input right by 2: interior outputs shift identically
    Image shifted(20, 20, 0.0);
    for (int y = 0; y < 20; ++y)
        for (int x = 2; x < 20; ++x) shifted.at(x, y) = a.at(x - 2, y);
    const Image cs = convolve(shifted, mask, ConvolvePath::Direct);
    for (int y = 2; y < 18; ++y)
        for (int x = 4; x < 18; ++x)
            CHECK(cs.at(x, y) == doctest::Approx(ca.at(x - 2, y)).epsilon(1e-12));
}

TEST_CASE("convolve: oversized masks are rejected") {
    Image img(4, 4, 0.0);
    Image mask(5, 5, 1.0);
    CHECK_THROWS_AS(convolve(img, mask), MaskTooLarge);
}

TEST_CASE("saliency_map: blank image gives a blank map") {
    const GammaKernelBank bank = kernel_bank({{1, 0.7}, {8, 1.0}});
    const Image map = saliency_map(Image(32, 32, 0.0), bank);
    for (double v : map.pixels()) CHECK(v == 0.0);
}

TEST_CASE("saliency_map: bright disk of the tuned radius peaks inside the disk") {
    SyntheticScene scene;
    scene.width = 96;
    scene.height = 72;
    SceneObject obj;
    obj.shape.family = ShapeFamily::Disk;
    obj.size = 15;  // canonical disk radius 0.6 -> ~9 px, near (k-1)/mu = 9
    obj.x = 48;
    obj.y = 36;
    obj.gain = 0.8;
    scene.objects.push_back(obj);
    const Image img = render_scene(scene, ScanMode::sparse(), 0);
    const GammaKernelBank bank = kernel_bank({{1, 0.7}, {10, 1.0}});
    const Image map = saliency_map(img, bank);
    double best = -1.0;
    int bx = 0, by = 0;
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            if (map.at(x, y) > best) {
                best = map.at(x, y);
                bx = x;
                by = y;
            }
    CHECK(std::hypot(bx - 48.0, by - 36.0) < 9.5);
}

TEST_CASE("saliency_map: two disk sizes both fire with a 2-scale bank") {
    SyntheticScene scene;
    scene.width = 128;
    scene.height = 64;
    for (const auto& [px, size] : {std::pair<double, double>{32.0, 7.0}, {96.0, 16.0}}) {
        SceneObject obj;
        obj.shape.family = ShapeFamily::Disk;
        obj.size = size;
        obj.x = px;
        obj.y = 32;
        obj.gain = 0.8;
        scene.objects.push_back(obj);
    }
    const Image img = render_scene(scene, ScanMode::sparse(), 0);
    const GammaKernelBank bank = kernel_bank({{1, 0.7}, {24, 1.0}});
    const Image map = saliency_map(img, bank);
    double left = 0.0, right = 0.0;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 128; ++x) {
            if (std::hypot(x - 32.0, y - 32.0) < 10) left = std::max(left, map.at(x, y));
            if (std::hypot(x - 96.0, y - 32.0) < 12) right = std::max(right, map.at(x, y));
        }
    CHECK(left > 0.5);
    CHECK(right > 0.5);
}

TEST_CASE("binarize trivial thresholds") {
    Image map(2, 1);
    map.at(0, 0) = 0.2;
    map.at(1, 0) = 0.7;
    CHECK(binarize(map, 0.0).count() == 2);
    CHECK(binarize(map, 0.7).count() == 1);   // inclusive comparison
    CHECK(binarize(map, 0.71).count() == 0);  // threshold above max
    const Mask half = binarize(map, 0.5);
    CHECK_FALSE(half.get(0, 0));
    CHECK(half.get(1, 0));
}

TEST_CASE("adaptive_threshold") {
    CHECK(adaptive_threshold(Image(4, 4, 0.3), 2.0) == doctest::Approx(0.6));
    Image two(2, 1);
    two.at(0, 0) = 0.0;
    two.at(1, 0) = 1.0;
    CHECK(adaptive_threshold(two, 3.0) == doctest::Approx(1.5));
    std::mt19937_64 rng(33);
    const Image r = test_helpers::random_image(9, 7, rng);
    double mean = 0.0;
    for (double v : r.pixels()) mean += v;
    mean /= static_cast<double>(r.size());
    CHECK(adaptive_threshold(r, 4.0) == doctest::Approx(4.0 * mean).epsilon(1e-12));
}

TEST_CASE("extract_boxes: empty mask gives no boxes") {
    CHECK(extract_boxes(Image(8, 8, 0.0), Mask(8, 8), 1).empty());
}

TEST_CASE("extract_boxes: filled block gives its tight box") {
    Image map(16, 16, 0.0);
    Mask mask(16, 16);
    for (int y = 5; y < 8; ++y)
        for (int x = 5; x < 8; ++x) {
            mask.set(x, y, true);
            map.at(x, y) = 0.5;
        }
    const auto boxes = extract_boxes(map, mask, 1);
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].x == 5);
    CHECK(boxes[0].y == 5);
    CHECK(boxes[0].w == 3);
    CHECK(boxes[0].h == 3);
    CHECK(boxes[0].score == doctest::Approx(0.5));
}

TEST_CASE("extract_boxes: diagonal neighbors form one component") {
    Image map(6, 6, 0.0);
    Mask mask(6, 6);
    mask.set(2, 2, true);
    mask.set(3, 3, true);
    CHECK(extract_boxes(map, mask, 1).size() == 1);
}

TEST_CASE("extract_boxes: min_area filter and score ordering") {
    Image map(20, 10, 0.0);
    Mask mask(20, 10);
    for (int x = 1; x < 4; ++x)
        for (int y = 1; y < 4; ++y) {
            mask.set(x, y, true);
            map.at(x, y) = 0.2;
        }
    for (int x = 10; x < 14; ++x)
        for (int y = 2; y < 6; ++y) {
            mask.set(x, y, true);
            map.at(x, y) = 0.9;
        }
    mask.set(18, 8, true);  // area 1, dropped at min_area 2
    map.at(18, 8) = 1.0;
    const auto boxes = extract_boxes(map, mask, 2);
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0].score == doctest::Approx(0.9));
    CHECK(boxes[1].score == doctest::Approx(0.2));
}

TEST_CASE("extract_boxes: every mask pixel is covered by exactly one counted component") {
    std::mt19937_64 rng(34);
    const Mask mask = test_helpers::random_mask(24, 18, rng, 0.35);
    const Image map = test_helpers::random_image(24, 18, rng);
    const auto boxes = extract_boxes(map, mask, 1);
    // every true pixel lies inside at least one box
    for (int y = 0; y < 18; ++y)
        for (int x = 0; x < 24; ++x)
            if (mask.get(x, y)) {
                bool covered = false;
                for (const auto& b : boxes)
                    if (x >= b.x && x < b.x + b.w && y >= b.y && y < b.y + b.h) covered = true;
                CHECK(covered);
            }
    // box count matches an independent flood fill
    std::vector<std::vector<bool>> seen(18, std::vector<bool>(24, false));
    int components = 0;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < 18; ++y)
        for (int x = 0; x < 24; ++x) {
            if (!mask.get(x, y) || seen[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]) continue;
            ++components;
            stack.assign(1, {x, y});
            seen[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = true;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= 24 || ny >= 18) continue;
                        if (!mask.get(nx, ny) || seen[static_cast<std::size_t>(ny)][static_cast<std::size_t>(nx)]) continue;
                        seen[static_cast<std::size_t>(ny)][static_cast<std::size_t>(nx)] = true;
                        stack.emplace_back(nx, ny);
                    }
            }
        }
    CHECK(static_cast<int>(boxes.size()) == components);
}

TEST_CASE("saliency_map offset invariance on interior pixels") {
    // adding a constant c changes the raw response by c * mass(composite);
    // with near-zero-mass banks the map is offset-stable before normalization
    std::mt19937_64 rng(35);
    const Image img = test_helpers::random_image(40, 40, rng);
    Image offset_img = img;
    for (double& v : offset_img.pixels()) v += 0.25;
    const GammaKernelBank bank = kernel_bank({{1, 0.7}, {10, 1.0}});
    const Image a = convolve(img, bank.composite, ConvolvePath::Direct);
    const Image b = convolve(offset_img, bank.composite, ConvolvePath::Direct);
    const double mass = bank.composite.sum();
    const int r = bank.radius;
    for (int y = r; y < 40 - r; ++y)
        for (int x = r; x < 40 - r; ++x)
            CHECK(b.at(x, y) - a.at(x, y) == doctest::Approx(0.25 * mass).epsilon(1e-9));
}
