// End-to-end acceptance suite. Each check prints one PASS/FAIL line with its
// wall time; the process exits nonzero if any check fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "umsli/benchmark.hpp"
#include "umsli/classify.hpp"
#include "umsli/convolve.hpp"
#include "umsli/dtg.hpp"
#include "umsli/gamma.hpp"
#include "umsli/hu.hpp"
#include "umsli/image_io.hpp"
#include "umsli/metrics.hpp"
#include "umsli/morphology.hpp"
#include "umsli/pipeline.hpp"
#include "umsli/registration.hpp"
#include "umsli/saliency.hpp"
#include "umsli/scene.hpp"
#include "umsli/silhouette.hpp"

using namespace umsli;
namespace fs = std::filesystem;

namespace {

int g_checks_failed = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        std::printf("    check failed: %s\n", what.c_str());
        ++g_checks_failed;
    }
}

Image random_image(int w, int h, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Image img(w, h);
    for (double& v : img.pixels()) v = u(rng);
    return img;
}

// ---------------------------------------------------------------------------
// 1. Gamma-kernel geometry: radial argmax at (k-1)/mu within 1 px
// ---------------------------------------------------------------------------
bool criterion_gamma_geometry() {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> pick_k(2, 30);
    std::uniform_real_distribution<double> pick_mu(0.2, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = pick_k(rng);
        const double mu = pick_mu(rng);
        const GammaKernel g = gamma_kernel(k, mu, suggest_radius(k, mu));
        double best = -1.0, best_r = 0.0;
        for (int n2 = -g.radius; n2 <= g.radius; ++n2)
            for (int n1 = -g.radius; n1 <= g.radius; ++n1) {
                const double v = g.at_offset(n1, n2);
                if (v > best) {
                    best = v;
                    best_r = std::hypot(n1, n2);
                }
            }
        const double want = (k - 1) / mu;
        expect(std::abs(best_r - want) <= 1.0,
               "k=" + std::to_string(k) + " mu=" + std::to_string(mu) + " argmax " +
                   std::to_string(best_r) + " vs " + std::to_string(want));
    }
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 2. Convolution: fast path vs direct nested-loop oracle, < 1e-9
// ---------------------------------------------------------------------------
bool criterion_convolution_oracle() {
    std::mt19937_64 rng(102);
    std::uniform_int_distribution<int> size(16, 64);
    std::uniform_int_distribution<int> mask_half(1, 7);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = size(rng), h = size(rng);
        const int mr = mask_half(rng);
        const Image img = random_image(w, h, rng, -1.0, 1.0);
        const Image mask = random_image(2 * mr + 1, 2 * mr + 1, rng, -1.0, 1.0);
        const Image fast = convolve(img, mask, ConvolvePath::Fft);
        const Image want = oracles::convolve_loops(img, mask);
        double diff = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) diff = std::max(diff, std::abs(fast.at(x, y) - want.at(x, y)));
        expect(diff < 1e-9, "fft/direct diff " + std::to_string(diff));
    }
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 3. Morphology laws + illumination-correction contrast gain
// ---------------------------------------------------------------------------
bool criterion_morphology() {
    std::mt19937_64 rng(103);
    std::uniform_int_distribution<int> size(9, 33);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = size(rng), h = size(rng);
        const Image img = random_image(w, h, rng);
        const StructuringElement se =
            trial % 2 ? StructuringElement::disk(1 + trial % 3) : StructuringElement::square(3);
        const Image once = open(img, se);
        bool anti = true, idem = true;
        const Image twice = open(once, se);
        for (int y = 0; y < h && (anti || idem); ++y)
            for (int x = 0; x < w; ++x) {
                if (once.at(x, y) > img.at(x, y)) anti = false;
                if (twice.at(x, y) != once.at(x, y)) idem = false;
            }
        expect(anti, "anti-extensivity violated");
        expect(idem, "idempotence violated");
    }

    // synthetic gradient + turtle: oracle-measured contrast at least doubles
    SyntheticScene scene;
    scene.width = 128;
    scene.height = 96;
    scene.seed = 8;
    scene.noise_sigma = 0.01;
    scene.gradient.base = 0.3;
    scene.gradient.gx = 0.45;
    scene.gradient.gy = 0.2;
    SceneObject obj;
    obj.shape.family = ShapeFamily::Turtle;
    obj.size = 12;
    obj.x = 42;
    obj.y = 36;
    obj.gain = 0.3;
    scene.objects.push_back(obj);
    const Image raw = render_scene(scene, ScanMode::sparse(), 0);
    const Mask gt = render_ground_truth(scene, ScanMode::sparse(), 0);
    const EnhancedImage e = illumination_correct(raw, default_se(scene.width, scene.height));
    const double c_raw = oracles::region_contrast(raw, gt);
    const double c_corr = oracles::region_contrast(e.signed_diff, gt);
    expect(c_raw > 0.0, "raw contrast not positive");
    expect(c_corr >= 2.0 * c_raw, "contrast gain " + std::to_string(c_corr / c_raw) + " < 2");
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 4. Metric harness: exact AUC cases, rank-oracle agreement, F hand case,
//    and AUC >= 0.9 for the gamma detector over 50 synthetic scenes
// ---------------------------------------------------------------------------
bool criterion_metrics() {
    {
        Image map(8, 8, 0.0);
        Mask gt(8, 8);
        for (int x = 0; x < 8; ++x) {
            map.at(x, 3) = 1.0;
            gt.set(x, 3, true);
        }
        expect(auc(pr_roc(map, gt)) == 1.0, "perfect AUC not exactly 1");
        Mask gt2(8, 8);
        gt2.set(2, 2, true);
        expect(auc(pr_roc(Image(8, 8, 0.7), gt2)) == 0.5, "constant AUC not exactly 0.5");
    }
    {
        std::mt19937_64 rng(104);
        std::uniform_int_distribution<int> level(0, 255);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            Image map(16, 12);
            for (double& v : map.pixels()) v = level(rng) / 255.0;
            Mask gt(16, 12);
            bool any = false;
            for (int y = 0; y < 12; ++y)
                for (int x = 0; x < 16; ++x) {
                    const bool b = u(rng) < 0.3;
                    gt.set(x, y, b);
                    any |= b;
                }
            if (!any) gt.set(0, 0, true);
            const double got = auc(pr_roc(map, gt));
            const double want = oracles::rank_auc(map, gt);
            expect(std::abs(got - want) < 1e-6,
                   "rank AUC diff " + std::to_string(std::abs(got - want)));
        }
    }
    expect(std::abs(f_beta(1.0, 0.5) - 0.8125) <= 1e-15, "F(1, 0.5) != 0.8125");

    // end-to-end synthetic corpus: correct, detect, pool, AUC >= 0.9
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const GammaKernelBank bank = kernel_bank({{1, 0.7}, {24, 1.0}});
    std::vector<PixelCounts> pooled(kThresholdCount);
    for (int i = 0; i < 50; ++i) {
        SyntheticScene scene;
        scene.width = 160;
        scene.height = 120;
        scene.seed = 500 + static_cast<std::uint64_t>(i);
        scene.noise_sigma = 0.015 + 0.02 * unit(rng);
        scene.gradient.base = 0.2 + 0.15 * unit(rng);
        scene.gradient.gx = 0.4 * (unit(rng) - 0.5);
        scene.gradient.gy = 0.4 * (unit(rng) - 0.5);
        scene.gradient.gxy = 0.2 * (unit(rng) - 0.5);
        SceneObject obj;
        const ShapeFamily fams[3] = {ShapeFamily::Turtle, ShapeFamily::Fish, ShapeFamily::Ray};
        obj.shape.family = fams[i % 3];
        obj.shape.rotation = unit(rng) * 6.28;
        obj.size = 8.0 + 8.0 * unit(rng);
        obj.x = 30 + unit(rng) * 100;
        obj.y = 25 + unit(rng) * 70;
        obj.gain = 0.35 + 0.25 * unit(rng);
        scene.objects.push_back(obj);

        const Image raw = render_scene(scene, ScanMode::sparse(), 0);
        const Mask gt = render_ground_truth(scene, ScanMode::sparse(), 0);
        const EnhancedImage e = illumination_correct(raw, default_se(scene.width, scene.height));
        const Image map = saliency_map(e.signed_diff, bank);
        const auto counts = threshold_counts(map, gt);
        for (int t = 0; t < kThresholdCount; ++t) pooled[static_cast<std::size_t>(t)] += counts[static_cast<std::size_t>(t)];
    }
    const double corpus_auc = auc(curves_from_counts(pooled));
    std::printf("    corpus AUC = %.4f\n", corpus_auc);
    expect(corpus_auc >= 0.9, "corpus AUC " + std::to_string(corpus_auc) + " < 0.9");
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 5. MCC alignment: recovery of known affine perturbations + monotone trace
// ---------------------------------------------------------------------------
bool criterion_mcc() {
    std::mt19937_64 rng(106);
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    std::uniform_real_distribution<double> perturb(-0.15, 0.15);
    std::normal_distribution<double> noise(0.0, 0.02);

    int done = 0;
    while (done < 20) {
        Affine2 truth;
        truth.m00 = 1.0 + perturb(rng);
        truth.m01 = perturb(rng);
        truth.m10 = perturb(rng);
        truth.m11 = 1.0 + perturb(rng);
        truth.tx = 0.1 * perturb(rng) / 0.15;
        truth.ty = 0.1 * perturb(rng) / 0.15;
        // condition number of the linear part via singular values
        const double a = truth.m00, b = truth.m01, c = truth.m10, d = truth.m11;
        const double t1 = a * a + b * b + c * c + d * d;
        const double t2 = std::sqrt(std::max(0.0, t1 * t1 - 4.0 * std::pow(a * d - b * c, 2)));
        const double smax = std::sqrt((t1 + t2) / 2.0), smin = std::sqrt(std::max(1e-30, (t1 - t2) / 2.0));
        if (smax / smin >= 5.0) continue;
        ++done;

        PointSet x(64);
        for (auto& p : x) p = {pos(rng), pos(rng)};
        PointSet y = apply_affine(truth, x);
        for (auto& p : y) {
            p.x += noise(rng);
            p.y += noise(rng);
        }
        const AffineAlignment align = mcc_align(x, y);
        const PointSet got = apply_affine(align.transform, x);
        double rms = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const Point2 want = truth.apply(x[i]);
            rms += std::pow(got[i].x - want.x, 2) + std::pow(got[i].y - want.y, 2);
        }
        rms = std::sqrt(rms / static_cast<double>(x.size()));
        expect(rms < 1e-2, "alignment RMS " + std::to_string(rms));

        for (std::size_t s = 0; s < align.stage_starts.size(); ++s) {
            const std::size_t lo = align.stage_starts[s];
            const std::size_t hi =
                s + 1 < align.stage_starts.size() ? align.stage_starts[s + 1] : align.trace.size();
            for (std::size_t i = lo + 1; i < hi; ++i)
                expect(align.trace[i] + 1e-12 >= align.trace[i - 1],
                       "correntropy decreased within a stage");
        }
    }
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 6. Classifier benchmark: accuracy, Eq-8 == Eq-6 under equal correntropy,
//    and the DTG >= k-means >= random selection ordering
// ---------------------------------------------------------------------------
double selection_accuracy(const TemplateLibrary& library,
                          const std::vector<std::vector<int>>& keep,
                          const std::vector<LabeledQuery>& queries) {
    return evaluate_selection(library, keep, queries).accuracy();
}

bool criterion_classifier() {
    BenchmarkSpec spec;
    const Benchmark bench = make_benchmark(spec);

    // full-library accuracy with MCC alignment
    ClassifyOptions opts;
    std::vector<std::vector<int>> full(3);
    for (int c = 0; c < 3; ++c)
        for (int t = 0; t < spec.templates_per_class; ++t) full[static_cast<std::size_t>(c)].push_back(t);
    int correct = 0;
    std::vector<ClassScore> full_scores;
    full_scores.reserve(bench.queries.size());
    for (const auto& q : bench.queries) {
        const ClassScore s = classify(q.mask, bench.library, opts);
        full_scores.push_back(s);
        if (s.predicted == q.label) ++correct;
    }
    const double full_acc = static_cast<double>(correct) / static_cast<double>(bench.queries.size());
    std::printf("    full-library accuracy = %.3f\n", full_acc);
    expect(full_acc >= 0.90, "full-library accuracy " + std::to_string(full_acc) + " < 0.90");

    // with all correntropies forced equal, Eq-8 ranking equals Eq-6 ranking
    ClassifyOptions no_align;
    no_align.mcc.sigma_schedule.clear();
    for (const auto& q : bench.queries) {
        const ClassScore s = classify(q.mask, bench.library, no_align);
        expect(s.predicted == s.predicted_descriptor, "Eq-8/Eq-6 argmin mismatch");
    }

    // selection ordering over 10 seeds
    DtgTrainOptions train_opts;
    train_opts.steps = 2000;
    train_opts.top_n = 10;
    DivergenceOptions div_opts;

    // k-means is deterministic given its seed; evaluate once
    std::vector<std::vector<int>> kmeans_keep(3);
    for (int c = 0; c < 3; ++c) {
        const auto sim = hu_similarity_matrix(bench.states[static_cast<std::size_t>(c)]);
        kmeans_keep[static_cast<std::size_t>(c)] = kmeans_select(sim, 10, 99).chosen;
    }
    const double acc_kmeans = selection_accuracy(bench.library, kmeans_keep, bench.queries);

    int dtg_beats_random = 0, random_ties = 0, dtg_beats_kmeans = 0;
    double sum_dtg = 0.0, sum_random = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
        std::vector<TransitionModel> models;
        models.reserve(3);
        for (int c = 0; c < 3; ++c)
            models.push_back(build_transition_model(benchmark_mdp(bench, c), 5000,
                                                    1000 + static_cast<std::uint64_t>(seed) * 10 + static_cast<std::uint64_t>(c)));
        std::vector<std::vector<int>> dtg_keep(3), random_keep(3);
        for (int c = 0; c < 3; ++c) {
            std::vector<TransitionModel> others;
            for (int o = 0; o < 3; ++o)
                if (o != c) others.push_back(models[static_cast<std::size_t>(o)]);
            DtgTrainOptions to = train_opts;
            to.seed = 2000 + static_cast<std::uint64_t>(seed) * 10 + static_cast<std::uint64_t>(c);
            const DtgTrainResult r = train_dtg(benchmark_mdp(bench, c), models[static_cast<std::size_t>(c)],
                                               others, to, div_opts);
            dtg_keep[static_cast<std::size_t>(c)] = r.selection.chosen;
            random_keep[static_cast<std::size_t>(c)] =
                random_select(spec.templates_per_class, 10,
                              3000 + static_cast<std::uint64_t>(seed) * 10 + static_cast<std::uint64_t>(c))
                    .chosen;
        }
        const double acc_dtg = selection_accuracy(bench.library, dtg_keep, bench.queries);
        const double acc_random = selection_accuracy(bench.library, random_keep, bench.queries);
        sum_dtg += acc_dtg;
        sum_random += acc_random;
        if (acc_dtg > acc_random)
            ++dtg_beats_random;
        else if (acc_dtg == acc_random)
            ++random_ties;
        if (acc_dtg >= acc_kmeans) ++dtg_beats_kmeans;
        std::printf("    seed %d: dtg %.3f random %.3f kmeans %.3f\n", seed, acc_dtg, acc_random,
                    acc_kmeans);
    }
    expect(sum_dtg / 10.0 >= sum_random / 10.0, "mean accuracy ordering violated");
    const int trials = 10 - random_ties;
    const double p = oracles::sign_test_p(dtg_beats_random, trials);
    std::printf("    dtg > random in %d/%d, sign test p = %.4f; dtg >= kmeans in %d/10\n",
                dtg_beats_random, trials, p, dtg_beats_kmeans);
    expect(p < 0.05, "sign test p " + std::to_string(p) + " >= 0.05");
    expect(dtg_beats_kmeans >= 6, "dtg >= kmeans in only " + std::to_string(dtg_beats_kmeans) + "/10");
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 7. DTG value correctness on the 3-state toy vs brute-force Eq-9 values
// ---------------------------------------------------------------------------
bool criterion_dtg_toy() {
    TemplateMdp mdp;
    for (int i = 0; i < 3; ++i) {
        HuState h;
        h.values[0] = 6.0 * i;
        mdp.states.push_back(h);
    }
    mdp.actions = {1, 2};
    const std::vector<std::vector<double>> div = {{0.2, 1.0}, {0.0, 0.6}, {0.9, 0.1}};
    const std::vector<std::vector<int>> next = {{1, 2}, {2, 0}, {0, 1}};

    for (double gamma : {0.0, 0.5, 0.9}) {
        DtgTrainOptions opts;
        opts.gamma = gamma;
        opts.steps = 4000;
        opts.kernel_sigma = 0.2;
        opts.top_n = 1;
        opts.seed = 31;
        const DtgTrainResult result = train_dtg_fn(
            mdp, [&](int s, int a) { return div[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]; }, opts);
        const auto want = oracles::value_iteration(next, div, gamma);
        for (int s = 0; s < 3; ++s)
            for (int a = 0; a < 2; ++a) {
                const double got = result.dtg.value(mdp.states[static_cast<std::size_t>(s)], a);
                const double w = want[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
                const double rel = std::abs(got - w) / std::max(std::abs(w), 1e-9);
                expect(rel <= 0.15 || std::abs(got - w) <= 0.02,
                       "gamma " + std::to_string(gamma) + " state " + std::to_string(s) +
                           " action " + std::to_string(a) + " rel err " + std::to_string(rel));
            }
    }
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 8. Hu invariance on 20 synthetic silhouettes
// ---------------------------------------------------------------------------
bool criterion_hu() {
    std::mt19937_64 rng(108);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ShapeFamily fams[4] = {ShapeFamily::Turtle, ShapeFamily::Fish, ShapeFamily::Ray,
                                 ShapeFamily::Triangle};
    for (int i = 0; i < 20; ++i) {
        SilhouetteParams p;
        p.family = fams[i % 4];
        p.rotation = 0.15 + unit(rng);  // asymmetric pose: hu7 well away from 0
        p.stretch = 1.05 + 0.2 * unit(rng);
        p.morph = 0.3 * unit(rng);

        // translation: exact to 1e-9
        const Mask base = render_silhouette(p, 128);
        Mask canvas(192, 192), moved(192, 192);
        const int dx = 3 + static_cast<int>(unit(rng) * 40), dy = 5 + static_cast<int>(unit(rng) * 30);
        for (int y = 0; y < 128; ++y)
            for (int x = 0; x < 128; ++x)
                if (base.get(x, y)) {
                    canvas.set(x + 4, y + 4, true);
                    moved.set(x + dx, y + dy, true);
                }
        const HuState a = hu_moments(canvas);
        const HuState b = hu_moments(moved);
        for (int j = 0; j < 7; ++j)
            expect(std::abs(a.values[static_cast<std::size_t>(j)] - b.values[static_cast<std::size_t>(j)]) < 1e-9,
                   "translation invariance");

        // scale: within 1e-3 under 2x rendering
        const HuState s1 = hu_moments(render_silhouette(p, 192));
        const HuState s2 = hu_moments(render_silhouette(p, 384));
        for (int j = 0; j < 7; ++j)
            expect(std::abs(s1.values[static_cast<std::size_t>(j)] - s2.values[static_cast<std::size_t>(j)]) < 1e-3,
                   "scale invariance hu" + std::to_string(j + 1) + " diff " +
                       std::to_string(std::abs(s1.values[static_cast<std::size_t>(j)] -
                                               s2.values[static_cast<std::size_t>(j)])));

        // mirroring: first six match, the seventh flips sign
        Mask mirror(192, 192);
        for (int y = 0; y < 192; ++y)
            for (int x = 0; x < 192; ++x)
                if (canvas.get(x, y)) mirror.set(191 - x, y, true);
        const auto ra = hu_moments_raw(canvas);
        const auto rb = hu_moments_raw(mirror);
        for (int j = 0; j < 6; ++j)
            expect(std::abs(ra[static_cast<std::size_t>(j)] - rb[static_cast<std::size_t>(j)]) <=
                       1e-9 * std::max(1.0, std::abs(ra[static_cast<std::size_t>(j)])),
                   "mirror invariance hu" + std::to_string(j + 1));
        expect(std::abs(ra[6] + rb[6]) <= 1e-9 * std::max(1.0, std::abs(ra[6])), "hu7 sign flip");
    }
    return g_checks_failed == 0;
}

// ---------------------------------------------------------------------------
// 9. Pipeline determinism + mode-switch region coverage over 100 episodes
// ---------------------------------------------------------------------------
bool criterion_pipeline() {
    // byte-identical golden run
    PipelineConfig config;
    config.se_spec = "disk:12";
    config.score_threshold = 0.25;
    config.scan_latency = 2;
    config.dense_margin = 12;

    SyntheticScene golden;
    golden.width = 120;
    golden.height = 90;
    golden.seed = 77;
    golden.noise_sigma = 0.01;
    golden.gradient.base = 0.2;
    golden.gradient.gx = 0.3;
    SceneObject obj;
    obj.shape.family = ShapeFamily::Turtle;
    obj.size = 11;
    obj.x = 52;
    obj.y = 44;
    obj.vx = 1.0;
    obj.vy = 0.5;
    obj.gain = 0.6;
    golden.objects.push_back(obj);

    const auto dir_a = fs::temp_directory_path() / "umsli_acceptance_golden_a";
    const auto dir_b = fs::temp_directory_path() / "umsli_acceptance_golden_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    {
        SceneFrameSource src(golden, 8);
        run_batch(config, src, dir_a);
    }
    {
        SceneFrameSource src(golden, 8);
        run_batch(config, src, dir_b);
    }
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        ++files;
        std::ifstream fa(entry.path(), std::ios::binary);
        std::ifstream fb(dir_b / entry.path().filename(), std::ios::binary);
        std::ostringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        expect(fb.good(), "missing artifact " + entry.path().filename().string());
        expect(sa.str() == sb.str(), "artifact differs: " + entry.path().filename().string());
    }
    expect(files >= 4, "golden run produced too few artifacts");

    // seeded episodes: the dense region must contain the true centroid
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int triggered = 0, covered = 0;
    for (int ep = 0; ep < 100; ++ep) {
        SyntheticScene scene;
        scene.width = 96;
        scene.height = 72;
        scene.seed = 9000 + static_cast<std::uint64_t>(ep);
        scene.noise_sigma = 0.01;
        scene.gradient.base = 0.2;
        scene.gradient.gx = 0.3 * (unit(rng) - 0.5);
        scene.gradient.gy = 0.3 * (unit(rng) - 0.5);
        SceneObject o;
        const ShapeFamily fams[3] = {ShapeFamily::Turtle, ShapeFamily::Fish, ShapeFamily::Ray};
        o.shape.family = fams[ep % 3];
        o.shape.rotation = unit(rng) * 6.28;
        o.size = 9.0 + 3.0 * unit(rng);
        o.x = 30 + 36 * unit(rng);
        o.y = 24 + 24 * unit(rng);
        o.vx = 3.0 * (unit(rng) - 0.5);
        o.vy = 3.0 * (unit(rng) - 0.5);
        o.gain = 0.6;
        scene.objects.push_back(o);

        PipelineConfig cfg = config;
        cfg.se_spec = "disk:10";
        SceneFrameSource src(scene, 12);
        Pipeline pipeline(cfg);
        PipelineState state;
        bool done = false;
        for (int guard = 0; guard < 30 && !done; ++guard) {
            if ((state.stage == Stage::SparseScan || state.stage == Stage::DenseScan) &&
                state.frame >= src.frame_count())
                break;
            pipeline.step(state, src);
            if (state.stage == Stage::DenseScan && state.dense_region) {
                ++triggered;
                const auto& r = *state.dense_region;
                if (r.contains(o.cx(state.frame), o.cy(state.frame))) ++covered;
                done = true;
            }
        }
    }
    std::printf("    triggered %d/100 episodes, centroid covered in %d\n", triggered, covered);
    expect(triggered >= 95, "trigger rate too low");
    expect(covered >= 95, "dense region coverage " + std::to_string(covered) + "/100 < 95");
    return g_checks_failed == 0;
}

struct Criterion {
    const char* name;
    std::function<bool()> fn;
    double budget_seconds;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"gamma-kernel geometry", criterion_gamma_geometry, 1.0},
        {"convolution oracle equivalence", criterion_convolution_oracle, 5.0},
        {"morphology laws + illumination contrast", criterion_morphology, 10.0},
        {"metric harness + synthetic corpus AUC", criterion_metrics, 60.0},
        {"mcc alignment recovery", criterion_mcc, 30.0},
        {"classifier benchmark + selection ordering", criterion_classifier, 600.0},
        {"dtg toy-MDP value correctness", criterion_dtg_toy, 30.0},
        {"hu moment invariance", criterion_hu, 5.0},
        {"pipeline determinism + mode switching", criterion_pipeline, 120.0},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        g_checks_failed = 0;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string error;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (seconds > c.budget_seconds) {
            ok = false;
            error = "exceeded " + std::to_string(c.budget_seconds) + "s budget";
        }
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        std::printf("[%s] %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.name, seconds);
        if (!ok) ++failed;
    }
    if (failed) std::printf("%d criteria FAILED\n", failed);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failed == 0 ? 0 : 1;
}
