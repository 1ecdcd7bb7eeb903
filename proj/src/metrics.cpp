#include "umsli/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "umsli/image_io.hpp"
#include "umsli/saliency.hpp"

namespace umsli {

std::vector<PixelCounts> threshold_counts(const Image& map, const Mask& gt) {
    if (!gt.same_shape(map)) throw DimMismatch("map and ground truth dimensions differ");
    // histogram pixels by quantized map value, split by gt label; a suffix
    // sum then yields counts for every threshold in one pass
    std::array<long, kThresholdCount + 1> pos_hist{}, neg_hist{};
    const int w = map.width(), h = map.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = map.at(x, y);
            // bin b: smallest threshold index with t > v, i.e. v >= i/255 for i <= b-1
            int b = static_cast<int>(std::floor(v * 255.0)) + 1;
            b = std::clamp(b, 0, kThresholdCount);
            if (v < 0.0) b = 0;
            if (gt.get(x, y))
                ++pos_hist[static_cast<std::size_t>(b)];
            else
                ++neg_hist[static_cast<std::size_t>(b)];
        }
    }
    const long total_pos_all = [&] {
        long s = 0;
        for (long v : pos_hist) s += v;
        return s;
    }();
    const long total_neg_all = [&] {
        long s = 0;
        for (long v : neg_hist) s += v;
        return s;
    }();
    std::vector<PixelCounts> counts(kThresholdCount);
    // detected at threshold i/255 <=> bin > i; bin 0 (negative values) never
    long pos_ge = total_pos_all - pos_hist[0], neg_ge = total_neg_all - neg_hist[0];
    for (int i = 0; i < kThresholdCount; ++i) {
        if (i > 0) {
            pos_ge -= pos_hist[static_cast<std::size_t>(i)];
            neg_ge -= neg_hist[static_cast<std::size_t>(i)];
        }
        counts[static_cast<std::size_t>(i)].tp = pos_ge;
        counts[static_cast<std::size_t>(i)].fn = total_pos_all - pos_ge;
        counts[static_cast<std::size_t>(i)].fp = neg_ge;
        counts[static_cast<std::size_t>(i)].tn = total_neg_all - neg_ge;
    }
    return counts;
}

PrRocCurves curves_from_counts(const std::vector<PixelCounts>& counts) {
    PrRocCurves out;
    out.points.reserve(counts.size());
    bool any_pos = false;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const PixelCounts& c = counts[i];
        CurvePoint p;
        p.threshold = static_cast<double>(i) / (kThresholdCount - 1);
        const long det = c.tp + c.fp;
        p.precision = det == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(det);
        const long pos = c.tp + c.fn;
        const long neg = c.fp + c.tn;
        if (pos > 0) any_pos = true;
        p.recall = pos == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(pos);
        p.tpr = p.recall;
        p.fpr = neg == 0 ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(neg);
        out.points.push_back(p);
    }
    out.empty_ground_truth = !any_pos;
    return out;
}

PrRocCurves pr_roc(const Image& map, const Mask& gt) {
    return curves_from_counts(threshold_counts(map, gt));
}

double auc(const PrRocCurves& curves) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curves.points.size() + 2);
    pts.emplace_back(0.0, 0.0);
    pts.emplace_back(1.0, 1.0);
    for (const auto& p : curves.points) pts.emplace_back(p.fpr, p.tpr);
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        area += 0.5 * (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second);
    return area;
}

double f_beta(double precision, double recall, double beta_sq) {
    const double denom = beta_sq * precision + recall;
    if (denom <= 0.0) return 0.0;
    return (1.0 + beta_sq) * precision * recall / denom;
}

double f_measure(const Image& map, const Mask& gt, int alpha_lo, int alpha_hi, double beta_sq) {
    if (!gt.same_shape(map)) throw DimMismatch("map and ground truth dimensions differ");
    if (alpha_hi < alpha_lo) throw InvalidParam("alpha range is empty");
    const double mean = map.mean();
    const double peak = map.max();
    double total = 0.0;
    for (int alpha = alpha_lo; alpha <= alpha_hi; ++alpha) {
        const double t = alpha * mean;
        if (t > peak) continue;  // contributes F = 0
        const Mask bin = binarize(map, t);
        long tp = 0, fp = 0, fn = 0;
        for (int y = 0; y < map.height(); ++y) {
            for (int x = 0; x < map.width(); ++x) {
                const bool d = bin.get(x, y);
                const bool g = gt.get(x, y);
                tp += d && g;
                fp += d && !g;
                fn += !d && g;
            }
        }
        const double precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
        const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
        total += f_beta(precision, recall, beta_sq);
    }
    return total / (alpha_hi - alpha_lo + 1);
}

namespace {

std::map<std::string, std::filesystem::path> stem_index(const std::filesystem::path& dir) {
    std::map<std::string, std::filesystem::path> out;
    if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext != ".png" && ext != ".pgm" && ext != ".PNG" && ext != ".PGM") continue;
        out[entry.path().stem().string()] = entry.path();
    }
    return out;
}

}  // namespace

EvalReport evaluate_corpus(const std::filesystem::path& maps_dir,
                           const std::filesystem::path& gt_dir, const CorpusOptions& options) {
    const auto maps = stem_index(maps_dir);
    const auto gts = stem_index(gt_dir);
    if (maps.empty()) throw IoError("no map images found in " + maps_dir.string());

    EvalReport report;
    std::vector<PixelCounts> pooled(kThresholdCount);
    double f_total = 0.0, auc_total = 0.0, time_total = 0.0;

    for (const auto& [stem, map_path] : maps) {
        const auto git = gts.find(stem);
        if (git == gts.end()) {
            report.skipped.push_back(stem + ": missing ground-truth pair");
            continue;
        }
        Image map;
        Mask gt;
        try {
            map = load_image(map_path);
            gt = load_mask(git->second);
        } catch (const Error& e) {
            report.skipped.push_back(stem + ": " + e.what());
            continue;
        }
        if (!gt.same_shape(map)) {
            report.skipped.push_back(stem + ": dimension mismatch");
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto counts = threshold_counts(map, gt);
        f_total += f_measure(map, gt, options.alpha_lo, options.alpha_hi, options.beta_sq);
        const auto t1 = std::chrono::steady_clock::now();
        time_total += std::chrono::duration<double>(t1 - t0).count();
        for (int i = 0; i < kThresholdCount; ++i) pooled[static_cast<std::size_t>(i)] += counts[static_cast<std::size_t>(i)];
        if (options.macro) auc_total += auc(curves_from_counts(counts));
        ++report.images;
    }
    if (report.images == 0) throw IoError("no evaluable map/ground-truth pairs");

    report.curves = curves_from_counts(pooled);
    report.auc = options.macro ? auc_total / report.images : auc(report.curves);
    report.f_measure = f_total / report.images;
    report.mean_seconds = time_total / report.images;
    return report;
}

void write_curves_csv(const PrRocCurves& curves, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "threshold,precision,recall,tpr,fpr\n";
    char buf[160];
    for (const auto& p : curves.points) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g\n", p.threshold, p.precision,
                      p.recall, p.tpr, p.fpr);
        out << buf;
    }
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "images,f_measure,auc,mean_seconds,skipped\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%zu\n", report.images, report.f_measure,
                  report.auc, report.mean_seconds, report.skipped.size());
    out << buf;
}

}  // namespace umsli
