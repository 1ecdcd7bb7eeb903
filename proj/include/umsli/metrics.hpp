#ifndef UMSLI_METRICS_HPP
#define UMSLI_METRICS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "umsli/core.hpp"

namespace umsli {

struct CurvePoint {
    double threshold = 0.0;
    double precision = 1.0;
    double recall = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
};

struct PixelCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;

    PixelCounts& operator+=(const PixelCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
};

constexpr int kThresholdCount = 256;  // thresholds i/255, i = 0..255

/// Per-threshold confusion counts of binarize(map, t) against gt.
std::vector<PixelCounts> threshold_counts(const Image& map, const Mask& gt);

struct PrRocCurves {
    std::vector<CurvePoint> points;  // one per threshold, ascending threshold
    bool empty_ground_truth = false;
};

/// PR and ROC curves over the 256 evenly spaced thresholds. Precision at
/// zero detections is defined as 1. An all-false gt is flagged (recall
/// undefined) rather than an error.
PrRocCurves pr_roc(const Image& map, const Mask& gt);

PrRocCurves curves_from_counts(const std::vector<PixelCounts>& counts);

/// Trapezoidal area under the (fpr, tpr) curve with endpoints extended to
/// (0,0) and (1,1).
double auc(const PrRocCurves& curves);

/// Mean F_beta over integer alpha in [alpha_lo, alpha_hi], each binarized at
/// alpha * mean(map). Thresholds above max(map) contribute F = 0.
double f_measure(const Image& map, const Mask& gt, int alpha_lo = 2, int alpha_hi = 11,
                 double beta_sq = 0.3);

double f_beta(double precision, double recall, double beta_sq = 0.3);

struct EvalReport {
    PrRocCurves curves;  // micro-averaged (pooled pixel counts) by default
    double auc = 0.0;
    double f_measure = 0.0;          // mean over images
    double mean_seconds = 0.0;       // per-image map evaluation time, if provided
    int images = 0;
    std::vector<std::string> skipped;  // "file: reason" for unusable pairs
};

struct CorpusOptions {
    bool macro = false;  // macro: average per-image AUC instead of pooling
    int alpha_lo = 2;
    int alpha_hi = 11;
    double beta_sq = 0.3;
};

/// Evaluates every map in maps_dir against the same-named mask in gt_dir.
/// Unpairable or mismatched files are recorded in `skipped` and skipped.
EvalReport evaluate_corpus(const std::filesystem::path& maps_dir,
                           const std::filesystem::path& gt_dir,
                           const CorpusOptions& options = {});

void write_curves_csv(const PrRocCurves& curves, const std::filesystem::path& path);
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);

}  // namespace umsli

#endif
