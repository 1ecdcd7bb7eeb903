#ifndef UMSLI_PIPELINE_HPP
#define UMSLI_PIPELINE_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "umsli/classify.hpp"
#include "umsli/config.hpp"
#include "umsli/core.hpp"
#include "umsli/gamma.hpp"
#include "umsli/kalman.hpp"
#include "umsli/morphology.hpp"
#include "umsli/saliency.hpp"
#include "umsli/scene.hpp"

namespace umsli {

struct PipelineConfig {
    std::string se_spec;  // empty -> disk of max(w,h)/8
    std::vector<std::pair<int, double>> bank_params = {{1, 0.7}, {24, 1.0}};
    int bank_radius = 0;  // 0 = auto from kernel tails
    double alpha = 4.0;   // sparse-frame adaptive threshold multiplier
    int min_box_area = 9;
    double score_threshold = 0.5;  // detection trigger on the top box score
    int scan_latency = 2;          // frames that elapse before the dense scan
    int dense_margin = 12;         // px inflation of the predicted box
    int dense_dwell = 1;           // dense frames captured per trigger
    double dense_alpha = 2.0;      // dense-frame segmentation multiplier
    std::string library_path;     // empty -> classification stage emits "none"
    DescriptorOptions descriptor;
    std::vector<double> sigma_schedule = {0.5, 0.25, 0.125, 0.0625};
    KalmanParams kalman;

    static PipelineConfig from_file(const std::filesystem::path& path);
    static PipelineConfig from_kv(const KeyValueFile& kv);
};

/// Supplies sparse frames by index and dense re-scans of a region.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual int frame_count() const = 0;
    virtual int width() const = 0;
    virtual int height() const = 0;
    virtual Image sparse_frame(int index) = 0;
    virtual Image dense_frame(int index, const Rect& region) = 0;
};

/// Renders frames from a synthetic scene description.
class SceneFrameSource : public FrameSource {
public:
    SceneFrameSource(SyntheticScene scene, int frames);
    int frame_count() const override { return frames_; }
    int width() const override { return scene_.width; }
    int height() const override { return scene_.height; }
    Image sparse_frame(int index) override;
    Image dense_frame(int index, const Rect& region) override;
    const SyntheticScene& scene() const { return scene_; }

private:
    SyntheticScene scene_;
    int frames_;
};

/// Serves images from a directory (sorted by filename); dense requests are
/// answered by cropping the same frame and upsampling with bilinear
/// interpolation.
class DirectoryFrameSource : public FrameSource {
public:
    DirectoryFrameSource(const std::filesystem::path& dir, int upsample = 4);
    int frame_count() const override { return static_cast<int>(files_.size()); }
    int width() const override { return width_; }
    int height() const override { return height_; }
    Image sparse_frame(int index) override;
    Image dense_frame(int index, const Rect& region) override;
    const std::filesystem::path& file(int index) const { return files_[static_cast<std::size_t>(index)]; }

private:
    std::vector<std::filesystem::path> files_;
    int width_ = 0;
    int height_ = 0;
    int upsample_ = 4;
};

enum class Stage { SparseScan, Predict, DenseScan, Classify };

std::string stage_name(Stage s);

struct TransitionRecord {
    int frame = 0;
    Stage from = Stage::SparseScan;
    Stage to = Stage::SparseScan;
    std::string detail;
};

struct PipelineState {
    Stage stage = Stage::SparseScan;
    int frame = 0;  // next frame index to consume
    std::optional<Box> detection;
    std::optional<TrackState> track;
    std::optional<Rect> dense_region;
    std::optional<Mask> dense_mask;
    std::vector<TransitionRecord> log;
};

struct PipelineEvent {
    int frame = 0;
    std::string kind;    // detection | dense_capture | classification | ...
    std::string detail;  // human-readable payload
};

struct StepOutput {
    std::vector<PipelineEvent> events;
    std::optional<SaliencyResult> saliency;  // produced by SparseScan steps
    std::optional<Image> dense_image;        // produced by DenseScan steps
    std::optional<ClassScore> classification;
    bool consumed_frame = false;
};

class Pipeline {
public:
    explicit Pipeline(const PipelineConfig& config);

    /// Advances the state machine by one stage transition.
    /// SparseScan consumes one frame; Predict consumes the scan latency;
    /// DenseScan consumes one frame per dwell; Classify consumes none.
    StepOutput step(PipelineState& state, FrameSource& source);

    const PipelineConfig& config() const { return config_; }
    const GammaKernelBank& bank() const { return bank_; }

private:
    PipelineConfig config_;
    GammaKernelBank bank_;
    std::optional<StructuringElement> se_;
    std::optional<TemplateLibrary> library_;
};

struct BatchResult {
    int frames_processed = 0;
    int detections = 0;
    int classifications = 0;
    int errors = 0;
    std::vector<PipelineEvent> events;
};

/// Runs the pipeline over every frame of the source, writing per-frame
/// saliency maps, a boxes CSV, the state-transition log, a classification
/// CSV and a manifest into out_dir. Returns nonzero error count on failure.
BatchResult run_batch(const PipelineConfig& config, FrameSource& source,
                      const std::filesystem::path& out_dir);

}  // namespace umsli

#endif
