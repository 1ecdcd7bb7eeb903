#include "umsli/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "umsli/image_io.hpp"
#include "umsli/shape_context.hpp"

namespace umsli {

namespace {

std::vector<double> parse_sigma_list(const std::string& spec) {
    std::vector<double> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidParam("bad sigma list entry '" + item + "'");
        }
    }
    return out;
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    return from_kv(KeyValueFile::parse_file(path));
}

PipelineConfig PipelineConfig::from_kv(const KeyValueFile& kv) {
    PipelineConfig c;
    c.se_spec = kv.get_string("se", "");
    if (kv.has("bank")) c.bank_params = parse_bank_params(kv.get_string("bank"));
    c.bank_radius = kv.get_int("bank.radius", 0);
    c.alpha = kv.get_double("alpha", c.alpha);
    c.min_box_area = kv.get_int("min_area", c.min_box_area);
    c.score_threshold = kv.get_double("score_threshold", c.score_threshold);
    c.scan_latency = kv.get_int("latency", c.scan_latency);
    c.dense_margin = kv.get_int("margin", c.dense_margin);
    c.dense_dwell = kv.get_int("dense.dwell", c.dense_dwell);
    c.dense_alpha = kv.get_double("dense.alpha", c.dense_alpha);
    c.library_path = kv.get_string("library", "");
    if (kv.has("classify.sigmas"))
        c.sigma_schedule = parse_sigma_list(kv.get_string("classify.sigmas"));
    c.descriptor.n_points = kv.get_int("classify.points", c.descriptor.n_points);
    c.descriptor.r_bins = kv.get_int("classify.r_bins", c.descriptor.r_bins);
    c.descriptor.theta_bins = kv.get_int("classify.theta_bins", c.descriptor.theta_bins);
    c.kalman.process_noise = kv.get_double("kalman.q", c.kalman.process_noise);
    c.kalman.measurement_noise = kv.get_double("kalman.r", c.kalman.measurement_noise);
    c.kalman.initial_pos_var = kv.get_double("kalman.p0_pos", c.kalman.initial_pos_var);
    c.kalman.initial_vel_var = kv.get_double("kalman.p0_vel", c.kalman.initial_vel_var);
    kv.throw_on_unconsumed();

    if (c.alpha <= 0 || c.dense_alpha <= 0) throw InvalidParam("alpha must be positive");
    if (c.min_box_area < 1) throw InvalidParam("min_area must be >= 1");
    if (c.scan_latency < 0) throw InvalidParam("latency must be >= 0");
    if (c.dense_margin < 0) throw InvalidParam("margin must be >= 0");
    if (c.dense_dwell < 1) throw InvalidParam("dense.dwell must be >= 1");
    return c;
}

SceneFrameSource::SceneFrameSource(SyntheticScene scene, int frames)
    : scene_(std::move(scene)), frames_(frames) {
    scene_.validate();
    if (frames <= 0) throw InvalidParam("frame count must be positive");
}

Image SceneFrameSource::sparse_frame(int index) {
    return render_scene(scene_, ScanMode::sparse(), index);
}

Image SceneFrameSource::dense_frame(int index, const Rect& region) {
    return render_scene(scene_, ScanMode::dense(region), index);
}

DirectoryFrameSource::DirectoryFrameSource(const std::filesystem::path& dir, int upsample)
    : upsample_(upsample) {
    if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".pgm") files_.push_back(entry.path());
    }
    std::sort(files_.begin(), files_.end());
    if (files_.empty()) throw IoError("no input images in " + dir.string());
    const Image first = load_image(files_.front());
    width_ = first.width();
    height_ = first.height();
}

Image DirectoryFrameSource::sparse_frame(int index) {
    if (index < 0 || index >= frame_count()) throw InvalidParam("frame index out of range");
    Image img = load_image(files_[static_cast<std::size_t>(index)]);
    if (img.width() != width_ || img.height() != height_)
        throw DimMismatch("frame " + files_[static_cast<std::size_t>(index)].filename().string() +
                          " has inconsistent dimensions");
    return img;
}

Image DirectoryFrameSource::dense_frame(int index, const Rect& region) {
    const Image img = sparse_frame(index);
    if (!region.inside(img.width(), img.height()))
        throw RegionOutOfBounds("dense region outside frame");
    Image out(region.w * upsample_, region.h * upsample_);
    for (int j = 0; j < out.height(); ++j) {
        for (int i = 0; i < out.width(); ++i) {
            const double sx = region.x + (i + 0.5) / upsample_ - 0.5;
            const double sy = region.y + (j + 0.5) / upsample_ - 0.5;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double fx = sx - x0, fy = sy - y0;
            const double v00 = img.at_clamped(x0, y0), v10 = img.at_clamped(x0 + 1, y0);
            const double v01 = img.at_clamped(x0, y0 + 1), v11 = img.at_clamped(x0 + 1, y0 + 1);
            out.at(i, j) = (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 +
                           (1 - fx) * fy * v01 + fx * fy * v11;
        }
    }
    return out;
}

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::SparseScan: return "SparseScan";
        case Stage::Predict: return "Predict";
        case Stage::DenseScan: return "DenseScan";
        case Stage::Classify: return "Classify";
    }
    return "?";
}

Pipeline::Pipeline(const PipelineConfig& config)
    : config_(config), bank_(kernel_bank(config.bank_params, config.bank_radius)) {
    if (!config_.se_spec.empty()) se_ = StructuringElement::parse(config_.se_spec);
    if (!config_.library_path.empty())
        library_ = TemplateLibrary::load(config_.library_path, config_.descriptor);
}

StepOutput Pipeline::step(PipelineState& state, FrameSource& source) {
    StepOutput out;
    auto log_transition = [&](Stage to, const std::string& detail) {
        state.log.push_back({state.frame, state.stage, to, detail});
        state.stage = to;
    };

    switch (state.stage) {
        case Stage::SparseScan: {
            const int frame = state.frame;
            const Image raw = source.sparse_frame(frame);
            const StructuringElement se =
                se_ ? *se_ : default_se(raw.width(), raw.height());
            const EnhancedImage enhanced = illumination_correct(raw, se);
            SaliencyResult sal =
                detect(enhanced.signed_diff, bank_, config_.alpha, config_.min_box_area);
            out.consumed_frame = true;
            state.frame = frame + 1;
            const bool hit =
                !sal.boxes.empty() && sal.boxes.front().score >= config_.score_threshold;
            if (hit) {
                const Box& top = sal.boxes.front();
                out.events.push_back({frame, "detection",
                                      "box=" + std::to_string(top.x) + "," + std::to_string(top.y) +
                                          "," + std::to_string(top.w) + "," + std::to_string(top.h) +
                                          " score=" + format_double(top.score)});
                if (!state.track) {
                    // tentative track; the next detection confirms it and
                    // supplies a velocity estimate
                    state.detection = top;
                    state.track = init_track(top, frame, config_.kalman);
                } else {
                    const int dt = frame - state.track->frame;
                    TrackState t = predict(*state.track, dt, config_.kalman);
                    t = update(t, top.cx(), top.cy(), config_.kalman);
                    state.track = t;
                    state.detection = top;
                    log_transition(Stage::Predict, "confirmed, score " + format_double(top.score));
                }
            } else if (state.track) {
                state.track.reset();
                state.detection.reset();
                out.events.push_back({frame, "track_lost", "no detection above threshold"});
            }
            out.saliency = std::move(sal);
            break;
        }
        case Stage::Predict: {
            if (!state.track || !state.detection)
                throw Error("predict stage without an active track");
            const TrackState predicted = predict(*state.track, config_.scan_latency, config_.kalman);
            state.track = predicted;
            state.frame += config_.scan_latency;
            const Box& det = *state.detection;
            const int m = config_.dense_margin;
            Rect region;
            region.x = static_cast<int>(std::floor(predicted.cx() - det.w / 2.0)) - m;
            region.y = static_cast<int>(std::floor(predicted.cy() - det.h / 2.0)) - m;
            region.w = det.w + 2 * m;
            region.h = det.h + 2 * m;
            // clip to the sparse frame
            const int fw = source.width(), fh = source.height();
            region.x = std::clamp(region.x, 0, std::max(0, fw - 1));
            region.y = std::clamp(region.y, 0, std::max(0, fh - 1));
            region.w = std::min(region.w, fw - region.x);
            region.h = std::min(region.h, fh - region.y);
            if (region.w < 1 || region.h < 1)
                throw RegionOutOfBounds("predicted dense region left the frame");
            state.dense_region = region;
            out.events.push_back({state.frame, "predict",
                                  "center=" + format_double(predicted.cx()) + "," +
                                      format_double(predicted.cy()) + " region=" +
                                      std::to_string(region.x) + "," + std::to_string(region.y) +
                                      "," + std::to_string(region.w) + "," +
                                      std::to_string(region.h)});
            log_transition(Stage::DenseScan, "latency " + std::to_string(config_.scan_latency));
            break;
        }
        case Stage::DenseScan: {
            if (!state.dense_region) throw Error("dense stage without a region");
            Image dense;
            for (int dwell = 0; dwell < config_.dense_dwell; ++dwell) {
                dense = source.dense_frame(state.frame, *state.dense_region);
                out.consumed_frame = true;
                state.frame += 1;
            }
            const double t = adaptive_threshold(dense, config_.dense_alpha);
            state.dense_mask = binarize(dense, t);
            out.events.push_back({state.frame - 1, "dense_capture",
                                  "size=" + std::to_string(dense.width()) + "x" +
                                      std::to_string(dense.height()) + " threshold=" +
                                      format_double(t)});
            out.dense_image = std::move(dense);
            log_transition(Stage::Classify, "segmented");
            break;
        }
        case Stage::Classify: {
            if (!state.dense_mask) throw Error("classify stage without a segmented mask");
            if (library_) {
                ClassifyOptions opts;
                opts.mcc.sigma_schedule = config_.sigma_schedule;
                const ClassScore score = classify(*state.dense_mask, *library_, opts);
                out.events.push_back({state.frame, "classification",
                                      library_->class_name(score.predicted) + " score=" +
                                          format_double(score.combined[static_cast<std::size_t>(score.predicted)])});
                out.classification = score;
            } else {
                out.events.push_back({state.frame, "classification", "none (no library configured)"});
            }
            state.detection.reset();
            state.track.reset();
            state.dense_region.reset();
            state.dense_mask.reset();
            log_transition(Stage::SparseScan, "episode complete");
            break;
        }
    }
    return out;
}

BatchResult run_batch(const PipelineConfig& config, FrameSource& source,
                      const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    Pipeline pipeline(config);
    PipelineState state;
    BatchResult result;

    std::ofstream boxes_csv(out_dir / "boxes.csv");
    boxes_csv << "frame,x,y,w,h,score\n";
    std::ofstream class_csv(out_dir / "classification.csv");
    class_csv << "frame,predicted,score\n";
    std::ofstream log(out_dir / "transitions.log");
    std::vector<std::string> artifacts = {"boxes.csv", "classification.csv", "transitions.log"};

    while (true) {
        // frame-consuming stages need input; Predict/Classify always proceed
        const bool needs_frame =
            state.stage == Stage::SparseScan || state.stage == Stage::DenseScan;
        if (needs_frame && state.frame >= source.frame_count()) break;
        const std::size_t log_before = state.log.size();
        StepOutput out;
        try {
            out = pipeline.step(state, source);
        } catch (const Error& e) {
            ++result.errors;
            log << "frame " << state.frame << " error in " << stage_name(state.stage) << ": "
                << e.what() << "\n";
            break;
        }
        for (const auto& ev : out.events) result.events.push_back(ev);

        if (out.saliency) {
            char name[48];
            std::snprintf(name, sizeof(name), "frame_%04d_map.png", state.frame - 1);
            save_image(out.saliency->map, out_dir / name, 16);
            artifacts.push_back(name);
            for (const auto& b : out.saliency->boxes) {
                char row[128];
                std::snprintf(row, sizeof(row), "%d,%d,%d,%d,%d,%.9g\n", state.frame - 1, b.x,
                              b.y, b.w, b.h, b.score);
                boxes_csv << row;
            }
            ++result.frames_processed;
        }
        if (out.dense_image) {
            char name[48];
            std::snprintf(name, sizeof(name), "frame_%04d_dense.png", state.frame - 1);
            save_image(*out.dense_image, out_dir / name, 16);
            artifacts.push_back(name);
            if (state.dense_mask) {
                char mname[48];
                std::snprintf(mname, sizeof(mname), "frame_%04d_dense_mask.png", state.frame - 1);
                save_mask(*state.dense_mask, out_dir / mname);
                artifacts.push_back(mname);
            }
        }
        for (const auto& ev : out.events) {
            if (ev.kind == "detection") ++result.detections;
            if (ev.kind == "classification") {
                ++result.classifications;
                class_csv << ev.frame << "," << ev.detail << "\n";
            }
        }
        for (std::size_t i = log_before; i < state.log.size(); ++i) {
            const auto& t = state.log[i];
            log << "frame " << t.frame << " " << stage_name(t.from) << " -> " << stage_name(t.to)
                << " (" << t.detail << ")\n";
        }
    }

    std::ofstream manifest(out_dir / "manifest.txt");
    std::sort(artifacts.begin(), artifacts.end());
    for (const auto& a : artifacts) manifest << a << "\n";
    manifest << "frames=" << result.frames_processed << "\n";
    manifest << "detections=" << result.detections << "\n";
    manifest << "classifications=" << result.classifications << "\n";
    manifest << "errors=" << result.errors << "\n";
    return result;
}

}  // namespace umsli
