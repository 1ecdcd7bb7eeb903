// umsli command-line tool: detection, evaluation, classification and the
// full sparse->dense pipeline over synthetic scenes or image directories.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "umsli/benchmark.hpp"
#include "umsli/classify.hpp"
#include "umsli/dtg.hpp"
#include "umsli/image_io.hpp"
#include "umsli/metrics.hpp"
#include "umsli/morphology.hpp"
#include "umsli/pipeline.hpp"
#include "umsli/saliency.hpp"
#include "umsli/scene.hpp"

using namespace umsli;
namespace fs = std::filesystem;

namespace {

int g_verbose = 0;

void note(const std::string& msg) {
    if (g_verbose) std::fprintf(stderr, "umsli: %s\n", msg.c_str());
}

PipelineConfig load_config(const std::string& path) {
    return path.empty() ? PipelineConfig{} : PipelineConfig::from_file(path);
}

int cmd_preprocess(const std::string& se_spec, const std::string& in_path,
                   const std::string& out_path) {
    const Image img = load_image(in_path);
    const StructuringElement se = se_spec.empty()
                                      ? default_se(img.width(), img.height())
                                      : StructuringElement::parse(se_spec);
    const EnhancedImage e = illumination_correct(img, se);
    save_image(e.clamped(), out_path, 16);
    fs::path bg = fs::path(out_path);
    bg.replace_filename(bg.stem().string() + "_background" + bg.extension().string());
    save_image(e.background, bg, 16);
    note("wrote " + out_path + " and " + bg.string());
    return 0;
}

int cmd_detect(const PipelineConfig& config, const std::string& bank_spec, double alpha,
               int min_area, const std::string& se_spec, const std::string& in_path,
               const std::string& map_path, const std::string& boxes_path) {
    Image img = load_image(in_path);
    if (!se_spec.empty()) {
        const EnhancedImage e = illumination_correct(img, StructuringElement::parse(se_spec));
        img = e.signed_diff;
    }
    const auto params = bank_spec.empty() ? config.bank_params : parse_bank_params(bank_spec);
    const GammaKernelBank bank = kernel_bank(params, config.bank_radius);
    const SaliencyResult result = detect(img, bank, alpha, min_area);
    if (!map_path.empty()) save_image(result.map, map_path, 16);
    if (!boxes_path.empty()) {
        std::ofstream out(boxes_path);
        if (!out) throw IoError("cannot write " + boxes_path);
        out << "x,y,w,h,score\n";
        for (const auto& b : result.boxes) {
            char row[128];
            std::snprintf(row, sizeof(row), "%d,%d,%d,%d,%.9g\n", b.x, b.y, b.w, b.h, b.score);
            out << row;
        }
    }
    std::printf("%zu boxes\n", result.boxes.size());
    return 0;
}

int cmd_eval(const std::string& maps, const std::string& gts, const std::string& report_path,
             const std::string& curves_path, bool macro) {
    CorpusOptions options;
    options.macro = macro;
    const EvalReport report = evaluate_corpus(maps, gts, options);
    if (!report_path.empty()) write_report_csv(report, report_path);
    if (!curves_path.empty()) write_curves_csv(report.curves, curves_path);
    std::printf("images=%d f_measure=%.4f auc=%.4f mean_seconds=%.6f skipped=%zu\n",
                report.images, report.f_measure, report.auc, report.mean_seconds,
                report.skipped.size());
    for (const auto& s : report.skipped) std::fprintf(stderr, "skipped %s\n", s.c_str());
    return report.skipped.empty() ? 0 : 2;
}

int cmd_classify(const PipelineConfig& config, const std::string& library_path,
                 const std::string& query_path, const std::string& out_path) {
    const TemplateLibrary library = TemplateLibrary::load(library_path, config.descriptor);
    ClassifyOptions options;
    options.mcc.sigma_schedule = config.sigma_schedule;
    const Mask query = load_mask(query_path);
    const ClassScore score = classify(query, library, options);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw IoError("cannot write " + out_path);
        out = &file;
    }
    *out << "class,descriptor_distance,mean_correntropy,combined,predicted\n";
    for (int j = 0; j < library.class_count(); ++j) {
        char row[256];
        std::snprintf(row, sizeof(row), "%s,%.9g,%.9g,%.9g,%d\n", library.class_name(j).c_str(),
                      score.descriptor_distance[static_cast<std::size_t>(j)],
                      score.mean_correntropy[static_cast<std::size_t>(j)],
                      score.combined[static_cast<std::size_t>(j)], j == score.predicted ? 1 : 0);
        *out << row;
    }
    std::printf("predicted %s%s\n", library.class_name(score.predicted).c_str(),
                score.tie ? " (tie broken to the lowest index)" : "");
    return 0;
}

std::vector<std::vector<HuState>> library_hu_states(const TemplateLibrary& library) {
    std::vector<std::vector<HuState>> states(static_cast<std::size_t>(library.class_count()));
    for (int c = 0; c < library.class_count(); ++c)
        for (const auto& t : library.templates(c))
            states[static_cast<std::size_t>(c)].push_back(hu_moments(t.mask));
    return states;
}

int cmd_select(const PipelineConfig& config, const std::string& library_path,
               const std::string& method, int n, std::uint64_t seed, const std::string& out_path,
               int model_steps, int train_steps) {
    const TemplateLibrary library = TemplateLibrary::load(library_path, config.descriptor);
    const auto states = library_hu_states(library);

    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << "class,rank,template_index,template_source,visits\n";

    for (int c = 0; c < library.class_count(); ++c) {
        const int count = static_cast<int>(library.templates(c).size());
        if (n > count)
            throw InvalidParam("selection size exceeds template count for class " +
                               library.class_name(c));
        SelectionResult sel;
        if (method == "random") {
            sel = random_select(count, n, seed + static_cast<std::uint64_t>(c));
        } else if (method == "kmeans") {
            sel = kmeans_select(hu_similarity_matrix(states[static_cast<std::size_t>(c)]), n,
                                seed + static_cast<std::uint64_t>(c));
        } else if (method == "dtg") {
            TemplateMdp mdp;
            mdp.states = states[static_cast<std::size_t>(c)];
            std::vector<TransitionModel> others;
            for (int o = 0; o < library.class_count(); ++o) {
                if (o == c) continue;
                TemplateMdp omdp;
                omdp.states = states[static_cast<std::size_t>(o)];
                others.push_back(build_transition_model(omdp, model_steps,
                                                        seed * 31 + static_cast<std::uint64_t>(o)));
            }
            if (others.empty()) throw InvalidParam("dtg selection needs at least 2 classes");
            const TransitionModel own =
                build_transition_model(mdp, model_steps, seed * 31 + static_cast<std::uint64_t>(c));
            DtgTrainOptions train;
            train.steps = train_steps;
            train.top_n = n;
            train.seed = seed * 97 + static_cast<std::uint64_t>(c);
            sel = train_dtg(mdp, own, others, train).selection;
        } else {
            throw InvalidParam("unknown selection method '" + method + "'");
        }
        for (std::size_t r = 0; r < sel.chosen.size(); ++r) {
            const int idx = sel.chosen[r];
            const long visits = sel.visits.empty() ? -1 : sel.visits[static_cast<std::size_t>(idx)];
            out << library.class_name(c) << "," << r << "," << idx << ","
                << library.templates(c)[static_cast<std::size_t>(idx)].source << "," << visits << "\n";
        }
    }
    note("selection written to " + out_path);
    return 0;
}

std::vector<std::vector<int>> load_selection_csv(const std::string& path,
                                                 const TemplateLibrary& library) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<int>> keep(static_cast<std::size_t>(library.class_count()));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cls, rank, index;
        std::getline(row, cls, ',');
        std::getline(row, rank, ',');
        std::getline(row, index, ',');
        const int j = library.find_class(cls);
        if (j < 0) throw InvalidParam("selection lists unknown class '" + cls + "'");
        keep[static_cast<std::size_t>(j)].push_back(std::stoi(index));
    }
    return keep;
}

int cmd_select_eval(const PipelineConfig& config, const std::string& library_path,
                    const std::string& selection_path, const std::string& queries_dir,
                    const std::string& out_path) {
    const TemplateLibrary library = TemplateLibrary::load(library_path, config.descriptor);
    const auto keep = load_selection_csv(selection_path, library);

    // queries live in per-class subdirectories named like the library classes
    std::vector<LabeledQuery> queries;
    for (int j = 0; j < library.class_count(); ++j) {
        const fs::path dir = fs::path(queries_dir) / library.class_name(j);
        if (!fs::is_directory(dir)) continue;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir)) {
            const auto ext = e.path().extension().string();
            if (ext == ".png" || ext == ".pgm") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) queries.push_back({load_mask(f), j});
    }
    if (queries.empty()) throw IoError("no queries found under " + queries_dir);

    ClassifyOptions options;
    options.mcc.sigma_schedule = config.sigma_schedule;
    const ConfusionMatrix cm = evaluate_selection(library, keep, queries, options);

    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << "true\\predicted";
    for (const auto& name : cm.classes) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < cm.classes.size(); ++i) {
        out << cm.classes[i];
        for (std::size_t j = 0; j < cm.classes.size(); ++j) out << "," << cm.counts[i][j];
        out << "\n";
    }
    const auto rates = cm.per_class_rate();
    std::printf("accuracy=%.4f\n", cm.accuracy());
    for (std::size_t i = 0; i < rates.size(); ++i)
        std::printf("%s rate=%.4f\n", cm.classes[i].c_str(), rates[i]);
    return 0;
}

int cmd_run(const PipelineConfig& config, const std::string& scene_path,
            const std::string& input_dir, int frames, const std::string& out_dir) {
    std::unique_ptr<FrameSource> source;
    if (!scene_path.empty()) {
        source = std::make_unique<SceneFrameSource>(load_scene(scene_path), frames);
    } else if (!input_dir.empty()) {
        source = std::make_unique<DirectoryFrameSource>(input_dir);
    } else {
        throw InvalidParam("run needs --scene or --input");
    }
    const BatchResult result = run_batch(config, *source, out_dir);
    std::printf("frames=%d detections=%d classifications=%d errors=%d\n",
                result.frames_processed, result.detections, result.classifications, result.errors);
    return result.errors == 0 ? 0 : 1;
}

int cmd_gen_scene(std::uint64_t seed, const std::string& out_path, const std::string& render_dir,
                  int frames, bool with_gt) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SyntheticScene scene;
    scene.width = 160;
    scene.height = 120;
    scene.seed = seed;
    scene.noise_sigma = 0.015 + 0.02 * unit(rng);
    scene.gradient.base = 0.2 + 0.15 * unit(rng);
    scene.gradient.gx = 0.4 * (unit(rng) - 0.5);
    scene.gradient.gy = 0.4 * (unit(rng) - 0.5);
    scene.gradient.gxy = 0.2 * (unit(rng) - 0.5);
    SceneObject obj;
    const ShapeFamily fams[3] = {ShapeFamily::Turtle, ShapeFamily::Fish, ShapeFamily::Ray};
    obj.shape.family = fams[seed % 3];
    obj.shape.rotation = unit(rng) * 6.28;
    obj.size = 9.0 + 7.0 * unit(rng);
    obj.x = 30 + unit(rng) * 100;
    obj.y = 25 + unit(rng) * 70;
    obj.vx = 2.0 * (unit(rng) - 0.5);
    obj.vy = 2.0 * (unit(rng) - 0.5);
    obj.gain = 0.4 + 0.2 * unit(rng);
    scene.objects.push_back(obj);
    save_scene(scene, out_path);
    note("scene written to " + out_path);

    if (!render_dir.empty()) {
        fs::create_directories(render_dir);
        for (int f = 0; f < frames; ++f) {
            char name[48];
            std::snprintf(name, sizeof(name), "frame_%04d.png", f);
            save_image(render_scene(scene, ScanMode::sparse(), f), fs::path(render_dir) / name, 16);
            if (with_gt) {
                std::snprintf(name, sizeof(name), "frame_%04d_gt.png", f);
                save_mask(render_ground_truth(scene, ScanMode::sparse(), f),
                          fs::path(render_dir) / name);
            }
        }
    }
    return 0;
}

int cmd_gen_library(std::uint64_t seed, const std::string& out_dir, int templates, int queries,
                    const std::string& queries_dir) {
    BenchmarkSpec spec;
    spec.seed = seed;
    spec.templates_per_class = templates;
    spec.queries_per_class = queries;
    const Benchmark bench = make_benchmark(spec);
    bench.library.save(out_dir);
    if (!queries_dir.empty()) {
        std::vector<int> counter(static_cast<std::size_t>(bench.library.class_count()), 0);
        for (const auto& q : bench.queries) {
            const fs::path dir = fs::path(queries_dir) / bench.library.class_name(q.label);
            fs::create_directories(dir);
            char name[32];
            std::snprintf(name, sizeof(name), "q%03d.png", counter[static_cast<std::size_t>(q.label)]++);
            save_mask(q.mask, dir / name);
        }
    }
    note("library written to " + out_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UMSLI saliency detection, classification and template-selection pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 7;
    app.add_option("--config", config_path, "pipeline configuration file");
    app.add_option("--seed", seed, "global random seed");
    app.add_flag("--verbose", g_verbose, "log progress to stderr");

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "illumination correction (background + enhanced)");
    std::string pre_se, pre_in, pre_out;
    pre->add_option("--se", pre_se, "structuring element, e.g. disk:32");
    pre->add_option("input", pre_in)->required();
    pre->add_option("output", pre_out)->required();

    // detect
    auto* det = app.add_subcommand("detect", "gamma-kernel saliency detection");
    std::string det_bank, det_se, det_in, det_map, det_boxes;
    double det_alpha = 4.0;
    int det_min_area = 9;
    det->add_option("--bank", det_bank, "kernel bank, e.g. k1:1,mu1:0.7,k2:24,mu2:1.0");
    det->add_option("--alpha", det_alpha, "adaptive threshold multiplier");
    det->add_option("--min-area", det_min_area, "minimum component area, px^2");
    det->add_option("--se", det_se, "apply illumination correction first with this element");
    det->add_option("input", det_in)->required();
    det->add_option("--out-map", det_map, "saliency map output (16-bit)");
    det->add_option("--out-boxes", det_boxes, "boxes CSV output");

    // eval
    auto* ev = app.add_subcommand("eval", "PR/ROC/F-measure/AUC harness");
    std::string ev_maps, ev_gt, ev_report, ev_curves;
    bool ev_macro = false;
    ev->add_option("--maps", ev_maps)->required();
    ev->add_option("--gt", ev_gt)->required();
    ev->add_option("--out", ev_report, "summary CSV");
    ev->add_option("--curves", ev_curves, "per-threshold curves CSV");
    ev->add_flag("--macro", ev_macro, "average per-image AUC instead of pooling pixels");

    // classify
    auto* cls = app.add_subcommand("classify", "shape-context + MCC classification");
    std::string cls_lib, cls_query, cls_out;
    cls->add_option("--library", cls_lib)->required();
    cls->add_option("--query", cls_query)->required();
    cls->add_option("--out", cls_out, "per-class score CSV");

    // select
    auto* sel = app.add_subcommand("select", "template selection (dtg | kmeans | random)");
    std::string sel_method = "dtg", sel_lib, sel_out;
    int sel_n = 10, sel_model_steps = 5000, sel_train_steps = 2000;
    sel->add_option("--method", sel_method, "dtg, kmeans or random");
    sel->add_option("--library", sel_lib)->required();
    sel->add_option("--n", sel_n, "templates to keep per class");
    sel->add_option("--model-steps", sel_model_steps, "random-policy rollout length");
    sel->add_option("--train-steps", sel_train_steps, "dtg training steps");
    sel->add_option("--out", sel_out)->required();

    // select-eval
    auto* seval = app.add_subcommand("select-eval", "confusion matrix for a selection");
    std::string seval_lib, seval_sel, seval_queries, seval_out;
    seval->add_option("--library", seval_lib)->required();
    seval->add_option("--selection", seval_sel)->required();
    seval->add_option("--queries", seval_queries)->required();
    seval->add_option("--out", seval_out)->required();

    // run
    auto* run = app.add_subcommand("run", "full sparse->dense pipeline");
    std::string run_scene, run_input, run_out;
    int run_frames = 16;
    run->add_option("--scene", run_scene, "synthetic scene description file");
    run->add_option("--input", run_input, "directory of frames");
    run->add_option("--frames", run_frames, "frames to render for a scene source");
    run->add_option("--out", run_out)->required();

    // gen-scene
    auto* gen = app.add_subcommand("gen-scene", "generate a synthetic scene description");
    std::string gen_out, gen_render;
    int gen_frames = 8;
    bool gen_gt = false;
    gen->add_option("--out", gen_out)->required();
    gen->add_option("--render", gen_render, "also render frames into this directory");
    gen->add_option("--frames", gen_frames);
    gen->add_flag("--gt", gen_gt, "emit ground-truth masks next to rendered frames");

    // gen-library
    auto* genlib = app.add_subcommand("gen-library", "generate the synthetic template library");
    std::string genlib_out, genlib_queries;
    int genlib_templates = 20, genlib_queries_n = 50;
    genlib->add_option("--out", genlib_out)->required();
    genlib->add_option("--templates", genlib_templates, "templates per class");
    genlib->add_option("--queries", genlib_queries_n, "queries per class");
    genlib->add_option("--queries-dir", genlib_queries, "also emit labeled query masks");

    CLI11_PARSE(app, argc, argv);

    try {
        const PipelineConfig config = load_config(config_path);
        if (*pre) return cmd_preprocess(pre_se, pre_in, pre_out);
        if (*det)
            return cmd_detect(config, det_bank, det_alpha, det_min_area, det_se, det_in, det_map,
                              det_boxes);
        if (*ev) return cmd_eval(ev_maps, ev_gt, ev_report, ev_curves, ev_macro);
        if (*cls) return cmd_classify(config, cls_lib, cls_query, cls_out);
        if (*sel)
            return cmd_select(config, sel_lib, sel_method, sel_n, seed, sel_out, sel_model_steps,
                              sel_train_steps);
        if (*seval) return cmd_select_eval(config, seval_lib, seval_sel, seval_queries, seval_out);
        if (*run) return cmd_run(config, run_scene, run_input, run_frames, run_out);
        if (*gen) return cmd_gen_scene(seed, gen_out, gen_render, gen_frames, gen_gt);
        if (*genlib)
            return cmd_gen_library(seed, genlib_out, genlib_templates, genlib_queries_n,
                                   genlib_queries);
    } catch (const Error& e) {
        std::fprintf(stderr, "umsli: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "umsli: unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}
