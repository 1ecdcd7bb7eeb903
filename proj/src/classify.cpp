#include "umsli/classify.hpp"

#include <algorithm>
#include <fstream>

#include "umsli/image_io.hpp"

namespace umsli {

TemplateLibrary TemplateLibrary::load(const std::filesystem::path& dir,
                                      const DescriptorOptions& opts) {
    const auto index_path = dir / "index.txt";
    if (!std::filesystem::is_regular_file(index_path))
        throw IoError("template library index not found: " + index_path.string());

    TemplateLibrary lib(opts);
    std::ifstream in(index_path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r\n");
        lib.add_class(line.substr(b, e - b + 1));
    }
    if (lib.class_count() == 0) throw FormatError("library index lists no classes", 0);

    for (int j = 0; j < lib.class_count(); ++j) {
        const auto class_dir = dir / lib.class_name(j);
        if (!std::filesystem::is_directory(class_dir))
            throw IoError("missing class directory: " + class_dir.string());
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(class_dir)) {
            if (!entry.is_regular_file()) continue;
            const auto ext = entry.path().extension().string();
            if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files)
            lib.add_template(j, load_mask(f), f.filename().string());
        if (lib.templates(j).empty())
            throw IoError("class '" + lib.class_name(j) + "' has no templates");
    }
    return lib;
}

void TemplateLibrary::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream index(dir / "index.txt");
    if (!index) throw IoError("cannot write library index in " + dir.string());
    for (const auto& name : classes_) index << name << "\n";
    for (int j = 0; j < class_count(); ++j) {
        const auto class_dir = dir / class_name(j);
        std::filesystem::create_directories(class_dir);
        int i = 0;
        for (const auto& t : templates_[static_cast<std::size_t>(j)]) {
            char name[32];
            std::snprintf(name, sizeof(name), "t%03d.png", i++);
            save_mask(t.mask, class_dir / name);
        }
    }
}

int TemplateLibrary::add_class(const std::string& name) {
    classes_.push_back(name);
    templates_.emplace_back();
    return static_cast<int>(classes_.size()) - 1;
}

void TemplateLibrary::add_template(int class_index, const Mask& mask, const std::string& source) {
    TemplateEntry t;
    t.source = source;
    t.mask = mask;
    t.points = extract_points(mask, opts_.n_points);
    t.descriptor = shape_context(t.points, opts_.r_bins, opts_.theta_bins);
    templates_[static_cast<std::size_t>(class_index)].push_back(std::move(t));
}

TemplateLibrary TemplateLibrary::subset(const std::vector<std::vector<int>>& keep) const {
    if (keep.size() != classes_.size())
        throw InvalidParam("subset selection must cover every class");
    TemplateLibrary out(opts_);
    for (std::size_t j = 0; j < classes_.size(); ++j) {
        out.add_class(classes_[j]);
        for (int idx : keep[j]) {
            if (idx < 0 || idx >= static_cast<int>(templates_[j].size()))
                throw InvalidParam("subset index out of range for class " + classes_[j]);
            out.templates_[j].push_back(templates_[j][static_cast<std::size_t>(idx)]);
        }
        if (out.templates_[j].empty())
            throw InvalidParam("subset leaves class '" + classes_[j] + "' empty");
    }
    return out;
}

int TemplateLibrary::find_class(const std::string& name) const {
    for (std::size_t j = 0; j < classes_.size(); ++j)
        if (classes_[j] == name) return static_cast<int>(j);
    return -1;
}

double class_distance(const ShapeContext& query_descriptor, const TemplateLibrary& library,
                      int j) {
    const auto& ts = library.templates(j);
    if (ts.empty()) throw InvalidParam("class has no templates");
    double total = 0.0;
    for (const auto& t : ts) total += cosine_distance(query_descriptor, t.descriptor);
    return total / static_cast<double>(ts.size());
}

ClassScore classify_points(const PointSet& query_points, const ShapeContext& query_descriptor,
                           const TemplateLibrary& library, const ClassifyOptions& options) {
    const int classes = library.class_count();
    if (classes == 0) throw InvalidParam("library has no classes");
    const bool align = !options.mcc.sigma_schedule.empty();

    ClassScore score;
    score.descriptor_distance.resize(static_cast<std::size_t>(classes));
    score.mean_correntropy.resize(static_cast<std::size_t>(classes));
    score.combined.resize(static_cast<std::size_t>(classes));
    score.template_distance.resize(static_cast<std::size_t>(classes));
    score.template_correntropy.resize(static_cast<std::size_t>(classes));

    for (int j = 0; j < classes; ++j) {
        const auto& ts = library.templates(j);
        if (ts.empty()) throw InvalidParam("class '" + library.class_name(j) + "' has no templates");
        auto& dist = score.template_distance[static_cast<std::size_t>(j)];
        auto& corr = score.template_correntropy[static_cast<std::size_t>(j)];
        dist.reserve(ts.size());
        corr.reserve(ts.size());
        double d_sum = 0.0, c_sum = 0.0, ratio_sum = 0.0;
        for (const auto& t : ts) {
            const double d = cosine_distance(query_descriptor, t.descriptor);
            double c = 1.0;
            if (align) {
                try {
                    c = mcc_align(query_points, t.points, options.mcc).final_correntropy;
                } catch (const SingularFit&) {
                    // degenerate fit: fall back to the unaligned similarity
                    c = correntropy(query_points, t.points, options.mcc.sigma_schedule.back());
                }
                c = std::max(c, 1e-12);
            }
            dist.push_back(d);
            corr.push_back(c);
            d_sum += d;
            c_sum += c;
            ratio_sum += d / c;
        }
        const double n = static_cast<double>(ts.size());
        score.descriptor_distance[static_cast<std::size_t>(j)] = d_sum / n;
        score.mean_correntropy[static_cast<std::size_t>(j)] = c_sum / n;
        score.combined[static_cast<std::size_t>(j)] =
            options.aggregate_correntropy ? (d_sum / n) / (c_sum / n) : ratio_sum / n;
    }

    score.predicted = 0;
    score.predicted_descriptor = 0;
    for (int j = 1; j < classes; ++j) {
        if (score.combined[static_cast<std::size_t>(j)] < score.combined[static_cast<std::size_t>(score.predicted)])
            score.predicted = j;
        if (score.descriptor_distance[static_cast<std::size_t>(j)] <
            score.descriptor_distance[static_cast<std::size_t>(score.predicted_descriptor)])
            score.predicted_descriptor = j;
    }
    for (int j = 0; j < classes; ++j)
        if (j != score.predicted &&
            score.combined[static_cast<std::size_t>(j)] == score.combined[static_cast<std::size_t>(score.predicted)])
            score.tie = true;
    return score;
}

ClassScore classify(const Mask& query, const TemplateLibrary& library,
                    const ClassifyOptions& options) {
    const auto& opts = library.descriptor_options();
    const PointSet points = extract_points(query, opts.n_points);
    const ShapeContext descriptor = shape_context(points, opts.r_bins, opts.theta_bins);
    return classify_points(points, descriptor, library, options);
}

}  // namespace umsli
