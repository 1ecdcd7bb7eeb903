#ifndef UMSLI_CLASSIFY_HPP
#define UMSLI_CLASSIFY_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "umsli/core.hpp"
#include "umsli/registration.hpp"
#include "umsli/shape_context.hpp"

namespace umsli {

struct TemplateEntry {
    std::string source;  // file name or generator tag
    Mask mask;
    PointSet points;
    ShapeContext descriptor;
};

struct DescriptorOptions {
    int n_points = 64;
    int r_bins = 5;
    int theta_bins = 12;
};

/// Template sets grouped by class. On disk: one directory per class with
/// silhouette PNG/PGM files, plus an index.txt naming the classes in order.
class TemplateLibrary {
public:
    TemplateLibrary() = default;
    explicit TemplateLibrary(const DescriptorOptions& opts) : opts_(opts) {}

    static TemplateLibrary load(const std::filesystem::path& dir,
                                const DescriptorOptions& opts = {});
    void save(const std::filesystem::path& dir) const;

    int add_class(const std::string& name);
    void add_template(int class_index, const Mask& mask, const std::string& source);

    /// Library restricted to the given template indices per class.
    TemplateLibrary subset(const std::vector<std::vector<int>>& keep) const;

    int class_count() const { return static_cast<int>(classes_.size()); }
    const std::string& class_name(int j) const { return classes_[static_cast<std::size_t>(j)]; }
    int find_class(const std::string& name) const;
    const std::vector<TemplateEntry>& templates(int j) const {
        return templates_[static_cast<std::size_t>(j)];
    }
    const DescriptorOptions& descriptor_options() const { return opts_; }

private:
    DescriptorOptions opts_;
    std::vector<std::string> classes_;
    std::vector<std::vector<TemplateEntry>> templates_;
};

struct ClassifyOptions {
    /// Empty schedule disables alignment: every correntropy is exactly 1 and
    /// the combined score reduces to the plain descriptor distance.
    MccOptions mcc;
    /// Combine per class as (mean d) / (mean c) instead of mean of d/c.
    bool aggregate_correntropy = false;
};

struct ClassScore {
    std::vector<double> descriptor_distance;                    // per class, Eq-6 style mean d
    std::vector<double> mean_correntropy;                       // per class mean c
    std::vector<double> combined;                               // per class final dissimilarity
    std::vector<std::vector<double>> template_distance;         // d_ij
    std::vector<std::vector<double>> template_correntropy;      // c_ij
    int predicted = -1;            // argmin of combined; ties -> lowest class index
    int predicted_descriptor = -1; // argmin of descriptor_distance
    bool tie = false;
};

ClassScore classify(const Mask& query, const TemplateLibrary& library,
                    const ClassifyOptions& options = {});

/// Same, for a query that is already sampled and described.
ClassScore classify_points(const PointSet& query_points, const ShapeContext& query_descriptor,
                           const TemplateLibrary& library, const ClassifyOptions& options = {});

/// Mean cosine distance between a query descriptor and every template of
/// class j.
double class_distance(const ShapeContext& query_descriptor, const TemplateLibrary& library, int j);

}  // namespace umsli

#endif
