#ifndef UMSLI_BENCHMARK_HPP
#define UMSLI_BENCHMARK_HPP

#include <cstdint>

#include "umsli/dtg.hpp"

namespace umsli {

/// Synthetic 3-class silhouette benchmark (turtle / fish / ray). Templates
/// sweep the morph axis from fully detailed to blob-like, so high-morph
/// templates of different classes genuinely confuse; queries stay in the
/// identifiable low-morph range but carry rotation, boundary noise and
/// occlusion.
struct BenchmarkSpec {
    int templates_per_class = 20;
    int queries_per_class = 50;
    double template_morph_max = 0.85;
    double query_morph_max = 0.5;
    double query_rotation = 0.26;  // radians, ~15 degrees
    double query_jitter = 0.06;
    double query_occlusion = 0.08;
    double occlusion_probability = 0.5;
    int render_size = 96;
    std::uint64_t seed = 1;
};

struct Benchmark {
    TemplateLibrary library;
    std::vector<LabeledQuery> queries;
    /// Hu states per class in template-index order (the MDP state tables).
    std::vector<std::vector<HuState>> states;
};

Benchmark make_benchmark(const BenchmarkSpec& spec, const DescriptorOptions& descriptor = {});

/// The per-class ring MDP over the benchmark's template Hu states.
TemplateMdp benchmark_mdp(const Benchmark& bench, int class_index, double gamma = 0.9);

}  // namespace umsli

#endif
