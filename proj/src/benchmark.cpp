#include "umsli/benchmark.hpp"

#include <random>

#include "umsli/silhouette.hpp"

namespace umsli {

namespace {

constexpr ShapeFamily kFamilies[3] = {ShapeFamily::Turtle, ShapeFamily::Fish, ShapeFamily::Ray};

}  // namespace

Benchmark make_benchmark(const BenchmarkSpec& spec, const DescriptorOptions& descriptor) {
    if (spec.templates_per_class < 2) throw InvalidParam("need at least 2 templates per class");
    Benchmark bench;
    bench.library = TemplateLibrary(descriptor);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int c = 0; c < 3; ++c) {
        bench.library.add_class(shape_family_name(kFamilies[static_cast<std::size_t>(c)]));
        bench.states.emplace_back();
        for (int t = 0; t < spec.templates_per_class; ++t) {
            SilhouetteParams p;
            p.family = kFamilies[static_cast<std::size_t>(c)];
            // morph grows with the template index, so ring neighbors are
            // similar and the blob-like (confusable) end sits together
            p.morph = spec.template_morph_max * t / (spec.templates_per_class - 1);
            p.rotation = (unit(rng) - 0.5) * 0.24;
            p.stretch = 1.0 + (unit(rng) - 0.5) * 0.12;
            p.jitter = 0.02;
            p.jitter_seed = spec.seed * 1000 + static_cast<std::uint64_t>(c) * 100 + static_cast<std::uint64_t>(t);
            const Mask mask = render_silhouette(p, spec.render_size);
            bench.library.add_template(c, mask, "gen_" + std::to_string(t));
            bench.states.back().push_back(hu_moments(mask));
        }
    }

    for (int c = 0; c < 3; ++c) {
        for (int q = 0; q < spec.queries_per_class; ++q) {
            SilhouetteParams p;
            p.family = kFamilies[static_cast<std::size_t>(c)];
            p.morph = unit(rng) * spec.query_morph_max;
            p.rotation = (unit(rng) * 2.0 - 1.0) * spec.query_rotation;
            p.stretch = 1.0 + (unit(rng) - 0.5) * 0.16;
            p.jitter = spec.query_jitter;
            p.jitter_seed = spec.seed * 7000 + static_cast<std::uint64_t>(c) * 500 + static_cast<std::uint64_t>(q);
            if (unit(rng) < spec.occlusion_probability) {
                p.occlusion = unit(rng) * spec.query_occlusion;
                p.occlusion_seed = p.jitter_seed + 17;
            }
            bench.queries.push_back({render_silhouette(p, spec.render_size), c});
        }
    }
    return bench;
}

TemplateMdp benchmark_mdp(const Benchmark& bench, int class_index, double gamma) {
    TemplateMdp mdp;
    mdp.states = bench.states[static_cast<std::size_t>(class_index)];
    mdp.gamma = gamma;
    return mdp;
}

}  // namespace umsli
