#ifndef UMSLI_DTG_HPP
#define UMSLI_DTG_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "umsli/classify.hpp"
#include "umsli/hu.hpp"

namespace umsli {

/// Ring MDP over template states: action a moves state i to (i + a) mod S.
/// Action 0 is excluded (staying put is never allowed).
struct TemplateMdp {
    std::vector<HuState> states;
    std::vector<int> actions = default_actions();
    double gamma = 0.9;

    static std::vector<int> default_actions();  // [-10..-1, 1..10]

    int state_count() const { return static_cast<int>(states.size()); }
    int action_count() const { return static_cast<int>(actions.size()); }
    int next_state(int state, int action_index) const;
    void validate() const;
};

/// One stored rollout tuple [x_i, x_{i+1}, a, r]; states are kept as indices
/// into the owning model's state table. r is carried for fidelity to the
/// logging format but is always 0 (divergence replaces reward downstream).
struct Transition {
    int state = 0;
    int next = 0;
    int action_index = 0;
    double reward = 0.0;
};

struct TransitionModel {
    std::vector<HuState> states;
    std::vector<int> actions;
    std::vector<Transition> tuples;
    double bandwidth = 0.0;  // Gaussian KDE bandwidth (Silverman's rule)
};

/// Random-policy rollout of `steps` uniform actions from a seeded start.
TransitionModel build_transition_model(const TemplateMdp& mdp, int steps, std::uint64_t seed);

/// Concatenation of several models (used as "all other classes").
TransitionModel concat_models(std::span<const TransitionModel> models);

struct DivergenceOptions {
    double state_kernel_scale = 1.0;   // conditioning bandwidth multiplier
    double support_threshold = 1e-8;   // min total conditioning weight
    double d_max = 50.0;               // estimator saturation / no-support value
};

/// Cauchy-Schwarz divergence between the Gaussian-KDE next-state densities
/// of the two models conditioned near (x, action). Non-negative, symmetric,
/// zero when the estimates coincide; saturates at d_max, which is also
/// returned when either model has no support near (x, action).
double divergence(const TransitionModel& self, const TransitionModel& other, const HuState& x,
                  int action_index, const DivergenceOptions& options = {});

/// Kernel expansion of the divergence-to-go value:
/// dtg(x, a) = d0 + alpha * sum_j delta_j k(x, x_j) over updates made at
/// action a, with k a Gaussian (correntropy) kernel over states. Visited
/// states always come from the finite template set, so coefficients are
/// merged per (state, action).
struct DtgFunction {
    double d0 = 0.0;
    double alpha = 0.1;
    double kernel_sigma = 1.0;
    std::vector<HuState> support;
    std::vector<int> actions;
    std::vector<std::vector<double>> coeff;  // [action_index][support_index]

    double value(const HuState& x, int action_index) const;
    double kernel(const HuState& a, const HuState& b) const;
};

struct SelectionResult {
    std::string method;        // dtg | kmeans | random
    std::vector<long> visits;  // per state; empty for kmeans/random
    std::vector<int> chosen;   // distinct template indices, size n
};

struct DtgTrainOptions {
    int episodes = 1;
    int steps = 2000;
    double gamma = 0.9;
    double alpha = 0.1;
    double epsilon = 0.1;
    double d0 = 0.0;
    /// Similarity kernel bandwidth; <= 0 picks the median pairwise state
    /// distance.
    double kernel_sigma = 0.0;
    int top_n = 10;
    std::uint64_t seed = 0;
};

struct DtgTrainResult {
    DtgFunction dtg;
    SelectionResult selection;
};

/// KTD-style training against an arbitrary divergence function
/// (state index, action index) -> D. Epsilon-greedy on the learned dtg.
DtgTrainResult train_dtg_fn(const TemplateMdp& mdp,
                            const std::function<double(int, int)>& divergence_fn,
                            const DtgTrainOptions& options);

/// Full protocol: divergence of the own-class transition model against the
/// concatenated other-class models, memoized over the finite (state, action)
/// grid, then KTD training and top-n selection by visit count.
DtgTrainResult train_dtg(const TemplateMdp& own_mdp, const TransitionModel& own_model,
                         std::span<const TransitionModel> other_models,
                         const DtgTrainOptions& options,
                         const DivergenceOptions& div_options = {});

/// k-means over the rows of a similarity matrix; each cluster is represented
/// by its member row with the least L1 norm. Deterministic given the seed.
SelectionResult kmeans_select(const std::vector<std::vector<double>>& similarity, int k,
                              std::uint64_t seed);

SelectionResult random_select(int state_count, int n, std::uint64_t seed);

/// Gaussian similarity matrix over Hu states, bandwidth = median pairwise
/// distance.
std::vector<std::vector<double>> hu_similarity_matrix(std::span<const HuState> states);

struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<long>> counts;  // [true][predicted]

    long total() const;
    double accuracy() const;
    std::vector<double> per_class_rate() const;
};

struct LabeledQuery {
    Mask mask;
    int label = 0;
};

/// Classification over the library restricted to the per-class selections.
ConfusionMatrix evaluate_selection(const TemplateLibrary& library,
                                   const std::vector<std::vector<int>>& keep,
                                   std::span<const LabeledQuery> queries,
                                   const ClassifyOptions& options = {});

}  // namespace umsli

#endif
