#include "umsli/dtg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace umsli {

std::vector<int> TemplateMdp::default_actions() {
    std::vector<int> a;
    for (int i = -10; i <= 10; ++i)
        if (i != 0) a.push_back(i);
    return a;
}

int TemplateMdp::next_state(int state, int action_index) const {
    const int s = state_count();
    const int a = actions[static_cast<std::size_t>(action_index)];
    return ((state + a) % s + s) % s;
}

void TemplateMdp::validate() const {
    if (states.size() < 2) throw InvalidParam("MDP needs at least 2 states");
    if (actions.empty()) throw InvalidParam("MDP needs a non-empty action list");
    for (int a : actions)
        if (a == 0) throw InvalidParam("action 0 (stay) is not allowed");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw InvalidParam("discount must lie in [0, 1)");
}

namespace {

constexpr int kHuDim = 7;

/// Silverman's rule over the pooled next-state samples.
double silverman_bandwidth(const TransitionModel& model) {
    const std::size_t n = model.tuples.size();
    if (n < 2) return 1.0;
    std::array<double, kHuDim> mean{}, var{};
    for (const auto& t : model.tuples)
        for (int d = 0; d < kHuDim; ++d)
            mean[static_cast<std::size_t>(d)] += model.states[static_cast<std::size_t>(t.next)].values[static_cast<std::size_t>(d)];
    for (auto& m : mean) m /= static_cast<double>(n);
    for (const auto& t : model.tuples)
        for (int d = 0; d < kHuDim; ++d) {
            const double dv =
                model.states[static_cast<std::size_t>(t.next)].values[static_cast<std::size_t>(d)] - mean[static_cast<std::size_t>(d)];
            var[static_cast<std::size_t>(d)] += dv * dv;
        }
    double pooled = 0.0;
    for (const auto& v : var) pooled += v / static_cast<double>(n - 1);
    const double sigma = std::sqrt(std::max(pooled / kHuDim, 1e-12));
    const double d = kHuDim;
    return sigma * std::pow(4.0 / ((d + 2.0) * static_cast<double>(n)), 1.0 / (d + 4.0));
}

struct ConditionedSamples {
    std::vector<const HuState*> next;
    std::vector<double> log_w;  // unnormalized log conditioning weights
    double total_weight = 0.0;
};

ConditionedSamples condition_near(const TransitionModel& model, const HuState& x,
                                  int action_value, double cond_bw) {
    ConditionedSamples out;
    const double inv = 1.0 / (2.0 * cond_bw * cond_bw);
    for (const auto& t : model.tuples) {
        if (model.actions[static_cast<std::size_t>(t.action_index)] != action_value) continue;
        const double d2 = model.states[static_cast<std::size_t>(t.state)].distance_sq(x);
        const double lw = -d2 * inv;
        out.next.push_back(&model.states[static_cast<std::size_t>(t.next)]);
        out.log_w.push_back(lw);
        out.total_weight += std::exp(lw);
    }
    return out;
}

double log_sum_exp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

/// log of the Gaussian-mixture cross term: log sum_ij w_i v_j G(mu_i - nu_j;
/// s2 * I) with log weights already unnormalized; the caller subtracts the
/// normalizers separately.
double log_cross_term(const ConditionedSamples& a, const ConditionedSamples& b, double s2) {
    std::vector<double> terms;
    terms.reserve(a.next.size() * b.next.size());
    const double inv = 1.0 / (2.0 * s2);
    for (std::size_t i = 0; i < a.next.size(); ++i)
        for (std::size_t j = 0; j < b.next.size(); ++j) {
            const double d2 = a.next[i]->distance_sq(*b.next[j]);
            terms.push_back(a.log_w[i] + b.log_w[j] - d2 * inv);
        }
    const double log_norm = 0.5 * kHuDim * std::log(2.0 * std::numbers::pi * s2);
    return log_sum_exp(terms) - log_norm;
}

}  // namespace

TransitionModel build_transition_model(const TemplateMdp& mdp, int steps, std::uint64_t seed) {
    mdp.validate();
    if (steps <= 0) throw InvalidParam("transition model needs at least 1 step");
    TransitionModel model;
    model.states = mdp.states;
    model.actions = mdp.actions;
    model.tuples.reserve(static_cast<std::size_t>(steps));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_state(0, mdp.state_count() - 1);
    std::uniform_int_distribution<int> pick_action(0, mdp.action_count() - 1);
    int state = pick_state(rng);
    for (int i = 0; i < steps; ++i) {
        const int a = pick_action(rng);
        const int next = mdp.next_state(state, a);
        model.tuples.push_back({state, next, a, 0.0});
        state = next;
    }
    model.bandwidth = silverman_bandwidth(model);
    return model;
}

TransitionModel concat_models(std::span<const TransitionModel> models) {
    if (models.empty()) throw InvalidParam("cannot concatenate zero models");
    TransitionModel out;
    out.actions = models.front().actions;
    for (const auto& m : models) {
        if (m.actions != out.actions)
            throw InvalidParam("models must share an action list to concatenate");
        const int offset = static_cast<int>(out.states.size());
        out.states.insert(out.states.end(), m.states.begin(), m.states.end());
        for (const auto& t : m.tuples)
            out.tuples.push_back({t.state + offset, t.next + offset, t.action_index, t.reward});
    }
    out.bandwidth = silverman_bandwidth(out);
    return out;
}

double divergence(const TransitionModel& self, const TransitionModel& other, const HuState& x,
                  int action_index, const DivergenceOptions& options) {
    if (self.tuples.empty() || other.tuples.empty())
        throw InvalidParam("divergence needs non-empty transition models");
    if (action_index < 0 || action_index >= static_cast<int>(self.actions.size()))
        throw InvalidParam("action index out of range");
    const int action_value = self.actions[static_cast<std::size_t>(action_index)];

    const double bw_self = std::max(self.bandwidth, 1e-9);
    const double bw_other = std::max(other.bandwidth, 1e-9);
    const auto a = condition_near(self, x, action_value,
                                  bw_self * options.state_kernel_scale);
    const auto b = condition_near(other, x, action_value,
                                  bw_other * options.state_kernel_scale);
    if (a.total_weight < options.support_threshold || b.total_weight < options.support_threshold)
        return options.d_max;

    // Cauchy-Schwarz divergence of the two weighted Gaussian mixtures,
    // closed form: -log (int pq)^2 / (int p^2 int q^2). Unnormalized weights
    // cancel between the cross and norm terms.
    const double log_pq = log_cross_term(a, b, bw_self * bw_self + bw_other * bw_other);
    const double log_pp = log_cross_term(a, a, 2.0 * bw_self * bw_self);
    const double log_qq = log_cross_term(b, b, 2.0 * bw_other * bw_other);
    const double d = -2.0 * log_pq + log_pp + log_qq;
    return std::clamp(d, 0.0, options.d_max);
}

double DtgFunction::kernel(const HuState& a, const HuState& b) const {
    return std::exp(-a.distance_sq(b) / (2.0 * kernel_sigma * kernel_sigma));
}

double DtgFunction::value(const HuState& x, int action_index) const {
    double v = d0;
    const auto& c = coeff[static_cast<std::size_t>(action_index)];
    for (std::size_t j = 0; j < support.size(); ++j)
        if (c[j] != 0.0) v += alpha * c[j] * kernel(x, support[j]);
    return v;
}

namespace {

double median_pairwise_distance(std::span<const HuState> states) {
    std::vector<double> d;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            d.push_back(states[i].distance(states[j]));
    if (d.empty()) return 1.0;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
    const double m = d[d.size() / 2];
    return m > 1e-9 ? m : 1.0;
}

}  // namespace

DtgTrainResult train_dtg_fn(const TemplateMdp& mdp,
                            const std::function<double(int, int)>& divergence_fn,
                            const DtgTrainOptions& options) {
    mdp.validate();
    if (!(options.gamma >= 0.0 && options.gamma < 1.0))
        throw InvalidParam("discount must lie in [0, 1)");
    if (options.steps <= 0 || options.episodes <= 0)
        throw InvalidParam("training needs positive episodes and steps");
    const int s_count = mdp.state_count();
    const int a_count = mdp.action_count();
    if (options.top_n > s_count)
        throw InvalidParam("cannot select more templates than states");

    DtgTrainResult result;
    DtgFunction& dtg = result.dtg;
    dtg.d0 = options.d0;
    dtg.alpha = options.alpha;
    dtg.kernel_sigma =
        options.kernel_sigma > 0.0 ? options.kernel_sigma : median_pairwise_distance(mdp.states);
    dtg.support = mdp.states;
    dtg.actions = mdp.actions;
    dtg.coeff.assign(static_cast<std::size_t>(a_count),
                     std::vector<double>(static_cast<std::size_t>(s_count), 0.0));

    // kernel values between template states, reused every update
    std::vector<std::vector<double>> k(static_cast<std::size_t>(s_count),
                                       std::vector<double>(static_cast<std::size_t>(s_count)));
    for (int i = 0; i < s_count; ++i)
        for (int j = 0; j < s_count; ++j)
            k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                dtg.kernel(mdp.states[static_cast<std::size_t>(i)], mdp.states[static_cast<std::size_t>(j)]);

    auto q_value = [&](int state, int action_index) {
        double v = dtg.d0;
        const auto& c = dtg.coeff[static_cast<std::size_t>(action_index)];
        const auto& kr = k[static_cast<std::size_t>(state)];
        for (int j = 0; j < s_count; ++j)
            if (c[static_cast<std::size_t>(j)] != 0.0)
                v += dtg.alpha * c[static_cast<std::size_t>(j)] * kr[static_cast<std::size_t>(j)];
        return v;
    };
    auto best_value = [&](int state) {
        double best_v = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < a_count; ++a) best_v = std::max(best_v, q_value(state, a));
        return best_v;
    };

    result.selection.method = "dtg";
    result.selection.visits.assign(static_cast<std::size_t>(s_count), 0);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick_state(0, s_count - 1);
    std::uniform_int_distribution<int> pick_action(0, a_count - 1);

    // greedy choice with random tie-breaking, so a flat value function (the
    // no-signal case) degenerates to a uniform random walk instead of a
    // fixed orbit
    std::vector<int> argmax_set;
    auto greedy_action = [&](int state) {
        argmax_set.clear();
        double best_v = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < a_count; ++a) {
            const double v = q_value(state, a);
            if (v > best_v + 1e-12) {
                best_v = v;
                argmax_set.assign(1, a);
            } else if (v >= best_v - 1e-12) {
                argmax_set.push_back(a);
            }
        }
        if (argmax_set.size() == 1) return argmax_set[0];
        std::uniform_int_distribution<std::size_t> pick(0, argmax_set.size() - 1);
        return argmax_set[pick(rng)];
    };

    for (int ep = 0; ep < options.episodes; ++ep) {
        int state = pick_state(rng);
        for (int step = 0; step < options.steps; ++step) {
            ++result.selection.visits[static_cast<std::size_t>(state)];
            int action = coin(rng) < options.epsilon ? pick_action(rng) : greedy_action(state);
            const double d = divergence_fn(state, action);
            const int next = mdp.next_state(state, action);
            const double target = d + options.gamma * best_value(next);
            const double delta = target - q_value(state, action);
            dtg.coeff[static_cast<std::size_t>(action)][static_cast<std::size_t>(state)] += delta;
            state = next;
        }
    }

    // top-n most visited, ties by lowest index
    std::vector<int> order(static_cast<std::size_t>(s_count));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return result.selection.visits[static_cast<std::size_t>(a)] >
               result.selection.visits[static_cast<std::size_t>(b)];
    });
    result.selection.chosen.assign(order.begin(), order.begin() + options.top_n);
    std::sort(result.selection.chosen.begin(), result.selection.chosen.end());
    return result;
}

DtgTrainResult train_dtg(const TemplateMdp& own_mdp, const TransitionModel& own_model,
                         std::span<const TransitionModel> other_models,
                         const DtgTrainOptions& options, const DivergenceOptions& div_options) {
    if (other_models.empty()) throw InvalidParam("train_dtg needs at least one other-class model");
    const TransitionModel others = other_models.size() == 1 ? other_models.front()
                                                            : concat_models(other_models);
    // divergence is memoized over the finite (state, action) grid
    std::vector<std::vector<double>> memo(static_cast<std::size_t>(own_mdp.state_count()),
                                          std::vector<double>(static_cast<std::size_t>(own_mdp.action_count()),
                                                              -1.0));
    auto fn = [&](int state, int action) {
        double& slot = memo[static_cast<std::size_t>(state)][static_cast<std::size_t>(action)];
        if (slot < 0.0)
            slot = divergence(own_model, others, own_mdp.states[static_cast<std::size_t>(state)], action,
                              div_options);
        return slot;
    };
    return train_dtg_fn(own_mdp, fn, options);
}

SelectionResult kmeans_select(const std::vector<std::vector<double>>& similarity, int k,
                              std::uint64_t seed) {
    const int n = static_cast<int>(similarity.size());
    if (n == 0) throw InvalidParam("similarity matrix is empty");
    if (k <= 0 || k > n) throw InvalidParam("k must lie in [1, n]");
    const std::size_t dim = similarity.front().size();
    for (const auto& row : similarity)
        if (row.size() != dim) throw InvalidParam("similarity matrix rows have unequal length");

    auto dist_sq = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    };

    std::mt19937_64 rng(seed);
    // k-means++ seeding
    std::vector<std::vector<double>> centers;
    std::uniform_int_distribution<int> first(0, n - 1);
    centers.push_back(similarity[static_cast<std::size_t>(first(rng))]);
    std::vector<double> d2(static_cast<std::size_t>(n));
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, dist_sq(similarity[static_cast<std::size_t>(i)], c));
            d2[static_cast<std::size_t>(i)] = best;
            total += best;
        }
        if (total <= 0.0) {
            // every remaining row coincides with a center; duplicate rows to fill
            for (int i = 0; i < n && static_cast<int>(centers.size()) < k; ++i)
                centers.push_back(similarity[static_cast<std::size_t>(i)]);
            while (static_cast<int>(centers.size()) < k) centers.push_back(centers.back());
            break;
        }
        std::uniform_real_distribution<double> u(0.0, total);
        double r = u(rng);
        int pick = n - 1;
        for (int i = 0; i < n; ++i) {
            r -= d2[static_cast<std::size_t>(i)];
            if (r <= 0.0) {
                pick = i;
                break;
            }
        }
        centers.push_back(similarity[static_cast<std::size_t>(pick)]);
    }

    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = dist_sq(similarity[static_cast<std::size_t>(i)], centers[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[static_cast<std::size_t>(i)] != best) {
                assign[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k), std::vector<double>(dim, 0.0));
        std::vector<long> counts(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
            for (std::size_t d = 0; d < dim; ++d)
                sums[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])][d] += similarity[static_cast<std::size_t>(i)][d];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) {
                // re-seed an empty cluster with the row farthest from its center
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = dist_sq(similarity[static_cast<std::size_t>(i)],
                                             centers[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centers[static_cast<std::size_t>(c)] = similarity[static_cast<std::size_t>(far)];
                assign[static_cast<std::size_t>(far)] = c;
                changed = true;
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d)
                centers[static_cast<std::size_t>(c)][d] =
                    sums[static_cast<std::size_t>(c)][d] / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        }
        if (!changed) break;
    }

    SelectionResult sel;
    sel.method = "kmeans";
    for (int c = 0; c < k; ++c) {
        int best = -1;
        double best_l1 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (assign[static_cast<std::size_t>(i)] != c) continue;
            double l1 = 0.0;
            for (double v : similarity[static_cast<std::size_t>(i)]) l1 += std::abs(v);
            if (l1 < best_l1) {
                best_l1 = l1;
                best = i;
            }
        }
        if (best >= 0) sel.chosen.push_back(best);
    }
    // guard against pathological duplicate collapse
    std::sort(sel.chosen.begin(), sel.chosen.end());
    sel.chosen.erase(std::unique(sel.chosen.begin(), sel.chosen.end()), sel.chosen.end());
    for (int i = 0; static_cast<int>(sel.chosen.size()) < k && i < n; ++i)
        if (!std::binary_search(sel.chosen.begin(), sel.chosen.end(), i)) {
            sel.chosen.push_back(i);
            std::sort(sel.chosen.begin(), sel.chosen.end());
        }
    return sel;
}

SelectionResult random_select(int state_count, int n, std::uint64_t seed) {
    if (n <= 0 || n > state_count) throw InvalidParam("selection size out of range");
    std::vector<int> order(static_cast<std::size_t>(state_count));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    SelectionResult sel;
    sel.method = "random";
    sel.chosen.assign(order.begin(), order.begin() + n);
    std::sort(sel.chosen.begin(), sel.chosen.end());
    return sel;
}

std::vector<std::vector<double>> hu_similarity_matrix(std::span<const HuState> states) {
    const std::size_t n = states.size();
    const double sigma = median_pairwise_distance(states);
    std::vector<std::vector<double>> sim(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sim[i][j] = std::exp(-states[i].distance_sq(states[j]) / (2.0 * sigma * sigma));
    return sim;
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts)
        for (long v : row) t += v;
    return t;
}

double ConfusionMatrix::accuracy() const {
    const long t = total();
    if (t == 0) return 0.0;
    long diag = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) diag += counts[i][i];
    return static_cast<double>(diag) / static_cast<double>(t);
}

std::vector<double> ConfusionMatrix::per_class_rate() const {
    std::vector<double> rates(counts.size(), 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        long row = 0;
        for (long v : counts[i]) row += v;
        rates[i] = row == 0 ? 0.0 : static_cast<double>(counts[i][i]) / static_cast<double>(row);
    }
    return rates;
}

ConfusionMatrix evaluate_selection(const TemplateLibrary& library,
                                   const std::vector<std::vector<int>>& keep,
                                   std::span<const LabeledQuery> queries,
                                   const ClassifyOptions& options) {
    if (queries.empty()) throw InvalidParam("no queries to evaluate");
    const TemplateLibrary restricted = library.subset(keep);
    ConfusionMatrix cm;
    for (int j = 0; j < restricted.class_count(); ++j) cm.classes.push_back(restricted.class_name(j));
    cm.counts.assign(cm.classes.size(), std::vector<long>(cm.classes.size(), 0));
    for (const auto& q : queries) {
        if (q.label < 0 || q.label >= restricted.class_count())
            throw InvalidParam("query label out of range");
        const ClassScore score = classify(q.mask, restricted, options);
        ++cm.counts[static_cast<std::size_t>(q.label)][static_cast<std::size_t>(score.predicted)];
    }
    return cm;
}

}  // namespace umsli
