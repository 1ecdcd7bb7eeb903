#include "umsli/gamma.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace umsli {

namespace {

/// log of the radial profile value at r > 0 (without the normalizer).
double gamma_entry(int k, double mu, double r) {
    if (r == 0.0)
        return k == 1 ? mu * mu / (2.0 * std::numbers::pi) : 0.0;
    const double log_v = (k + 1) * std::log(mu) - std::log(2.0 * std::numbers::pi) -
                         std::lgamma(k + 1.0) + (k - 1) * std::log(r) - mu * r;
    return std::exp(log_v);
}

}  // namespace

GammaKernel gamma_kernel(int k, double mu, int radius) {
    if (k < 1) throw InvalidParam("gamma kernel order k must be >= 1");
    if (!(mu > 0.0)) throw InvalidParam("gamma kernel decay mu must be > 0");
    if (radius < 1) throw InvalidParam("gamma kernel radius must be >= 1");
    GammaKernel g;
    g.order = k;
    g.decay = mu;
    g.radius = radius;
    g.mask = Image(2 * radius + 1, 2 * radius + 1);
    for (int n2 = -radius; n2 <= radius; ++n2) {
        for (int n1 = -radius; n1 <= radius; ++n1) {
            const double r = std::sqrt(static_cast<double>(n1) * n1 + static_cast<double>(n2) * n2);
            g.mask.at(n1 + radius, n2 + radius) = gamma_entry(k, mu, r);
        }
    }
    return g;
}

int suggest_radius(int k, double mu, double tol) {
    const double peak_r = k > 1 ? (k - 1) / mu : 0.0;
    const double peak = gamma_entry(k, mu, std::max(peak_r, 1e-9));
    int r = static_cast<int>(std::ceil(peak_r)) + 1;
    while (gamma_entry(k, mu, r) >= tol * peak && r < 4096) ++r;
    return std::max(r, 1);
}

GammaKernelBank kernel_bank(const std::vector<std::pair<int, double>>& params, int radius) {
    if (params.size() < 2)
        throw InvalidParam("kernel bank needs at least 2 kernels, got " +
                           std::to_string(params.size()));
    int r = radius;
    if (r <= 0) {
        r = 1;
        for (const auto& [k, mu] : params) r = std::max(r, suggest_radius(k, mu));
    }
    GammaKernelBank bank;
    bank.params = params;
    bank.radius = r;
    bank.composite = Image(2 * r + 1, 2 * r + 1);
    double sign = 1.0;
    for (const auto& [k, mu] : params) {
        const GammaKernel g = gamma_kernel(k, mu, r);
        for (int y = 0; y < bank.composite.height(); ++y)
            for (int x = 0; x < bank.composite.width(); ++x)
                bank.composite.at(x, y) += sign * g.mask.at(x, y);
        sign = -sign;
    }
    return bank;
}

std::string GammaKernelBank::describe() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out << ",";
        out << "k" << i + 1 << ":" << params[i].first << ",mu" << i + 1 << ":" << params[i].second;
    }
    return out.str();
}

std::vector<std::pair<int, double>> parse_bank_params(const std::string& spec) {
    // expected: k1:<int>,mu1:<real>,k2:<int>,mu2:<real>,...
    std::vector<int> ks;
    std::vector<double> mus;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw InvalidParam("bank spec item '" + item + "' must be name:value");
        const std::string name = item.substr(0, colon);
        const std::string value = item.substr(colon + 1);
        try {
            if (name.rfind("k", 0) == 0 && name.size() > 1 && std::isdigit(name[1])) {
                const std::size_t idx = std::stoul(name.substr(1));
                if (idx == 0) throw InvalidParam("bank indices start at 1");
                if (ks.size() < idx) ks.resize(idx, -1);
                ks[idx - 1] = std::stoi(value);
            } else if (name.rfind("mu", 0) == 0) {
                const std::size_t idx = std::stoul(name.substr(2));
                if (idx == 0) throw InvalidParam("bank indices start at 1");
                if (mus.size() < idx) mus.resize(idx, -1.0);
                mus[idx - 1] = std::stod(value);
            } else {
                throw InvalidParam("unknown bank parameter '" + name + "'");
            }
        } catch (const InvalidParam&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidParam("bad value in bank spec item '" + item + "'");
        }
    }
    if (ks.size() != mus.size())
        throw InvalidParam("bank spec has mismatched k/mu counts");
    std::vector<std::pair<int, double>> params;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 0 || mus[i] < 0)
            throw InvalidParam("bank spec missing k" + std::to_string(i + 1) + " or mu" +
                               std::to_string(i + 1));
        params.emplace_back(ks[i], mus[i]);
    }
    return params;
}

}  // namespace umsli
