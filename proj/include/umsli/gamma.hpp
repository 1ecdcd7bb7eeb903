#ifndef UMSLI_GAMMA_HPP
#define UMSLI_GAMMA_HPP

#include <string>
#include <vector>

#include "umsli/core.hpp"

namespace umsli {

/// Annular "donut" convolution mask: entry(n1, n2) =
/// mu^(k+1) / (2 pi k!) * r^(k-1) * exp(-mu r), r = sqrt(n1^2 + n2^2).
/// The radial profile peaks at r = (k-1)/mu for k > 1.
struct GammaKernel {
    int order = 1;       // k
    double decay = 1.0;  // mu
    int radius = 1;      // R; mask is (2R+1) x (2R+1)
    Image mask;

    double at_offset(int n1, int n2) const { return mask.at(n1 + radius, n2 + radius); }
};

GammaKernel gamma_kernel(int k, double mu, int radius);

/// Smallest radius at which the kernel tail falls below tol * peak value.
int suggest_radius(int k, double mu, double tol = 1e-3);

/// Alternating-sign composite of M >= 2 gamma kernels:
/// g_total = g0 - g1 + g2 - ...; entry 0 is the center-focused kernel so the
/// composite is positive at the center and negative on the surround annulus.
struct GammaKernelBank {
    std::vector<std::pair<int, double>> params;  // (k_m, mu_m)
    int radius = 0;
    Image composite;

    std::string describe() const;
};

/// radius <= 0 picks the radius automatically from the widest kernel's tail.
GammaKernelBank kernel_bank(const std::vector<std::pair<int, double>>& params, int radius = 0);

/// Parses "k1:1,mu1:0.7,k2:24,mu2:1.0" into bank parameters.
std::vector<std::pair<int, double>> parse_bank_params(const std::string& spec);

}  // namespace umsli

#endif
