#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "reglaw/measure.hpp"

namespace reglaw {

struct ibp_error : std::runtime_error {
    explicit ibp_error(const std::string& what) : std::runtime_error(what) {}
};

// Particle cloud carrying weight samples H_alpha in "moment form":
// E[∂_α f(F)] = E[f(F) H_α], with H_{α+e_i} = H_α (Σ^{-1}(x-m))_i - ∂_i H_α.
struct IbpSample {
    ParticleMeasure mu;
    int order = 0;
    std::string generator;
};

// Exact weights for F ~ N(mean, cov), all |alpha| <= order.
IbpSample gaussian_ibp_weights(const std::vector<double>& mean,
                               const std::vector<double>& cov_rowmajor, int order,
                               std::size_t n_samples, std::uint64_t seed);

// Per-particle conditionally-Gaussian weights: particle i was drawn from
// N(means[i], covs[i]); weights are evaluated at its own position, which
// makes the pooled cloud satisfy the IBP identity for the mixture.
void attach_conditional_gaussian_weights(ParticleMeasure& cloud,
                                         const std::vector<std::vector<double>>& means,
                                         const std::vector<std::vector<double>>& covs,
                                         int order);

// Density closure of Σ_i w_i γ_{covs[i]}(x - means[i]), dim <= 4.
ParticleMeasure::Density gaussian_mixture_density(
    int dim, const std::vector<std::vector<double>>& means,
    const std::vector<std::vector<double>>& covs, const std::vector<double>& weights);

struct SobolevBound {
    double norm = 0.0; // upper bound of ‖1‖_{W_mu^{m,p}}
    double c_mp = 0.0; // ‖1‖_{W^{1,p}}^{k_{d,p}} ‖1‖_{W^{m,p}}
};
SobolevBound measure_sobolev_norm(const ParticleMeasure& mu, int m, double p);

// ∇Q_d with ΔQ_d = δ_0: d=1 Heaviside, d=2 x/(2π|x|²), d>=3 x/(ω_{d-1}|x|^d).
std::vector<double> poisson_kernel_grad(int d, std::span<const double> x);

struct DensityEstimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t effective = 0;
};
DensityEstimate mt_density(const ParticleMeasure& mu, std::span<const double> x,
                           double r1 = 1.0, double r2 = 2.0);

// (1+|x|)^k moment of the cloud.
double weighted_moment(const ParticleMeasure& mu, int k);

// Ratio table |∂_α p(x)| / (c_{m,2(d+1)} m_k^{1/2} (1+|x|)^{-k/2}) over probe
// points, |alpha| <= q; density derivatives from the density closure.
std::vector<double> density_bound_check(const ParticleMeasure& mu, int m, int q, int k,
                                        const std::vector<std::vector<double>>& probes);

} // namespace reglaw
