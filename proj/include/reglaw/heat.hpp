#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "reglaw/balance.hpp"
#include "reglaw/dictionary.hpp"
#include "reglaw/rates.hpp"

namespace reglaw {

struct heat_error : std::runtime_error {
    explicit heat_error(const std::string& what) : std::runtime_error(what) {}
};

// du = u_xx dt + b(u) dt + sigma(u) W(dt,dx) on [0,1], Neumann boundary.
struct HeatModel {
    std::function<double(double)> sigma, drift, u0;
    double c_sigma = 0.0; // ellipticity floor
    double h = 1.0;       // modulus parameter when clog_sigma
    bool clog_sigma = false;

    void validate() const;

    static HeatModel additive();                                  // sigma = 1, b = 0, u0 = 0
    static HeatModel clog(double h, double c0, double c1, double ustar);
};

// G_t(x,y) = 1 + 2 Σ e^{-n²π²t} cos(nπx) cos(nπy); image (reflection) sum for
// t < 1e-4. n_terms = 0 truncates at 1e-14.
double neumann_kernel(double t, double x, double y, int n_terms = 0);

// Eigenvalue range of Σ^{ij} = ∫_0^eps G_{2s}(x_i,x_j) ds, scaled by sqrt(eps).
struct CovarianceRow {
    double eps = 0.0;
    double lo = 0.0, hi = 0.0;
};
std::vector<CovarianceRow> covariance_bounds(const std::vector<double>& points,
                                             const std::vector<double>& eps_grid);

struct WalshResult {
    int nx = 0;
    std::size_t n_real = 0;
    std::vector<double> fields; // realization-major blocks of nx+1 nodes
    double at(std::size_t r, int i) const {
        return fields[r * static_cast<std::size_t>(nx + 1) + static_cast<std::size_t>(i)];
    }
};
// Explicit finite differences, per-cell noise N(0, dt/dx); needs nt >= 4 nx² T.
WalshResult walsh_simulate(const HeatModel& model, double T, int nx, long nt,
                           std::size_t n_real, std::uint64_t seed);

// u(T,·) = u_eps + I_eps + J_eps on shared noise: the frozen-coefficient flow,
// the sigma-increment stochastic term, and the drift term over [T-eps, T].
struct S4Report {
    double eps = 0.0;               // snapped to the time grid
    double mean_I2 = 0.0, mean_J2 = 0.0; // at x = 1/2
    double max_residual = 0.0;      // recombination defect
};
S4Report s4_decomposition(const HeatModel& model, double T, double eps, int nx,
                          std::size_t n_real, std::uint64_t seed);

struct S4Rates {
    RateFit i_ratio;  // E|I|² / sqrt(eps): exponent ~ 0, log-power decaying
    RateFit j_moment; // E|J|²: exponent ~ 2
};
S4Rates s4_moment_rates(const HeatModel& model, double T,
                        const std::vector<double>& eps_grid, int nx,
                        std::size_t n_real, std::uint64_t seed);

struct SpdeParams {
    int q = 0, k = 1, m = 3;
    double a = 1.1;
    double T = 0.25;
    int nx = 64;
    std::size_t n_real = 2000;
    int grid_points = 41; // per axis, mixture-norm diagnostic
    std::uint64_t seed = 1;
};
BalanceReport spde_verdict(const HeatModel& model, const std::vector<double>& points,
                           const SpdeParams& params, const std::vector<double>& eps_grid,
                           const TestDictionary& dict);

} // namespace reglaw
