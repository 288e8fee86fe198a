#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "reglaw/balance.hpp"
#include "reglaw/dictionary.hpp"
#include "reglaw/ibp.hpp"
#include "reglaw/measure.hpp"
#include "reglaw/rates.hpp"

namespace reglaw {

struct sde_error : std::runtime_error {
    explicit sde_error(const std::string& what) : std::runtime_error(what) {}
};

// dX = Σ_j σ_j(t,X) dW^j + b(t,X) dt on a box domain with exit-time stopping
// at grid times (no bridge correction; bias O(sqrt(dt)) documented).
struct SdeModel {
    int d = 1;      // state dimension
    int nw = 1;     // driving dimension
    // sigma fills a d x nw row-major matrix, drift a d-vector.
    std::function<void(double, std::span<const double>, double*)> sigma;
    std::function<void(double, std::span<const double>, double*)> drift;
    std::string tag = "lipschitz"; // lipschitz | c_log | hormander_kinetic
    double h = 1.0;                // c_log modulus parameter
    std::vector<double> box_lo, box_hi; // empty = no stopping

    bool inside(std::span<const double> x) const;
    void validate() const; // linear growth + (tagged) modulus probe checks

    // Diagonal sigma_ii(x) = c0 + c1 (1 + W(x_i - x*_i))/2 where W is a
    // lacunary cosine cascade whose mean-square increment at displacement v
    // tracks |ln v|^{-2(2+h)} across the band of scales the simulations
    // resolve; uniformly elliptic (>= c0), drift zero.
    static SdeModel elliptic_clog(int d, double h, double c0, double c1,
                                  std::vector<double> xstar, double box_half);
    // dX1 = dW, dX2 = X1 dt.
    static SdeModel kinetic(double box_half = 0.0);
};

double clog_modulus_gauge(double u, double h); // min(1, |ln u|^{-(2+h)})

// Nonnegative least-squares design of lacunary-cosine amplitudes a_k
// (frequencies 2^{k+1}) whose mean-square increment tracks |ln v|^{-2(2+h)}
// over displacements v in [v_lo, v_hi].
std::vector<double> clog_cascade_amplitudes(double h, double v_lo, double v_hi);

struct EulerResult {
    int d = 1;
    std::vector<double> endpoints; // row-major
    std::vector<std::uint8_t> exited;
};
EulerResult euler_simulate(const SdeModel& model, const std::vector<double>& x0,
                           double T, double dt, std::size_t n_paths, std::uint64_t seed);

// Simulates to T-delta (step dt, default T/200), then both the true dynamics
// (step min(dt, delta/16)) and the frozen-Gaussian step on the same
// increments. Conditional covariance delta sigma sigma*(X_{T-delta}).
struct FrozenResult {
    ParticleMeasure true_cloud;   // X_{T and tau}, weight 1/n
    ParticleMeasure frozen_cloud; // frozen endpoints, carries IBP weights
    std::vector<std::vector<double>> means, covs; // per-path Gaussian parameters
    std::size_t degenerate = 0;   // paths excluded for singular sigma sigma*
};
FrozenResult frozen_gaussian(const SdeModel& model, const std::vector<double>& x0,
                             double T, double delta, std::size_t n_paths,
                             std::uint64_t seed, int weight_order = 1, double dt = 0.0);

// Gaussian-mixture density of the frozen cloud, optionally multiplied by the
// plateau psi centered at y0 with radius pair (r, 2r).
ParticleMeasure::Density frozen_mixture_density(const FrozenResult& fr,
                                                const std::vector<double>& y0 = {},
                                                double r = 0.0);

// Upper bound on d_k(psi mu, psi mu_delta) for k >= 1 via the synchronous
// coupling: (1 + 2/r) E[|X_T - X_T^frozen| ; either endpoint within 2r of y0],
// since every unit test function paired with the plateau is (1 + 2/r)-Lipschitz.
double localized_coupled_distance(const FrozenResult& fr, const std::vector<double>& y0,
                                  double r, int k);

RateFit lemma10_rate(const SdeModel& model, const std::vector<double>& y0, double r,
                     double T, const std::vector<double>& deltas, std::size_t n_paths,
                     std::uint64_t seed, const TestDictionary& dict);

struct Theorem9Params {
    int q = 0, k = 1, m = 2;
    double a = 1.1;
    double T = 1.0;
    double r = 1.0;
    std::size_t n_paths = 50000;
    int grid_points = 401; // per axis, for the mixture-density norms
    std::uint64_t seed = 1;
};
BalanceReport theorem9_pipeline(const SdeModel& model, const std::vector<double>& y0,
                                const Theorem9Params& params,
                                const std::vector<double>& delta_grid,
                                const TestDictionary& dict);

// Hormander bracket functional: min eigenvalue of the Gram matrix of the
// bracket family up to order k (k = 0 or 1) at x; Jacobians by differences.
double bracket_lambda(const SdeModel& model, int k, std::span<const double> x, double t);

struct KineticReport {
    double lambda0 = 0.0, lambda1 = 0.0;
    double density_at_mode = 0.0, density_se = 0.0, density_closed_form = 0.0;
    RateFit distance_decay;     // d1 vs delta (fast decay expected)
    double norm_scaling_slope = 0.0; // Lemma-13 style slope of ||1||_{W^{q,p}}
    BalanceReport report;       // H-tilde statistic verdict
    bool verdict_matches_explicit = false;
};
KineticReport hormander_kinetic_pipeline(double T, int q, int k, int m, double a,
                                         const std::vector<double>& delta_grid,
                                         std::size_t n_paths, std::uint64_t seed,
                                         const TestDictionary& dict);

} // namespace reglaw
