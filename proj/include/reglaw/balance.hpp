#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "reglaw/dictionary.hpp"
#include "reglaw/grid.hpp"
#include "reglaw/measure.hpp"
#include "reglaw/young.hpp"

namespace reglaw {

struct balance_error : std::runtime_error {
    explicit balance_error(const std::string& what) : std::runtime_error(what) {}
};

struct DkResult {
    double lower = 0.0;                      // certified dictionary lower bound
    std::optional<double> wasserstein_upper; // d=1 with density closures only
    std::size_t argmax = 0;                  // dictionary entry achieving the max
};

DkResult dk_distance(const ParticleMeasure& mu, const ParticleMeasure& nu, int k,
                     const TestDictionary& dict);

struct LevelRow {
    double level = 0.0; // n, or the R/delta abscissa of the curve
    double R = 0.0;
    double dk = 0.0;
    double norm = 0.0;
};

struct BalanceReport {
    int q = 0, k = 1, m = 1;
    std::string e_label;
    double a = 1.0;
    std::vector<LevelRow> table;
    double pi_value = 0.0;
    double pi_tail = 0.0;
    double limsup_statistic = 0.0;
    double trend_slope = 0.0;
    std::string verdict; // "regular" | "inconclusive"
    nlohmann::ordered_json provenance;

    nlohmann::ordered_json to_json() const;
};

// Σ_{n<=N} 2^{n(q+k)} β_e(2^{nd}) d_k(μ, μ_n) + Σ_{n<=N} 2^{-2nm} ‖p_n‖_{2m+q,2m,(e)}.
// Approximants are densities on grids; d_k uses their quadrature-sampled
// particle clouds against mu. Truncated adaptively (cap N).
struct PiResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    bool diverging = false;
    std::vector<LevelRow> rows;
};
PiResult pi_functional(const ParticleMeasure& mu, const std::vector<GridFunction>& approximants,
                       int q, int k, int m, const YoungFunction& e,
                       const TestDictionary& dict, int N);

// max over the top half of the curve of
// L_a(R)^{1+(k+q)/2m} β_e(L_a(R)^{d/2m}) d_k / R, with the trend slope of its
// log against log R; verdict regular iff slope <= 0.05.
struct HqResult {
    double limsup = 0.0;
    double slope = 0.0;
    bool regular = false;
};
HqResult hypothesis_Hq_statistic(const std::vector<std::pair<double, double>>& curve,
                                 int q, int k, int m, const YoungFunction& e, double a,
                                 int dim = 1);

// Fourier baseline: per xi, min over the approximation grid of
// |xi| err(n) + |xi|^{-k} weight(n); returns the fitted decay exponent.
struct FourierPoint {
    double xi;
    double approx_error; // E|F - F_n| at the optimizing n
    double weight_size;  // E|H_k(F_n)|
};
double fourier_balance(const std::vector<FourierPoint>& optimized_curve, int k);

// Convenience: symbolic intro model err(δ)=δ^{(1+h)/2}, weight(δ)=δ^{-k/2},
// optimized over a δ grid per xi; exponent should approach hk/(1+h+k).
double fourier_balance_model(double h, int k, const std::vector<double>& xi_grid);

BalanceReport theorem2C_verdict(const ParticleMeasure& mu,
                                const std::vector<GridFunction>& approximants,
                                int q, int k, int m, const YoungFunction& e, double a,
                                const TestDictionary& dict, int N);

ParticleMeasure grid_density_particles(const GridFunction& density);

} // namespace reglaw
