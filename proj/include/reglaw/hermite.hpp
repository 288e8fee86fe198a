#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "reglaw/grid.hpp"
#include "reglaw/measure.hpp"

namespace reglaw {

struct hermite_error : std::runtime_error {
    explicit hermite_error(const std::string& what) : std::runtime_error(what) {}
};

// h_n(t), L^2-normalized eigenfunction of -d²/dt² + t². Stable normalized
// recurrence; an exponent-scaled variant keeps values alive where the naive
// seed pi^{-1/4} exp(-t²/2) would underflow.
double hermite_h(int n, double t);

// Fills out[0..nmax] with h_0(t)..h_nmax(t).
void hermite_all(int nmax, double t, std::vector<double>& out);

// d/dt h_n = sqrt(2n) h_{n-1} - t h_n, same scaling treatment.
void hermite_all_deriv(int nmax, double t, std::vector<double>& val,
                       std::vector<double>& deriv);

// Gauss rule for ∫ f(t) dt with f of Hermite type: nodes are the roots of
// h_n; weights are the stable form 1/(n h_{n-1}(x_i)²).
struct GaussHermite {
    std::vector<double> nodes, weights;
    static GaussHermite build(int n);
};

// Smooth cutoff supported in [1/4, 4] with a(t) + a(4t) = 1 on [1/4, 1],
// built from the step S(u) = sigma(u)/(sigma(u)+sigma(1-u)), sigma = e^{-1/u}.
class CutoffA {
public:
    double operator()(double t) const;
    double norm_l(int l) const; // sum of sup |a^{(j)}|, j <= l, by differences
};

/// Smooth plateau: 1 on |x| <= r1, 0 on |x| >= r2.
double smooth_plateau(double r, double r1, double r2);
double smooth_step(double u); // 0 at u<=0, 1 at u>=1

// Precomputed dyadic Hermite blocks H_n^a for n <= n_max in dimension d.
// Block n mixes Hermite levels j in (4^{n-1}, 4^{n+1}) with weight a(j/4^n).
class DyadicBlockSet {
public:
    static DyadicBlockSet create(int dim, int n_max, int quad_points = 0);

    int dim() const { return dim_; }
    int n_max() const { return n_max_; }
    int level_cap() const { return level_cap_; } // largest Hermite level used
    const CutoffA& cutoff() const { return a_; }
    double coefficient(int n, int level) const; // a(level / 4^n) on its support

    // Kernel H_n^a(x,y) = Σ_j a(j/4^n) Σ_{|alpha|=j} H_alpha(x) H_alpha(y).
    double kernel(int n, std::span<const double> x, std::span<const double> y) const;

    // x -> ∫ H_n^a(x,y) f(y) dy through the Hermite transform of f.
    GridFunction convolve(int n, const GridFunction& f) const;

    // Hermite coefficients of f (resampled to the Gauss rule, 0 outside box).
    // d=1: c[j] = <f, h_j>. d=2: flattened over (a1, a2), a1+a2 <= level_cap.
    std::vector<double> hermite_coeffs(const GridFunction& f) const;
    GridFunction synthesize(const std::vector<double>& coeffs,
                            const std::vector<double>& level_gain,
                            const GridFunction& like) const;

private:
    int dim_ = 1, n_max_ = 0, level_cap_ = 0;
    CutoffA a_;
    GaussHermite rule_;
    std::size_t pair_index(int a1, int a2) const;
};

// sup-grid residual of (-Δ + |x|²) H_alpha - (2|alpha|+d) H_alpha with the
// Laplacian by central differences on the given lattice geometry.
double eigen_check(const std::vector<int>& alpha, const GridFunction& geometry);

// Per-n sup over an (x, y) probe grid of
// |∂_x^α H_n^a(x,y)| (1 + 2^n|x-y|)^k / 2^{n(|α|+d)}, d = 1 only.
std::vector<double> kernel_bound_ratio(const DyadicBlockSet& blocks, int alpha, int k);

/// Density of T*_delta mu: Phi_delta(y) Σ_i w_i gamma_delta(X_i - y) sampled on
// the grid geometry; Phi_delta is 1 on B_{1/delta}, 0 outside B_{1+1/delta}.
GridFunction regularize(const ParticleMeasure& mu, double delta, const GridFunction& geometry);

} // namespace reglaw
