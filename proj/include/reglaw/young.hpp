#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "reglaw/grid.hpp"

namespace reglaw {

struct young_error : std::runtime_error {
    explicit young_error(const std::string& what) : std::runtime_error(what) {}
};

// Convex symmetric gauge e with e(0)=0 restricted to the doubling class:
// e(2s) <= lambda e(s) and s -> e(s)/s nondecreasing, both certified on a
// log-spaced grid at construction. User-supplied gauges failing the class
// checks are rejected.
class YoungFunction {
public:
    static YoungFunction power(double p);                 // |s|^p, p >= 1
    static YoungFunction log_entropy();                   // (1+|s|)ln(1+|s|)
    static YoungFunction loglog();                        // (1+|s|)ln(1+ln(1+|s|))
    static YoungFunction custom(std::function<double(double)> e, std::string label);
    static YoungFunction from_label(const std::string& label); // "power:p", "log_entropy", "loglog"

    double operator()(double s) const;
    const std::string& label() const { return label_; }
    double doubling_constant() const { return lambda_; }

    // sup{c : e(c) <= a}, by bisection (analytic for power gauges).
    double inverse(double a) const;
    double beta(double R) const;   // R / e^{-1}(R)
    double phi(double r) const;    // 1 / e^{-1}(1/r)

    // Legendre transform sup_t (s t - e(t)), golden-section with analytic
    // fast path for power gauges.
    YoungFunction conjugate() const;

private:
    YoungFunction(std::function<double(double)> e, std::string label, double power_p,
                  bool validate);
    void certify_class();

    std::function<double(double)> e_;
    std::string label_;
    double power_p_ = 0.0; // > 0 iff a pure power gauge
    double lambda_ = 1.0;
};

// Luxembourg norm inf{c>0 : ∫ e(f/c) <= 1} on the grid quadrature;
// bracketing + bisection to relative tolerance 1e-8 (max 200 iterations).
double luxembourg_norm(const GridFunction& f, const YoungFunction& e);

// Σ_{|γ|<=l} Σ_{|α|<=k} ‖x^γ ∂_α f‖_(e). Central differences; a buffer of
// k+2 lattice cells at the box edges is excluded from the norms.
double weighted_sobolev_orlicz_norm(const GridFunction& f, int k, int l,
                                    const YoungFunction& e);

// Unweighted variants: Σ_{|α|<=k} ‖∂_α f‖_(e) and Σ_{|α|<=k} ‖∂_α f‖_∞.
double sobolev_orlicz_norm(const GridFunction& f, int k, const YoungFunction& e);
double sobolev_sup_norm(const GridFunction& f, int k);

// 2‖f‖_(e)‖g‖_(e*) − |∫ fg|; nonnegative up to quadrature tolerance.
double holder_defect(const GridFunction& f, const GridFunction& g, const YoungFunction& e);

// All multi-indices alpha >= 0 in `dim` axes with |alpha| <= k.
std::vector<std::vector<int>> multi_indices_up_to(int dim, int k);

} // namespace reglaw
