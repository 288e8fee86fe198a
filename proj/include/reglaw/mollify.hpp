#pragma once

#include <stdexcept>
#include <vector>

#include "reglaw/dictionary.hpp"
#include "reglaw/grid.hpp"
#include "reglaw/young.hpp"

namespace reglaw {

struct mollify_error : std::runtime_error {
    explicit mollify_error(const std::string& what) : std::runtime_error(what) {}
};

// Compactly supported mollifier phi(y) = p(|y|²) chi(|y|) with support in the
// unit ball, unit mass, and all moments of order 1..M vanishing. p solves a
// small radial moment system (odd moments vanish by symmetry).
class SuperKernel {
public:
    static SuperKernel build(int dim, int M);

    int dim() const { return dim_; }
    int moment_order() const { return M_; }
    double operator()(std::span<const double> y) const;
    double radial(double r) const; // phi as a function of |y|
    double condition_number() const { return condition_; }

private:
    int dim_ = 1, M_ = 0;
    std::vector<double> poly_; // coefficients of p in s = r²
    double condition_ = 0.0;
};

// f * phi_delta with phi_delta(y) = delta^{-d} phi(y/delta), direct quadrature.
GridFunction mollify(const GridFunction& f, const SuperKernel& kern, double delta);

// log-log slope of the dual-dictionary estimate of ‖f - f_delta‖_{W*^{k,∞}}.
double rate_smoothing(const GridFunction& f, const SuperKernel& kern, int q, int k,
                      const TestDictionary& dict, const std::vector<double>& deltas);

// log-log slope of ‖f_delta‖_{n,l,(e)} vs delta.
double rate_blowup(const GridFunction& f, const SuperKernel& kern, int n, int l,
                   const YoungFunction& e, const std::vector<double>& deltas);

} // namespace reglaw
