#include "reglaw/rates.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace reglaw {

namespace {

struct Coeffs {
    double c0, p, s;
};

Coeffs solve(const std::vector<double>& x, const std::vector<double>& y,
             int skip) {
    int n = static_cast<int>(x.size());
    int rows = (skip >= 0) ? n - 1 : n;
    Eigen::MatrixXd A(rows, 3);
    Eigen::VectorXd b(rows);
    int r = 0;
    for (int i = 0; i < n; ++i) {
        if (i == skip) continue;
        double lx = std::log(x[i]);
        A(r, 0) = 1.0;
        A(r, 1) = lx;
        A(r, 2) = std::log(std::abs(lx));
        b(r) = std::log(y[i]);
        ++r;
    }
    Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    return {c(0), c(1), c(2)};
}

} // namespace

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 4)
        throw rate_error("need at least 4 points");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw rate_error("rate fit requires positive data");

    RateFit fit;
    fit.x = x;
    fit.y = y;
    Coeffs full = solve(x, y, -1);
    fit.exponent = full.p;
    fit.log_power = full.s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Coeffs c = solve(x, y, static_cast<int>(i));
        fit.exponent_ci = std::max(fit.exponent_ci, std::abs(c.p - full.p));
        fit.log_power_ci = std::max(fit.log_power_ci, std::abs(c.s - full.s));
        double lx = std::log(x[i]);
        double pred = full.c0 + full.p * lx + full.s * std::log(std::abs(lx));
        fit.max_residual = std::max(fit.max_residual, std::abs(pred - std::log(y[i])));
    }
    return fit;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw rate_error("need at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw rate_error("slope fit requires positive data");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace reglaw
