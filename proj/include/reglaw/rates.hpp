#pragma once

#include <stdexcept>
#include <vector>

namespace reglaw {

// Least squares of log y on (log x, log|log x|). The log-power exponent is a
// low-resolution instrument; consumers use wide (±1) tolerances on it.
struct RateFit {
    std::vector<double> x, y;
    double exponent = 0.0;      // coefficient of log x
    double exponent_ci = 0.0;   // leave-one-out spread
    double log_power = 0.0;     // coefficient of log|log x|
    double log_power_ci = 0.0;
    double max_residual = 0.0;  // in log space
};

struct rate_error : std::runtime_error {
    explicit rate_error(const std::string& what) : std::runtime_error(what) {}
};

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y);

// Plain power fit (no log|log| regressor): slope of log y vs log x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace reglaw
