#include "reglaw/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace reglaw {

double norm_Y(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += std::abs(v);
    return s;
}

double norm_X(const ToyPair& pair, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += pair.w[i] * std::abs(y[i]);
    return s;
}

double k_functional(const ToyPair& pair, const std::vector<double>& y, double t) {
    if (!(t > 0.0)) throw interp_error("K-functional needs t > 0");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        s += std::abs(y[i]) * std::min(1.0, t * pair.w[i]);
    return s;
}

double gamma_b_norm(const ToyPair& pair, const std::vector<double>& y, double gamma, double b) {
    if (gamma >= 1.0) throw interp_error("divergent regime: gamma >= 1");
    if (norm_Y(y) == 0.0) return 0.0;
    // substitute t = e^{-s}: ∫_0^∞ e^{γ s} s^b K(y, e^{-s}) ds.
    double wmax = 1.0;
    for (double w : pair.w) wmax = std::max(wmax, w);
    double S = std::log(wmax) + (b + 45.0) / (1.0 - gamma);
    const int n = 40001; // composite Simpson (odd count)
    const double h = S / (n - 1);
    auto f = [&](double s) {
        double val = std::exp(gamma * s) * k_functional(pair, y, std::exp(-s));
        return (b == 0.0) ? val : val * std::pow(s, b);
    };
    double acc = f(1e-12) + f(S);
    for (int i = 1; i + 1 < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double rho_norm(const ToyPair& pair, const std::vector<double>& y, double theta, int m, double a) {
    double ny = norm_Y(y);
    if (ny == 0.0) return 0.0;
    double sum = 0.0;
    int settled = 0;
    for (int n = 1; n <= 2000; ++n) {
        double gy = std::pow(2.0, n * theta) * std::pow(static_cast<double>(n), a);
        double gx = std::pow(2.0, -2.0 * n * m);
        double term = 0.0;
        bool all_keep = true;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double keep = gx * pair.w[i] * std::abs(y[i]); // x_{n,i} = y_i
            double drop = gy * std::abs(y[i]);             // x_{n,i} = 0
            term += std::min(keep, drop);
            if (drop < keep) all_keep = false;
        }
        sum += term;
        if (sum > 1e14 * ny) return std::numeric_limits<double>::infinity();
        if (all_keep && term < 1e-12 * sum) {
            if (++settled >= 2) break;
        } else {
            settled = 0;
        }
    }
    return sum;
}

double dist_to_ball(const ToyPair& pair, const std::vector<double>& y, double R) {
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pair.w[a] < pair.w[b]; });
    double budget = R;
    double residual = norm_Y(y);
    for (std::size_t i : order) {
        double cost = pair.w[i] * std::abs(y[i]);
        if (cost <= budget) {
            budget -= cost;
            residual -= std::abs(y[i]);
        } else {
            residual -= std::abs(y[i]) * (budget / cost);
            budget = 0.0;
            break;
        }
    }
    return std::max(0.0, residual);
}

NormEquivalenceReport prop_norm_equivalence(const ToyPair& pair,
                                            const std::vector<std::vector<double>>& samples,
                                            double theta, int m, double a) {
    const double gamma = theta / (2.0 * m + theta);
    const double b = 2.0 * m * a / (2.0 * m + theta);
    NormEquivalenceReport rep;
    rep.proof_C = std::pow(2.0, 2.0 * m + theta + a + 1.0);
    for (const auto& y : samples) {
        double rho = rho_norm(pair, y, theta, m, a);
        double kb = gamma_b_norm(pair, y, gamma, b);
        if (!std::isfinite(rho) || !std::isfinite(kb) || kb <= 0.0) {
            ++rep.failures;
            continue;
        }
        rep.best_C = std::max(rep.best_C, rho / kb);
        rep.best_C = std::max(rep.best_C, kb / (norm_Y(y) + rho));
    }
    rep.holds = rep.failures == 0 && std::isfinite(rep.best_C);
    return rep;
}

BalanceInclusionWitness prop_balance_inclusion(const ToyPair& pair,
                                               const std::vector<double>& y,
                                               double theta, int m, double a) {
    const double alpha = theta / (2.0 * m);
    const double beta = 2.0 + a + theta / m;
    BalanceInclusionWitness out;
    double limsup = 0.0;
    for (int i = 0; i <= 40; ++i) {
        double R = std::pow(2.0, 3.0 + i);
        double d = dist_to_ball(pair, y, R);
        limsup = std::max(limsup, std::pow(R, alpha) * std::pow(std::log(R), beta) * d);
    }
    out.b_limsup = limsup;
    out.b_condition_finite = std::isfinite(limsup);

    double sum = 0.0;
    double prev_tail = std::numeric_limits<double>::infinity();
    bool stable = false;
    for (int n = 1; n <= 400; ++n) {
        double Rn = std::pow(static_cast<double>(n), -a) * std::pow(2.0, 2.0 * n * m);
        double dn = dist_to_ball(pair, y, Rn);
        double xn = std::min(norm_X(pair, y), Rn);
        double term = std::pow(2.0, n * theta) * std::pow(static_cast<double>(n), a) * dn +
                      std::pow(2.0, -2.0 * n * m) * xn;
        sum += term;
        if (!std::isfinite(sum) || sum > 1e14 * (1.0 + norm_Y(y))) {
            stable = false;
            break;
        }
        if (n >= 8 && term < 1e-10 * (1.0 + sum) && term <= prev_tail) {
            stable = true;
            break;
        }
        prev_tail = term;
    }
    out.pi_value = sum;
    out.witness_converges = stable && std::isfinite(sum);
    return out;
}

bool balance_witness_chain(int m, double a, int n_hi) {
    int last_fail = 0;
    for (int n = 2; n <= n_hi; ++n) {
        double lnR = -a * std::log(static_cast<double>(n)) + 2.0 * n * m * std::log(2.0);
        double lnL = lnR + a * std::log(lnR);
        double lower = 2.0 * n * m * std::log(2.0);
        double upper = a * std::log(2.0 * m) + lower;
        if (lnL < lower - 1e-12 || lnL > upper + 1e-12) last_fail = n;
    }
    // small-n violations are allowed; the chain must hold from then on
    return n_hi > 10 && last_fail <= 10;
}

} // namespace reglaw
