#include "reglaw/ibp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "reglaw/hermite.hpp"
#include "reglaw/parallel.hpp"
#include "reglaw/rng.hpp"
#include "reglaw/young.hpp"

namespace reglaw {

namespace {

// Sparse multivariate polynomial keyed by exponent tuple.
struct Poly {
    std::map<std::vector<int>, double> terms;

    static Poly one(int d) {
        Poly p;
        p.terms[std::vector<int>(static_cast<std::size_t>(d), 0)] = 1.0;
        return p;
    }

    double eval(std::span<const double> x) const {
        double s = 0.0;
        for (const auto& [e, c] : terms) {
            double t = c;
            for (std::size_t a = 0; a < e.size(); ++a)
                for (int r = 0; r < e[a]; ++r) t *= x[a];
            s += t;
        }
        return s;
    }

    Poly deriv(int axis) const {
        Poly out;
        for (const auto& [e, c] : terms) {
            if (e[static_cast<std::size_t>(axis)] == 0) continue;
            std::vector<int> f = e;
            double coef = c * f[static_cast<std::size_t>(axis)];
            --f[static_cast<std::size_t>(axis)];
            out.terms[f] += coef;
        }
        return out;
    }

    // this * (c0 + Σ_a lin[a] x_a)
    Poly mul_affine(double c0, std::span<const double> lin) const {
        Poly out;
        for (const auto& [e, c] : terms) {
            if (c0 != 0.0) out.terms[e] += c * c0;
            for (std::size_t a = 0; a < lin.size(); ++a) {
                if (lin[a] == 0.0) continue;
                std::vector<int> f = e;
                ++f[a];
                out.terms[f] += c * lin[a];
            }
        }
        return out;
    }

    Poly minus(const Poly& other) const {
        Poly out = *this;
        for (const auto& [e, c] : other.terms) out.terms[e] -= c;
        return out;
    }
};

// Weight-polynomial factory for one Gaussian (mean, cov).
class GaussianWeights {
public:
    GaussianWeights(const std::vector<double>& mean, const std::vector<double>& cov, int order)
        : d_(static_cast<int>(mean.size())), mean_(mean) {
        Eigen::MatrixXd C(d_, d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                C(i, j) = cov[static_cast<std::size_t>(i * d_ + j)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
        if (es.eigenvalues().minCoeff() < 1e-12)
            throw ibp_error("singular covariance");
        inv_ = C.inverse();
        chol_ = Eigen::LLT<Eigen::MatrixXd>(C).matrixL();
        build(order);
    }

    // z = L * g + mean for standard normals g.
    void sample(std::span<const double> g, std::span<double> out) const {
        for (int i = 0; i < d_; ++i) {
            double s = mean_[static_cast<std::size_t>(i)];
            for (int j = 0; j <= i; ++j) s += chol_(i, j) * g[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = s;
        }
    }

    const std::map<std::vector<int>, Poly>& weights() const { return weights_; }

    double eval(const std::vector<int>& alpha, std::span<const double> x) const {
        return weights_.at(alpha).eval(x);
    }

private:
    void build(int order) {
        std::map<std::vector<int>, Poly> done;
        done[std::vector<int>(static_cast<std::size_t>(d_), 0)] = Poly::one(d_);
        for (const auto& alpha : multi_indices_up_to(d_, order)) {
            int total = 0;
            for (int v : alpha) total += v;
            if (total == 0) continue;
            ensure(alpha, done);
        }
        for (auto& [k, v] : done) {
            int total = 0;
            for (int e : k) total += e;
            if (total >= 1) weights_[k] = v;
        }
    }

    void ensure(const std::vector<int>& alpha, std::map<std::vector<int>, Poly>& done) {
        if (done.count(alpha)) return;
        // reduce along the first nonzero axis
        int axis = 0;
        while (alpha[static_cast<std::size_t>(axis)] == 0) ++axis;
        std::vector<int> prev = alpha;
        --prev[static_cast<std::size_t>(axis)];
        ensure(prev, done);
        const Poly& H = done.at(prev);
        double c0 = 0.0;
        std::vector<double> lin(static_cast<std::size_t>(d_));
        for (int j = 0; j < d_; ++j) {
            lin[static_cast<std::size_t>(j)] = inv_(axis, j);
            c0 -= inv_(axis, j) * mean_[static_cast<std::size_t>(j)];
        }
        done[alpha] = H.mul_affine(c0, lin).minus(H.deriv(axis));
    }

    int d_;
    std::vector<double> mean_;
    Eigen::MatrixXd inv_, chol_;
    std::map<std::vector<int>, Poly> weights_;
};

} // namespace

IbpSample gaussian_ibp_weights(const std::vector<double>& mean,
                               const std::vector<double>& cov, int order,
                               std::size_t n_samples, std::uint64_t seed) {
    const int d = static_cast<int>(mean.size());
    GaussianWeights gw(mean, cov, order);
    std::vector<double> pos(n_samples * static_cast<std::size_t>(d));
    std::vector<double> w(n_samples, 1.0 / static_cast<double>(n_samples));
    parallel_for(n_samples, default_workers(), [&](std::size_t i) {
        RngStream rng(seed, i);
        std::vector<double> g(static_cast<std::size_t>(d));
        for (auto& v : g) v = rng.normal();
        gw.sample(g, {pos.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)});
    });
    ParticleMeasure mu(d, std::move(pos), std::move(w));
    for (const auto& [alpha, poly] : gw.weights()) {
        std::vector<double> vals(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) vals[i] = poly.eval(mu.position(i));
        mu.ibp_weights()[alpha] = std::move(vals);
    }
    IbpSample s;
    s.mu = std::move(mu);
    s.order = order;
    s.generator = "gaussian";
    return s;
}

void attach_conditional_gaussian_weights(ParticleMeasure& cloud,
                                         const std::vector<std::vector<double>>& means,
                                         const std::vector<std::vector<double>>& covs,
                                         int order) {
    const std::size_t n = cloud.count();
    if (means.size() != n || covs.size() != n)
        throw ibp_error("per-particle Gaussian parameter count mismatch");
    const int d = cloud.dim();
    auto alphas = multi_indices_up_to(d, order);
    std::vector<std::vector<int>> keys;
    for (const auto& a : alphas) {
        int t = 0;
        for (int v : a) t += v;
        if (t >= 1) keys.push_back(a);
    }
    std::vector<std::vector<double>> vals(keys.size(), std::vector<double>(n, 0.0));
    parallel_for(n, default_workers(), [&](std::size_t i) {
        GaussianWeights gw(means[i], covs[i], order);
        for (std::size_t k = 0; k < keys.size(); ++k)
            vals[k][i] = gw.eval(keys[k], cloud.position(i));
    });
    for (std::size_t k = 0; k < keys.size(); ++k)
        cloud.ibp_weights()[keys[k]] = std::move(vals[k]);
}

SobolevBound measure_sobolev_norm(const ParticleMeasure& mu, int m, double p) {
    const int d = mu.dim();
    if (!(p > d)) throw ibp_error("need p > d");
    double tv = mu.total_variation();
    auto pth_moment_sum = [&](int up_to) {
        double s = 1.0; // E|1|^p for a probability cloud
        for (const auto& [alpha, vals] : mu.ibp_weights()) {
            int total = 0;
            for (int v : alpha) total += v;
            if (total < 1 || total > up_to) continue;
            double acc = 0.0;
            for (std::size_t i = 0; i < vals.size(); ++i)
                acc += std::abs(mu.weight(i)) * std::pow(std::abs(vals[i]), p);
            s += acc / tv;
        }
        return s;
    };
    bool have_m = false;
    for (const auto& [alpha, vals] : mu.ibp_weights()) {
        int total = 0;
        for (int v : alpha) total += v;
        if (total == m) have_m = true;
    }
    if (m >= 1 && !have_m) throw ibp_error("weights missing at order " + std::to_string(m));
    SobolevBound out;
    out.norm = std::pow(pth_moment_sum(m), 1.0 / p);
    double w1 = std::pow(pth_moment_sum(1), 1.0 / p);
    double kdp = (d - 1.0) / (1.0 - d / p);
    out.c_mp = std::pow(w1, kdp) * out.norm;
    return out;
}

std::vector<double> poisson_kernel_grad(int d, std::span<const double> x) {
    std::vector<double> g(static_cast<std::size_t>(d), 0.0);
    if (d == 1) {
        // symmetric fundamental solution |x|/2, gradient sign(x)/2
        g[0] = x[0] > 0.0 ? 0.5 : (x[0] < 0.0 ? -0.5 : 0.0);
        return g;
    }
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    if (r2 == 0.0) throw ibp_error("kernel gradient singular at the origin");
    double omega = 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
    double denom = omega * std::pow(std::sqrt(r2), d);
    for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] / denom;
    return g;
}

namespace {

double plateau_deriv(double r, double r1, double r2) {
    double u = (r - r1) / (r2 - r1);
    if (u <= 0.0 || u >= 1.0) return 0.0;
    double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    double ap = a / (u * u), bp = -b / ((1.0 - u) * (1.0 - u));
    double sp = (ap * b - a * bp) / ((a + b) * (a + b));
    return -sp / (r2 - r1);
}

} // namespace

DensityEstimate mt_density(const ParticleMeasure& mu, std::span<const double> x,
                           double r1, double r2) {
    const int d = mu.dim();
    std::vector<const std::vector<double>*> H(static_cast<std::size_t>(d), nullptr);
    for (int i = 0; i < d; ++i) {
        std::vector<int> alpha(static_cast<std::size_t>(d), 0);
        alpha[static_cast<std::size_t>(i)] = 1;
        auto it = mu.ibp_weights().find(alpha);
        if (it == mu.ibp_weights().end()) throw ibp_error("first-order weights missing");
        H[static_cast<std::size_t>(i)] = &it->second;
    }
    std::vector<double> z(static_cast<std::size_t>(d));
    double est = 0.0, sq = 0.0, wsum = 0.0;
    std::size_t effective = 0;
    for (std::size_t i = 0; i < mu.count(); ++i) {
        auto xi = mu.position(i);
        double r = 0.0;
        for (int a = 0; a < d; ++a) {
            z[static_cast<std::size_t>(a)] = xi[static_cast<std::size_t>(a)] - x[static_cast<std::size_t>(a)];
            r += z[static_cast<std::size_t>(a)] * z[static_cast<std::size_t>(a)];
        }
        r = std::sqrt(r);
        double val = 0.0;
        if (r < r2 && r > 0.0) {
            ++effective;
            double psi = smooth_plateau(r, r1, r2);
            double dpsi = plateau_deriv(r, r1, r2);
            auto grad = poisson_kernel_grad(d, z);
            for (int a = 0; a < d; ++a) {
                double Hi = (*H[static_cast<std::size_t>(a)])[i];
                double dpsi_a = dpsi * z[static_cast<std::size_t>(a)] / r;
                val += grad[static_cast<std::size_t>(a)] * (psi * Hi - dpsi_a);
            }
        }
        double w = mu.weight(i);
        est += w * val;
        sq += w * w * val * val;
        wsum += w;
    }
    if (effective < 100) throw ibp_error("too few particles near the evaluation point");
    DensityEstimate out;
    out.value = est;
    // Weighted standard error; reduces to std/sqrt(n) for equal weights.
    double mean = est / (wsum != 0.0 ? wsum : 1.0);
    double sum_w2 = 0.0;
    for (std::size_t i = 0; i < mu.count(); ++i) sum_w2 += mu.weight(i) * mu.weight(i);
    out.se = std::sqrt(std::max(sq - mean * mean * sum_w2, 0.0));
    out.effective = effective;
    return out;
}

double weighted_moment(const ParticleMeasure& mu, int k) {
    double s = 0.0;
    for (std::size_t i = 0; i < mu.count(); ++i) {
        auto x = mu.position(i);
        double r = 0.0;
        for (double v : x) r += v * v;
        s += std::abs(mu.weight(i)) * std::pow(1.0 + std::sqrt(r), k);
    }
    return s;
}

std::vector<double> density_bound_check(const ParticleMeasure& mu, int m, int q, int k,
                                        const std::vector<std::vector<double>>& probes) {
    if (!mu.has_density()) throw ibp_error("density closure required");
    const int d = mu.dim();
    double p = 2.0 * (d + 1);
    SobolevBound sb = measure_sobolev_norm(mu, m, p);
    double mk = weighted_moment(mu, k);
    std::vector<double> ratios;
    const double h = 1e-3;
    for (const auto& x : probes) {
        double r = 0.0;
        for (double v : x) r += v * v;
        double u = std::pow(1.0 + std::sqrt(r), -0.5 * k);
        for (const auto& alpha : multi_indices_up_to(d, q)) {
            // ∂_α by a product central-difference stencil on the closure.
            std::vector<std::pair<std::vector<double>, double>> stencil = {{x, 1.0}};
            for (int axis = 0; axis < d; ++axis) {
                for (int rpt = 0; rpt < alpha[static_cast<std::size_t>(axis)]; ++rpt) {
                    std::vector<std::pair<std::vector<double>, double>> next;
                    for (const auto& [pt, c] : stencil) {
                        auto hi = pt, lo = pt;
                        hi[static_cast<std::size_t>(axis)] += h;
                        lo[static_cast<std::size_t>(axis)] -= h;
                        next.emplace_back(hi, c / (2.0 * h));
                        next.emplace_back(lo, -c / (2.0 * h));
                    }
                    stencil = std::move(next);
                }
            }
            double deriv = 0.0;
            for (const auto& [pt, c] : stencil) deriv += c * mu.density_at(pt);
            ratios.push_back(std::abs(deriv) / (sb.c_mp * std::sqrt(mk) * u));
        }
    }
    return ratios;
}

ParticleMeasure::Density gaussian_mixture_density(
    int dim, const std::vector<std::vector<double>>& means,
    const std::vector<std::vector<double>>& covs, const std::vector<double>& weights) {
    if (dim > 4) throw ibp_error("mixture density supports dim <= 4");
    const std::size_t n = means.size();
    if (covs.size() != n || weights.size() != n) throw ibp_error("mixture size mismatch");
    auto mdat = std::make_shared<std::vector<double>>();
    auto invcov = std::make_shared<std::vector<double>>();
    auto amp = std::make_shared<std::vector<double>>();
    mdat->reserve(n * static_cast<std::size_t>(dim));
    invcov->reserve(n * static_cast<std::size_t>(dim * dim));
    amp->reserve(n);
    const double tau = std::pow(2.0 * std::numbers::pi, 0.5 * dim);
    for (std::size_t i = 0; i < n; ++i) {
        mdat->insert(mdat->end(), means[i].begin(), means[i].end());
        Eigen::MatrixXd C(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                C(a, b) = covs[i][static_cast<std::size_t>(a * dim + b)];
        Eigen::MatrixXd M = C.inverse();
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) invcov->push_back(M(a, b));
        amp->push_back(weights[i] / (tau * std::sqrt(C.determinant())));
    }
    return [dim, n, mdat, invcov, amp](std::span<const double> y) {
        double acc = 0.0;
        std::array<double, 4> z{};
        for (std::size_t i = 0; i < n; ++i) {
            const double* m = mdat->data() + i * static_cast<std::size_t>(dim);
            const double* M = invcov->data() + i * static_cast<std::size_t>(dim * dim);
            for (int a = 0; a < dim; ++a)
                z[static_cast<std::size_t>(a)] = y[static_cast<std::size_t>(a)] - m[a];
            double q = 0.0;
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    q += z[static_cast<std::size_t>(a)] * M[a * dim + b] *
                         z[static_cast<std::size_t>(b)];
            if (q < 160.0) acc += (*amp)[i] * std::exp(-0.5 * q);
        }
        return acc;
    };
}

} // namespace reglaw
