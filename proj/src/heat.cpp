#include "reglaw/heat.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "reglaw/grid.hpp"
#include "reglaw/ibp.hpp"
#include "reglaw/parallel.hpp"
#include "reglaw/rng.hpp"
#include "reglaw/sde.hpp"
#include "reglaw/young.hpp"

namespace reglaw {

namespace {

double clog_gauge(double u, double h) {
    if (u <= 0.0) return 0.0;
    double l = std::abs(std::log(u));
    return l <= 1.0 ? 1.0 : std::pow(l, -(2.0 + h));
}

// One explicit step of u_t = u_xx with Neumann ghost cells: out = M u.
struct Stepper {
    int nx = 0;
    double lambda = 0.0;

    void forward(const std::vector<double>& u, std::vector<double>& out) const {
        out[0] = u[0] + 2.0 * lambda * (u[1] - u[0]);
        for (int i = 1; i < nx; ++i)
            out[static_cast<std::size_t>(i)] =
                u[static_cast<std::size_t>(i)] +
                lambda * (u[static_cast<std::size_t>(i + 1)] -
                          2.0 * u[static_cast<std::size_t>(i)] +
                          u[static_cast<std::size_t>(i - 1)]);
        out[static_cast<std::size_t>(nx)] =
            u[static_cast<std::size_t>(nx)] +
            2.0 * lambda * (u[static_cast<std::size_t>(nx - 1)] -
                            u[static_cast<std::size_t>(nx)]);
    }

    // out = M^T r, for propagator rows e_i^T M^p.
    void adjoint(const std::vector<double>& r, std::vector<double>& out) const {
        auto at = [&](int i) { return r[static_cast<std::size_t>(i)]; };
        out[0] = (1.0 - 2.0 * lambda) * at(0) + lambda * at(1);
        out[1] = 2.0 * lambda * at(0) + (1.0 - 2.0 * lambda) * at(1) + lambda * at(2);
        for (int j = 2; j <= nx - 2; ++j)
            out[static_cast<std::size_t>(j)] = lambda * at(j - 1) +
                                               (1.0 - 2.0 * lambda) * at(j) +
                                               lambda * at(j + 1);
        out[static_cast<std::size_t>(nx - 1)] = lambda * at(nx - 2) +
                                                (1.0 - 2.0 * lambda) * at(nx - 1) +
                                                2.0 * lambda * at(nx);
        out[static_cast<std::size_t>(nx)] =
            lambda * at(nx - 1) + (1.0 - 2.0 * lambda) * at(nx);
    }
};

void check_grid(int nx, long nt, double T) {
    if (nx < 8) throw heat_error("need nx >= 8");
    if (static_cast<double>(nt) < 4.0 * nx * nx * T)
        throw heat_error("unstable grid: need nt >= 4 nx^2 T");
}

} // namespace

void HeatModel::validate() const {
    if (!sigma || !drift || !u0) throw heat_error("model needs sigma, drift, u0");
    for (int i = 0; i <= 600; ++i) {
        double u = -6.0 + 12.0 * i / 600.0;
        double s = sigma(u);
        if (!(std::abs(s) < 1e6)) throw heat_error("sigma unbounded on probe grid");
        if (s < c_sigma - 1e-12) throw heat_error("sigma below the ellipticity floor");
    }
    if (clog_sigma) {
        RngStream rng(0x9eedULL, 7);
        double worst = 0.0;
        for (int p = 0; p < 2000; ++p) {
            double u = 6.0 * (2.0 * rng.uniform() - 1.0);
            double eps = std::pow(10.0, -12.0 + 11.5 * rng.uniform());
            worst = std::max(worst,
                             std::abs(sigma(u) - sigma(u + eps)) / clog_gauge(eps, h));
        }
        if (!(worst < 1e8)) throw heat_error("c_log modulus check failed");
    }
}

HeatModel HeatModel::additive() {
    HeatModel m;
    m.sigma = [](double) { return 1.0; };
    m.drift = [](double) { return 0.0; };
    m.u0 = [](double) { return 0.0; };
    m.c_sigma = 1.0;
    return m;
}

HeatModel HeatModel::clog(double h, double c0, double c1, double ustar) {
    HeatModel m;
    // lacunary cascade whose mean-square increment tracks |ln v|^{-2(2+h)}
    // over the field-increment scales the window decomposition probes
    std::vector<double> amps = clog_cascade_amplitudes(h, 2.5e-3, 4.5e-2);
    double z = 0.0;
    for (double a : amps) z += a;
    m.sigma = [c0, c1, ustar, amps = std::move(amps), z](double u) {
        double v = u - ustar, s = 0.0, p = 2.0;
        for (std::size_t k = 0; k < amps.size(); ++k) {
            if (amps[k] > 0.0)
                s += amps[k] * std::cos(p * v + 0.7 * static_cast<double>(k + 1));
            p *= 2.0;
        }
        return c0 + c1 * 0.5 * (1.0 + s / z);
    };
    m.drift = [](double) { return 0.0; };
    m.u0 = [](double) { return 0.0; };
    m.c_sigma = c0;
    m.h = h;
    m.clog_sigma = true;
    return m;
}

double neumann_kernel(double t, double x, double y, int n_terms) {
    if (!(t > 0.0)) throw heat_error("kernel needs t > 0");
    const double pi = std::numbers::pi;
    if (t < 1e-4) {
        double s = 0.0;
        for (int k = -3; k <= 3; ++k) {
            double z1 = x - y - 2.0 * k, z2 = x + y - 2.0 * k;
            s += std::exp(-z1 * z1 / (4.0 * t)) + std::exp(-z2 * z2 / (4.0 * t));
        }
        return s / std::sqrt(4.0 * pi * t);
    }
    double s = 1.0;
    const int cap = n_terms > 0 ? n_terms : 100000;
    for (int n = 1; n <= cap; ++n) {
        double a = std::exp(-static_cast<double>(n) * n * pi * pi * t);
        if (n_terms == 0 && 2.0 * a < 1e-14) break;
        s += 2.0 * a * std::cos(n * pi * x) * std::cos(n * pi * y);
    }
    return s;
}

std::vector<CovarianceRow> covariance_bounds(const std::vector<double>& points,
                                             const std::vector<double>& eps_grid) {
    const int d = static_cast<int>(points.size());
    if (d < 1) throw heat_error("need at least one point");
    std::vector<double> sorted(points);
    std::sort(sorted.begin(), sorted.end());
    for (double x : sorted)
        if (!(x > 0.0 && x < 1.0)) throw heat_error("points must be interior");
    for (int i = 1; i < d; ++i)
        if (sorted[static_cast<std::size_t>(i)] - sorted[static_cast<std::size_t>(i - 1)] < 1e-3)
            throw heat_error("points too close (spacing < 1e-3)");
    std::vector<CovarianceRow> out;
    for (double eps : eps_grid) {
        if (!(eps > 0.0)) throw heat_error("eps must be positive");
        Eigen::MatrixXd S(d, d);
        const int n = 801; // composite Simpson on s = v^2
        const double vmax = std::sqrt(eps);
        const double hstep = vmax / (n - 1);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                auto f = [&](double v) {
                    if (v <= 0.0)
                        return i == j ? 2.0 / std::sqrt(8.0 * std::numbers::pi) : 0.0;
                    return 2.0 * v *
                           neumann_kernel(2.0 * v * v, points[static_cast<std::size_t>(i)],
                                          points[static_cast<std::size_t>(j)]);
                };
                double acc = f(0.0) + f(vmax);
                for (int p = 1; p + 1 < n; ++p) acc += f(p * hstep) * (p % 2 ? 4.0 : 2.0);
                S(i, j) = S(j, i) = acc * hstep / 3.0;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
        CovarianceRow row;
        row.eps = eps;
        row.lo = es.eigenvalues().minCoeff() / std::sqrt(eps);
        row.hi = es.eigenvalues().maxCoeff() / std::sqrt(eps);
        out.push_back(row);
    }
    return out;
}

WalshResult walsh_simulate(const HeatModel& model, double T, int nx, long nt,
                           std::size_t n_real, std::uint64_t seed) {
    model.validate();
    check_grid(nx, nt, T);
    const double dt = T / static_cast<double>(nt);
    const double dx = 1.0 / nx;
    const double noise_sd = std::sqrt(dt / dx);
    const Stepper st{nx, dt / (dx * dx)};
    WalshResult out;
    out.nx = nx;
    out.n_real = n_real;
    out.fields.resize(n_real * static_cast<std::size_t>(nx + 1));
    parallel_for(n_real, default_workers(), [&](std::size_t r) {
        RngStream rng(seed, r);
        std::vector<double> u(static_cast<std::size_t>(nx + 1)), v(u.size());
        for (int i = 0; i <= nx; ++i)
            u[static_cast<std::size_t>(i)] = model.u0(static_cast<double>(i) * dx);
        for (long s = 0; s < nt; ++s) {
            st.forward(u, v);
            for (int i = 0; i <= nx; ++i) {
                double ui = u[static_cast<std::size_t>(i)];
                v[static_cast<std::size_t>(i)] +=
                    model.drift(ui) * dt + model.sigma(ui) * rng.normal() * noise_sd;
            }
            std::swap(u, v);
        }
        std::copy(u.begin(), u.end(),
                  out.fields.begin() + static_cast<long>(r) * (nx + 1));
    });
    return out;
}

S4Report s4_decomposition(const HeatModel& model, double T, double eps, int nx,
                          std::size_t n_real, std::uint64_t seed) {
    model.validate();
    const long nt = std::lround(std::ceil(4.0 * nx * nx * T));
    check_grid(nx, nt, T);
    const double dt = T / static_cast<double>(nt);
    const long n_win = std::max<long>(1, std::lround(eps / dt));
    if (n_win >= nt) throw heat_error("need eps < T");
    const double dx = 1.0 / nx;
    const double noise_sd = std::sqrt(dt / dx);
    const Stepper st{nx, dt / (dx * dx)};
    const int mid = nx / 2;

    std::vector<double> I2(n_real), J2(n_real), res(n_real);
    parallel_for(n_real, default_workers(), [&](std::size_t r) {
        RngStream rng(seed, r);
        const std::size_t nn = static_cast<std::size_t>(nx + 1);
        std::vector<double> u(nn), v(nn);
        for (int i = 0; i <= nx; ++i)
            u[static_cast<std::size_t>(i)] = model.u0(static_cast<double>(i) * dx);
        for (long s = 0; s < nt - n_win; ++s) {
            st.forward(u, v);
            for (int i = 0; i <= nx; ++i) {
                double ui = u[static_cast<std::size_t>(i)];
                v[static_cast<std::size_t>(i)] +=
                    model.drift(ui) * dt + model.sigma(ui) * rng.normal() * noise_sd;
            }
            std::swap(u, v);
        }
        std::vector<double> sigf(nn);
        for (std::size_t i = 0; i < nn; ++i) sigf[i] = model.sigma(u[i]);
        std::vector<double> a(u), io(nn, 0.0), ka(nn, 0.0);
        std::vector<double> va(nn), vi(nn), vk(nn);
        for (long s = 0; s < n_win; ++s) {
            st.forward(u, v);
            st.forward(a, va);
            st.forward(io, vi);
            st.forward(ka, vk);
            for (int i = 0; i <= nx; ++i) {
                std::size_t ii = static_cast<std::size_t>(i);
                double ui = u[ii];
                double su = model.sigma(ui), bu = model.drift(ui);
                double nzi = rng.normal() * noise_sd;
                v[ii] += bu * dt + su * nzi;
                va[ii] += sigf[ii] * nzi;
                vi[ii] += (su - sigf[ii]) * nzi;
                vk[ii] += bu * dt;
            }
            std::swap(u, v);
            std::swap(a, va);
            std::swap(io, vi);
            std::swap(ka, vk);
        }
        double rr = 0.0;
        for (std::size_t i = 0; i < nn; ++i)
            rr = std::max(rr, std::abs(u[i] - (a[i] + io[i] + ka[i])));
        res[r] = rr;
        I2[r] = io[static_cast<std::size_t>(mid)] * io[static_cast<std::size_t>(mid)];
        J2[r] = ka[static_cast<std::size_t>(mid)] * ka[static_cast<std::size_t>(mid)];
    });
    S4Report rep;
    rep.eps = static_cast<double>(n_win) * dt;
    for (std::size_t r = 0; r < n_real; ++r) {
        rep.mean_I2 += I2[r] / static_cast<double>(n_real);
        rep.mean_J2 += J2[r] / static_cast<double>(n_real);
        rep.max_residual = std::max(rep.max_residual, res[r]);
    }
    return rep;
}

S4Rates s4_moment_rates(const HeatModel& model, double T,
                        const std::vector<double>& eps_grid, int nx,
                        std::size_t n_real, std::uint64_t seed) {
    std::vector<double> eps, iratio, j2;
    for (double e : eps_grid) {
        S4Report rep = s4_decomposition(model, T, e, nx, n_real, seed);
        eps.push_back(rep.eps);
        iratio.push_back(rep.mean_I2 / std::sqrt(rep.eps));
        j2.push_back(rep.mean_J2);
    }
    S4Rates out;
    auto all_zero = [](const std::vector<double>& v) {
        for (double x : v)
            if (x > 0.0) return false;
        return true;
    };
    // a driftless model has J = 0 and an additive one has I = 0; leave the
    // corresponding fit at its default instead of fitting log of zero
    if (!all_zero(iratio)) out.i_ratio = fit_rate(eps, iratio);
    if (!all_zero(j2)) out.j_moment = fit_rate(eps, j2);
    return out;
}

BalanceReport spde_verdict(const HeatModel& model, const std::vector<double>& points,
                           const SpdeParams& params, const std::vector<double>& eps_grid,
                           const TestDictionary& dict) {
    model.validate();
    const int d = static_cast<int>(points.size());
    if (d < 1 || d > 3) throw heat_error("need 1 to 3 observation points");
    if (dict.dim() != d) throw heat_error("dictionary dimension mismatch");
    const int nx = params.nx;
    const long nt = std::lround(std::ceil(4.0 * nx * nx * params.T));
    check_grid(nx, nt, params.T);
    const double dt = params.T / static_cast<double>(nt);
    const double dx = 1.0 / nx;
    const double noise_sd = std::sqrt(dt / dx);
    const Stepper st{nx, dt / (dx * dx)};
    const std::size_t nn = static_cast<std::size_t>(nx + 1);
    std::vector<int> nodes;
    for (double x : points) {
        int node = static_cast<int>(std::lround(x * nx));
        if (node <= 0 || node >= nx) throw heat_error("points must be interior");
        nodes.push_back(node);
    }
    const YoungFunction e = YoungFunction::log_entropy();
    const std::size_t n_real = params.n_real;

    BalanceReport rep;
    rep.q = params.q;
    rep.k = params.k;
    rep.m = params.m;
    rep.e_label = e.label();
    rep.a = params.a;
    std::vector<std::pair<double, double>> curve;
    nlohmann::ordered_json sandwich = nlohmann::ordered_json::array();
    for (double eps : eps_grid) {
        const long n_win = std::max<long>(1, std::lround(eps / dt));
        if (n_win >= nt) throw heat_error("need eps < T");
        const double eps_eff = static_cast<double>(n_win) * dt;
        // propagator rows K[p] = (M^T)^p e_node, p = 0..n_win, per point
        std::vector<std::vector<std::vector<double>>> K(static_cast<std::size_t>(d));
        for (int p = 0; p < d; ++p) {
            std::vector<double> r(nn, 0.0);
            r[static_cast<std::size_t>(nodes[static_cast<std::size_t>(p)])] = 1.0;
            K[static_cast<std::size_t>(p)].push_back(r);
            std::vector<double> next(nn);
            for (long s = 1; s <= n_win; ++s) {
                st.adjoint(r, next);
                r = next;
                K[static_cast<std::size_t>(p)].push_back(r);
            }
        }
        // S_ij[y] = sum_{p < n_win} K_i[p][y] K_j[p][y]
        std::vector<std::vector<double>> S(static_cast<std::size_t>(d * d),
                                           std::vector<double>(nn, 0.0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (long p = 0; p < n_win; ++p)
                    for (std::size_t y = 0; y < nn; ++y)
                        S[static_cast<std::size_t>(i * d + j)][y] +=
                            K[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)][y] *
                            K[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)][y];

        std::vector<double> U(n_real * static_cast<std::size_t>(d));
        std::vector<double> Ufr(n_real * static_cast<std::size_t>(d));
        std::vector<double> meansflat(n_real * static_cast<std::size_t>(d));
        std::vector<double> covflat(n_real * static_cast<std::size_t>(d * d));
        parallel_for(n_real, default_workers(), [&](std::size_t r) {
            RngStream rng(params.seed, r);
            std::vector<double> u(nn), v(nn);
            for (int i = 0; i <= nx; ++i)
                u[static_cast<std::size_t>(i)] = model.u0(static_cast<double>(i) * dx);
            for (long s = 0; s < nt - n_win; ++s) {
                st.forward(u, v);
                for (std::size_t i = 0; i < nn; ++i)
                    v[i] += model.drift(u[i]) * dt + model.sigma(u[i]) * rng.normal() * noise_sd;
                std::swap(u, v);
            }
            std::vector<double> sigf(nn);
            for (std::size_t i = 0; i < nn; ++i) sigf[i] = model.sigma(u[i]);
            std::vector<double> uf(u), a(u), va(nn);
            for (long s = 0; s < n_win; ++s) {
                st.forward(u, v);
                st.forward(a, va);
                for (std::size_t i = 0; i < nn; ++i) {
                    double nzi = rng.normal() * noise_sd;
                    v[i] += model.drift(u[i]) * dt + model.sigma(u[i]) * nzi;
                    va[i] += sigf[i] * nzi;
                }
                std::swap(u, v);
                std::swap(a, va);
            }
            for (int p = 0; p < d; ++p) {
                std::size_t pp = static_cast<std::size_t>(p);
                U[r * static_cast<std::size_t>(d) + pp] =
                    u[static_cast<std::size_t>(nodes[pp])];
                Ufr[r * static_cast<std::size_t>(d) + pp] =
                    a[static_cast<std::size_t>(nodes[pp])];
                double mn = 0.0;
                for (std::size_t y = 0; y < nn; ++y)
                    mn += K[pp][static_cast<std::size_t>(n_win)][y] * uf[y];
                meansflat[r * static_cast<std::size_t>(d) + pp] = mn;
            }
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double c = 0.0;
                    const auto& Sij = S[static_cast<std::size_t>(i * d + j)];
                    for (std::size_t y = 0; y < nn; ++y)
                        c += sigf[y] * sigf[y] * Sij[y];
                    covflat[r * static_cast<std::size_t>(d * d) +
                            static_cast<std::size_t>(i * d + j)] = c * dt / dx;
                }
        });

        std::vector<double> vals(dict.size(), 0.0);
        parallel_for(dict.size(), default_workers(), [&](std::size_t j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n_real; ++r) {
                std::span<const double> xt(U.data() + r * static_cast<std::size_t>(d),
                                           static_cast<std::size_t>(d));
                std::span<const double> xf(Ufr.data() + r * static_cast<std::size_t>(d),
                                           static_cast<std::size_t>(d));
                s += dict.eval(j, xt) - dict.eval(j, xf);
            }
            vals[j] = std::abs(s) / (static_cast<double>(n_real) * dict.k_norm(j, params.k));
        });
        double d1 = *std::max_element(vals.begin(), vals.end());

        double sand_lo = 1e300, sand_hi = 0.0;
        std::vector<std::vector<double>> means(n_real), covs(n_real);
        for (std::size_t r = 0; r < n_real; ++r) {
            means[r].assign(meansflat.begin() + static_cast<long>(r) * d,
                            meansflat.begin() + static_cast<long>(r + 1) * d);
            covs[r].assign(covflat.begin() + static_cast<long>(r) * d * d,
                           covflat.begin() + static_cast<long>(r + 1) * d * d);
            Eigen::MatrixXd C(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    C(i, j) = covs[r][static_cast<std::size_t>(i * d + j)];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
            sand_lo = std::min(sand_lo, es.eigenvalues().minCoeff() / std::sqrt(eps_eff));
            sand_hi = std::max(sand_hi, es.eigenvalues().maxCoeff() / std::sqrt(eps_eff));
        }
        std::vector<double> w(n_real, 1.0 / static_cast<double>(n_real));
        auto dens = gaussian_mixture_density(d, means, covs, w);
        std::vector<double> lo(static_cast<std::size_t>(d), 1e300),
            hi(static_cast<std::size_t>(d), -1e300);
        for (std::size_t r = 0; r < n_real; ++r)
            for (int p = 0; p < d; ++p) {
                double x = Ufr[r * static_cast<std::size_t>(d) + static_cast<std::size_t>(p)];
                lo[static_cast<std::size_t>(p)] = std::min(lo[static_cast<std::size_t>(p)], x - 0.75);
                hi[static_cast<std::size_t>(p)] = std::max(hi[static_cast<std::size_t>(p)], x + 0.75);
            }
        GridFunction g(lo, hi, std::vector<int>(static_cast<std::size_t>(d), params.grid_points));
        parallel_for(g.size(), default_workers(), [&](std::size_t i) {
            std::vector<double> x(static_cast<std::size_t>(d));
            g.point(i, x);
            g[i] = dens(x);
        });
        double norm = weighted_sobolev_orlicz_norm(g, 2 * params.m, 2 * params.m, e);

        double R = std::pow(eps_eff, -0.5 * params.m);
        LevelRow row;
        row.level = eps_eff;
        row.R = R;
        row.dk = d1;
        row.norm = norm;
        rep.table.push_back(row);
        curve.emplace_back(R, d1);
        sandwich.push_back({{"eps", eps_eff}, {"lo", sand_lo}, {"hi", sand_hi}});
    }
    HqResult hq = hypothesis_Hq_statistic(curve, params.q, params.k, params.m, e,
                                          params.a, d);
    rep.limsup_statistic = hq.limsup;
    rep.trend_slope = hq.slope;
    rep.verdict = hq.regular ? "regular" : "inconclusive";
    rep.provenance["nx"] = nx;
    rep.provenance["nt"] = nt;
    rep.provenance["n_real"] = n_real;
    rep.provenance["seed"] = params.seed;
    rep.provenance["points"] = points;
    rep.provenance["covariance_sandwich"] = sandwich;
    rep.provenance["dictionary_defect"] = dict.defect();
    return rep;
}

} // namespace reglaw
