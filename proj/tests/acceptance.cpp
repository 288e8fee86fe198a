// Acceptance gate: one criterion per invocation (argv[1] in 1..12), each
// printing a pass/fail line per sub-check. Exit 0 iff every sub-check passes.
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "reglaw/balance.hpp"
#include "reglaw/dictionary.hpp"
#include "reglaw/experiment.hpp"
#include "reglaw/grid.hpp"
#include "reglaw/heat.hpp"
#include "reglaw/hermite.hpp"
#include "reglaw/ibp.hpp"
#include "reglaw/interp.hpp"
#include "reglaw/measure.hpp"
#include "reglaw/mollify.hpp"
#include "reglaw/rates.hpp"
#include "reglaw/rng.hpp"
#include "reglaw/sde.hpp"
#include "reglaw/young.hpp"

using namespace reglaw;
using nlohmann::ordered_json;

namespace {

bool g_all = true;

void check(bool ok, const char* name, const std::string& detail) {
    g_all = g_all && ok;
    std::printf("  [%s] %s: %s\n", ok ? "pass" : "FAIL", name, detail.c_str());
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1. Hermite core: orthonormality, partition of unity, eigen-residual order.
void criterion1() {
    GaussHermite rule = GaussHermite::build(96);
    std::vector<std::vector<double>> vals(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        hermite_all(64, rule.nodes[i], vals[i]);
    double gram = 0.0;
    for (int a = 0; a <= 64; ++a)
        for (int b = 0; b <= 64; ++b) {
            double g = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                g += rule.weights[i] * vals[i][static_cast<std::size_t>(a)] *
                     vals[i][static_cast<std::size_t>(b)];
            gram = std::max(gram, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
    check(gram < 1e-8, "gram_orthonormality", fmt("max |G - I| = %.3e (< 1e-8)", gram));

    CutoffA a;
    double unity = 0.0;
    for (int j = 1; j <= 4096; ++j) {
        double s = 0.0;
        for (int n = 0; n <= 8; ++n) s += a(j / std::pow(4.0, n));
        unity = std::max(unity, std::abs(s - 1.0));
    }
    check(unity < 1e-10, "partition_of_unity", fmt("max defect = %.3e (< 1e-10)", unity));

    GridFunction coarse({-8.0}, {8.0}, {161}), fine({-8.0}, {8.0}, {321});
    double ratio = eigen_check({2}, coarse) / eigen_check({2}, fine);
    check(ratio > 3.5 && ratio < 4.5, "eigen_residual_order",
          fmt("refinement ratio = %.3f (in [3.5, 4.5])", ratio));
}

// 2. Derivative-weighted kernel bounds flat in the block index.
void criterion2() {
    DyadicBlockSet blocks = DyadicBlockSet::create(1, 5);
    for (int alpha : {0, 1})
        for (int k : {0, 2, 4}) {
            std::vector<double> ratios = kernel_bound_ratio(blocks, alpha, k);
            // slope of log(ratio) against the block index n; blocks 0 and 1
            // mix only 4 and 15 Hermite levels, too few to express the dyadic
            // scaling, so the trend is fitted past that transient
            double slope = 0.0;
            {
                std::vector<double> lg;
                for (std::size_t i = 2; i < ratios.size(); ++i)
                    lg.push_back(std::log(ratios[i]));
                double m = static_cast<double>(lg.size());
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t i = 0; i < lg.size(); ++i) {
                    sx += static_cast<double>(i);
                    sy += lg[i];
                    sxx += static_cast<double>(i) * static_cast<double>(i);
                    sxy += static_cast<double>(i) * lg[i];
                }
                slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            }
            char name[64];
            std::snprintf(name, sizeof name, "kernel_bound_alpha%d_k%d", alpha, k);
            check(std::abs(slope) < 0.1, name, fmt("log-ratio slope = %+.4f (|.| < 0.1)", slope));
        }
}

// 3. Block sums reconstruct a Schwartz function, monotone to below 1e-3.
void criterion3() {
    GridFunction f = GridFunction::sample1d(-6.0, 6.0, 601, [](double x) {
        return std::exp(-x * x / 2.0) * (1.0 + 0.3 * std::sin(2.0 * x));
    });
    DyadicBlockSet blocks = DyadicBlockSet::create(1, 6);
    GridFunction acc({-6.0}, {6.0}, {601});
    double prev = 1e300;
    bool monotone = true;
    double err = 0.0;
    for (int n = 0; n <= 6; ++n) {
        GridFunction g = blocks.convolve(n, f);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g[i];
        GridFunction diff = acc;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= f[i];
        err = diff.lp_norm(2.0);
        // monotone up to the quadrature floor of the block convolutions
        if (err > prev * (1.0 + 1e-9) + 1e-6) monotone = false;
        std::printf("    N = %d: L2 error = %.3e\n", n, err);
        prev = err;
    }
    check(err < 1e-3, "reconstruction_error", fmt("final L2 error = %.3e (< 1e-3)", err));
    check(monotone, "reconstruction_monotone", "errors decrease with the block count");
}

// 4. Orlicz engine: Lp agreement, Holder defect, beta gauge window.
void criterion4() {
    RngStream rng(2024, 0x04CEULL);
    auto random_fn = [&rng]() {
        double c = 2.0 * rng.uniform() - 1.0;
        double s = 0.5 + rng.uniform();
        double base = 0.5 * rng.uniform();
        return GridFunction::sample1d(-4.0, 4.0, 401, [c, s, base](double x) {
            return std::exp(-(x - c) * (x - c) / (2.0 * s * s)) + base;
        });
    };
    double max_lp_err = 0.0;
    for (int t = 0; t < 20; ++t) {
        double p = 1.2 + 2.8 * rng.uniform();
        GridFunction f = random_fn();
        double lux = luxembourg_norm(f, YoungFunction::power(p));
        max_lp_err = std::max(max_lp_err, std::abs(lux - f.lp_norm(p)) / f.lp_norm(p));
    }
    check(max_lp_err < 1e-6, "luxembourg_vs_lp", fmt("max rel err = %.3e (< 1e-6)", max_lp_err));

    double min_defect = 1e300;
    for (int t = 0; t < 100; ++t) {
        GridFunction f = random_fn(), g = random_fn();
        YoungFunction e = (t % 2) ? YoungFunction::log_entropy()
                                  : YoungFunction::power(1.5 + 2.0 * rng.uniform());
        min_defect = std::min(min_defect, holder_defect(f, g, e));
    }
    check(min_defect >= -1e-9, "holder_defect", fmt("min defect = %.3e (>= -1e-9)", min_defect));

    YoungFunction elog = YoungFunction::log_entropy();
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i <= 18; ++i) {
        double t = std::pow(10.0, 3.0 + 9.0 * i / 18.0);
        double ratio = elog.beta(t) / std::log(t);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    bool ok = lo >= 0.9 && hi <= 2.1;
    check(ok, "beta_over_log_window", fmt("ratio range [%.4f, %.4f] (target [0.9, 2.1])", lo, hi));
    if (!ok) {
        std::printf("    analysis: for e(s) = (1+s)ln(1+s), e^{-1}(R) ~ R/ln R, so\n");
        std::printf("    beta(t) = t/e^{-1}(t) = ln t - ln ln t + o(1) and the ratio is\n");
        std::printf("    1 - ln(ln t)/ln t, which lies in about [0.76, 0.89] over\n");
        std::printf("    t in [1e3, 1e12] for any implementation; the window [0.9, 2.1]\n");
        std::printf("    is unattainable for this gauge. Left red deliberately.\n");
    }
}

// 5. Super-kernel smoothing and blowup rate floors.
void criterion5() {
    SuperKernel kern = SuperKernel::build(1, 2);
    TestDictionary dict = TestDictionary::standard(1);
    std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05};
    GridFunction tent = GridFunction::sample1d(-2.5, 2.5, 1601, [](double x) {
        return std::max(0.0, 1.0 - std::abs(x));
    });
    GridFunction gauss = GridFunction::sample1d(-2.5, 2.5, 1601, [](double x) {
        return std::exp(-2.0 * x * x);
    });
    GridFunction step = GridFunction::sample1d(-2.5, 2.5, 1601, [](double x) {
        return (x > -1.2 && x < 0.6) ? 1.0 : 0.0;
    });
    struct Case {
        int q, k, n;
    };
    for (Case c : {Case{1, 1, 3}, Case{0, 2, 2}}) {
        double s2 = rate_smoothing(c.q == 1 ? tent : gauss, kern, c.q, c.k, dict, deltas);
        char nm[64];
        std::snprintf(nm, sizeof nm, "smoothing_rate_q%d_k%d", c.q, c.k);
        check(s2 >= (c.q + c.k) - 0.3, nm,
              fmt("slope = %.3f (>= %.1f)", s2, (c.q + c.k) - 0.3));
        // the probe matches q: the tent has one derivative, the step none
        double s3 = rate_blowup(c.q == 1 ? tent : step, kern, c.n, 0,
                                YoungFunction::power(2.0), deltas);
        std::snprintf(nm, sizeof nm, "blowup_rate_n%d_q%d", c.n, c.q);
        check(s3 >= -(c.n - c.q) - 0.3, nm,
              fmt("slope = %.3f (>= %.1f)", s3, -(c.n - c.q) - 0.3));
    }
}

// 6. Interpolation harness: norm equivalence, balance witness, witness chain.
void criterion6() {
    RngStream rng(6, 0x1237ULL);
    ToyPair pair;
    for (int i = 0; i < 8; ++i) pair.w.push_back(0.1 + 8.0 * rng.uniform());
    std::vector<std::vector<double>> samples;
    for (int s = 0; s < 100; ++s) {
        std::vector<double> y;
        for (int i = 0; i < 8; ++i) y.push_back(2.0 * rng.uniform() - 1.0);
        samples.push_back(y);
    }
    NormEquivalenceReport rep = prop_norm_equivalence(pair, samples, 0.7, 2, 1.1);
    check(rep.holds && rep.failures == 0, "norm_equivalence",
          fmt("single C = %.3f works on 100 samples (proof C = %.3f)", rep.best_C, rep.proof_C));

    int converged = 0;
    for (int s = 0; s < 10; ++s) {
        std::vector<double> y;
        for (int i = 0; i < 8; ++i) y.push_back(2.0 * rng.uniform() - 1.0);
        BalanceInclusionWitness w = prop_balance_inclusion(pair, y, 0.7, 2, 1.1);
        if (w.b_condition_finite && w.witness_converges) ++converged;
    }
    check(converged == 10, "balance_witness", fmt("%d/10 witnesses converge", converged));

    bool chain = balance_witness_chain(1, 1.1, 60) && balance_witness_chain(2, 1.1, 60) &&
                 balance_witness_chain(3, 2.0, 60);
    check(chain, "witness_chain", "inequality chain holds for n <= 60");
}

// 7. IBP layer: Gaussian density, mixture density, empirical IBP identity.
void criterion7() {
    IbpSample s = gaussian_ibp_weights({0.0, 0.0}, {1.0, 0.0, 0.0, 1.0}, 1, 1000000, 7);
    DensityEstimate est = mt_density(s.mu, std::vector<double>{0.0, 0.0});
    double target = 1.0 / (2.0 * std::numbers::pi);
    check(std::abs(est.value - target) <= 3.0 * est.se, "gaussian_density",
          fmt("%.5f vs %.5f, |diff| = %.2e <= 3 se = %.2e", est.value, target,
              std::abs(est.value - target), 3.0 * est.se));

    // two-component diagonal mixture with per-particle conditional weights
    const std::size_t n = 400000;
    std::vector<std::vector<double>> comp_means = {{-1.0, 0.0}, {1.2, 0.5}};
    std::vector<std::vector<double>> comp_covs = {{0.49, 0.0, 0.0, 0.49},
                                                  {0.81, 0.0, 0.0, 0.81}};
    RngStream rng(77, 0x717bULL);
    std::vector<double> pos(2 * n), wts(n, 1.0 / static_cast<double>(n));
    std::vector<std::vector<double>> means(n), covs(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = i % 2;
        double sd = std::sqrt(comp_covs[c][0]);
        pos[2 * i] = comp_means[c][0] + sd * rng.normal();
        pos[2 * i + 1] = comp_means[c][1] + sd * rng.normal();
        means[i] = comp_means[c];
        covs[i] = comp_covs[c];
    }
    ParticleMeasure cloud(2, std::move(pos), std::move(wts));
    attach_conditional_gaussian_weights(cloud, means, covs, 1);
    DensityEstimate mix = mt_density(cloud, std::vector<double>{0.0, 0.2});
    auto closed = gaussian_mixture_density(2, comp_means, comp_covs, {0.5, 0.5});
    double ref = closed(std::vector<double>{0.0, 0.2});
    check(std::abs(mix.value - ref) <= 3.0 * mix.se, "mixture_density",
          fmt("%.5f vs %.5f, |diff| = %.2e <= 3 se = %.2e", mix.value, ref,
              std::abs(mix.value - ref), 3.0 * mix.se));

    // E[f'(F)] = E[f(F) H] for F ~ N(0.2, 0.49), exact weights, five test fns
    IbpSample g = gaussian_ibp_weights({0.2}, {0.49}, 1, 400000, 13);
    const auto& h1 = g.mu.ibp_weights().at({1});
    struct Fn {
        const char* name;
        double (*f)(double);
        double (*df)(double);
    };
    static const Fn fns[5] = {
        {"sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }},
        {"cos", [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }},
        {"tanh", [](double x) { return std::tanh(x); },
         [](double x) { double c = std::cosh(x); return 1.0 / (c * c); }},
        {"x_gauss", [](double x) { return x * std::exp(-x * x / 2.0); },
         [](double x) { return (1.0 - x * x) * std::exp(-x * x / 2.0); }},
        {"cauchy", [](double x) { return 1.0 / (1.0 + x * x); },
         [](double x) { double d = 1.0 + x * x; return -2.0 * x / (d * d); }},
    };
    for (const Fn& fn : fns) {
        double mean = 0.0, m2 = 0.0;
        std::size_t cnt = g.mu.count();
        for (std::size_t i = 0; i < cnt; ++i) {
            double x = g.mu.position(i)[0];
            double d = fn.df(x) - fn.f(x) * h1[i];
            mean += d;
            m2 += d * d;
        }
        mean /= static_cast<double>(cnt);
        double var = m2 / static_cast<double>(cnt) - mean * mean;
        double se = std::sqrt(var / static_cast<double>(cnt));
        char nm[64];
        std::snprintf(nm, sizeof nm, "ibp_identity_%s", fn.name);
        check(std::abs(mean) <= 3.0 * se, nm,
              fmt("E[f' - fH] = %+.2e, 3 se = %.2e", mean, 3.0 * se));
    }
}

ordered_json run_kind(const std::string& cfg, int workers = 0) {
    RunResult r = run_experiment(cfg, workers);
    ordered_json j = r.report;
    j["__status"] = r.status;
    return j;
}

// 8. Elliptic log-modulus end-to-end: verdicts plus the window distance rate.
void criterion8() {
    ordered_json d1 = run_kind(R"({"kind":"sde-elliptic","seed":11,"params":{
        "d":1,"q":0,"k":1,"m":2,"a":1.1,"h":1.0,"r":1.0,"T":1.0,
        "n_paths":100000,"grid_points":201,"lemma10":true}})");
    check(d1["__status"] == 0 && d1["results"]["verdict"] == "regular", "d1_q0_regular",
          fmt("verdict %s, trend slope %+.4f",
              d1["results"]["verdict"].get<std::string>().c_str(),
              d1["results"]["trend_slope"].get<double>()));
    double expn = d1["results"]["distance_rate"]["exponent"].get<double>();
    double lp = d1["results"]["distance_rate"]["log_power"].get<double>();
    check(expn >= 0.4, "window_rate_exponent", fmt("delta exponent = %.3f (>= 0.4)", expn));
    check(lp >= -4.0 && lp <= -2.0, "window_rate_log_power",
          fmt("log power = %.3f (in [-4, -2] = -(2+h) +- 1, h = 1)", lp));

    ordered_json d2 = run_kind(R"({"kind":"sde-elliptic","seed":11,"params":{
        "d":2,"q":0,"k":1,"m":2,"a":1.1,"h":1.0,"r":1.0,"T":1.0,
        "n_paths":50000,"grid_points":61,"lemma10":false}})");
    check(d2["__status"] == 0 && d2["results"]["verdict"] == "regular", "d2_q0_regular",
          fmt("verdict %s, trend slope %+.4f",
              d2["results"]["verdict"].get<std::string>().c_str(),
              d2["results"]["trend_slope"].get<double>()));

    ordered_json q1 = run_kind(R"({"kind":"sde-elliptic","seed":11,"params":{
        "d":1,"q":1,"k":1,"m":2,"a":1.1,"h":1.0,"r":1.0,"T":1.0,
        "n_paths":50000,"grid_points":201,"lemma10":false}})");
    check(q1["__status"] == 2 && q1["results"]["verdict"] == "inconclusive",
          "d1_q1_inconclusive",
          fmt("verdict %s, trend slope %+.4f",
              q1["results"]["verdict"].get<std::string>().c_str(),
              q1["results"]["trend_slope"].get<double>()));
}

// 9. Kinetic Hormander pipeline.
void criterion9() {
    ordered_json r = run_kind(R"({"kind":"sde-hormander","seed":7,"params":{
        "T":1.0,"q":0,"k":1,"m":2,"a":1.1,"n_paths":50000,
        "delta_grid":[0.04,0.02,0.01,0.005,0.0025,0.00125]}})");
    const ordered_json& res = r["results"];
    double l0 = res["lambda0"].get<double>(), l1 = res["lambda1"].get<double>();
    check(l0 < 1e-8, "lambda0_zero", fmt("Lambda_0 = %.3e (< 1e-8)", l0));
    check(l1 >= 1.0, "lambda1_spans", fmt("Lambda_1 = %.3f (>= 1)", l1));
    double dv = res["density_at_mode"].get<double>();
    double se = res["density_se"].get<double>();
    double cf = res["density_closed_form"].get<double>();
    check(std::abs(dv - cf) <= 3.0 * se, "density_at_mode",
          fmt("%.5f vs sqrt(12)/(2 pi T^2) = %.5f, |diff| <= 3 se = %.2e", dv, cf, 3.0 * se));
    check(res["balance"]["verdict"] == "regular", "Hq_verdict",
          fmt("verdict %s", res["balance"]["verdict"].get<std::string>().c_str()));
    double slope = res["norm_scaling_slope"].get<double>();
    check(slope < 0.0, "norm_scaling_slope", fmt("slope = %.3f (< 0)", slope));
}

// 10. Heat equation: covariance tables, window decomposition, verdicts.
void criterion10() {
    std::vector<CovarianceRow> cov =
        covariance_bounds({0.35, 0.65}, {1e-5, 1e-4, 1e-3, 1e-2});
    double lo = 1e300, hi = 0.0;
    for (const CovarianceRow& r : cov) {
        lo = std::min(lo, r.lo);
        hi = std::max(hi, r.hi);
    }
    check(lo > 0.01 && hi < 1.0, "covariance_ratio_bounded",
          fmt("eigenvalue/sqrt(eps) in [%.4f, %.4f] over eps in [1e-5, 1e-2]", lo, hi));

    HeatModel clog = HeatModel::clog(1.0, 0.5, 1.0, 0.0);
    S4Report s4 = s4_decomposition(clog, 0.1, 0.01, 32, 100, 5);
    check(s4.max_residual < 1e-10, "window_recombination",
          fmt("max residual = %.3e (< 1e-10)", s4.max_residual));

    // low noise keeps the window field increments inside the band where the
    // coefficient's log modulus is active, so the rate shape is measurable
    HeatModel quiet = HeatModel::clog(1.0, 0.05, 0.05, 0.0);
    std::vector<double> eps_grid;
    for (int i = 0; i < 7; ++i) eps_grid.push_back(0.02 * std::pow(0.5, i));
    S4Rates rates = s4_moment_rates(quiet, 0.1, eps_grid, 64, 400, 9);
    double lp = rates.i_ratio.log_power;
    check(lp <= -1.0, "increment_ratio_log_power",
          fmt("E|I|^2/sqrt(eps) log power = %.3f (<= -2 within +-1)", lp));

    ordered_json hc = run_kind(R"({"kind":"heat","seed":3,"params":{
        "model":"clog","nx":48,"n_real":500,"grid_points":31}})");
    check(hc["__status"] == 0 && hc["results"]["verdict"] == "regular", "clog_verdict",
          fmt("two-point log-modulus model: %s",
              hc["results"]["verdict"].get<std::string>().c_str()));
    ordered_json ha = run_kind(R"({"kind":"heat","seed":3,"params":{
        "model":"additive","nx":48,"n_real":500,"grid_points":31}})");
    check(ha["__status"] == 0 && ha["results"]["verdict"] == "regular", "additive_verdict",
          fmt("additive positive control: %s",
              ha["results"]["verdict"].get<std::string>().c_str()));
}

// 11. Fourier balance baseline and its sub-d/2 ceiling in d = 2.
void criterion11() {
    std::vector<double> xi;
    for (int i = 0; i <= 40; ++i) xi.push_back(std::pow(10.0, 0.5 + 3.0 * i / 40.0));
    struct Case {
        double h;
        int k;
    };
    for (Case c : {Case{1.0, 1}, Case{1.0, 2}, Case{2.0, 1}}) {
        double got = fourier_balance_model(c.h, c.k, xi);
        double want = c.h * c.k / (1.0 + c.h + c.k);
        char nm[64];
        std::snprintf(nm, sizeof nm, "exponent_h%.0f_k%d", c.h, c.k);
        check(std::abs(got - want) < 0.05, nm, fmt("%.4f vs hk/(1+h+k) = %.4f", got, want));
    }
    // in d = 2 regularity needs decay beyond d/2 = 1; the optimized bound
    // caps at k/(2+k) < 1 for every k, so the baseline stays inconclusive
    double best = 0.0;
    for (int k = 1; k <= 7; ++k) best = std::max(best, fourier_balance_model(1.0, k, xi));
    check(best < 1.0, "sub_d_half_in_2d",
          fmt("best exponent over k <= 7 is %.4f (< d/2 = 1)", best));
}

// 12. Byte-identical reports independent of the worker count.
void criterion12() {
    const char* cfgs[2] = {
        R"({"kind":"interp-props","seed":4,"params":{"dim":8,"samples":50}})",
        R"({"kind":"ibp-density","seed":5,"params":{"particles":20000}})"};
    for (const char* cfg : cfgs) {
        RunResult a = run_experiment(cfg, 1);
        RunResult b = run_experiment(cfg, 4);
        bool same = a.report.dump(2) == b.report.dump(2) && a.csv_files == b.csv_files;
        ordered_json j = nlohmann::json::parse(cfg);
        check(same, ("determinism_" + j["kind"].get<std::string>()).c_str(),
              same ? "report and CSVs byte-identical for workers 1 vs 4"
                   : "worker count changed the output bytes");
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..12>\n");
        return 1;
    }
    int c = std::atoi(argv[1]);
    std::printf("criterion %d\n", c);
    try {
        switch (c) {
            case 1: criterion1(); break;
            case 2: criterion2(); break;
            case 3: criterion3(); break;
            case 4: criterion4(); break;
            case 5: criterion5(); break;
            case 6: criterion6(); break;
            case 7: criterion7(); break;
            case 8: criterion8(); break;
            case 9: criterion9(); break;
            case 10: criterion10(); break;
            case 11: criterion11(); break;
            case 12: criterion12(); break;
            default:
                std::fprintf(stderr, "criterion must be 1..12\n");
                return 1;
        }
    } catch (const std::exception& e) {
        std::printf("  [FAIL] exception: %s\n", e.what());
        g_all = false;
    }
    std::printf("criterion %d: %s\n", c, g_all ? "PASS" : "FAIL");
    return g_all ? 0 : 1;
}
