#include "reglaw/experiment.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <thread>

#include "reglaw/balance.hpp"
#include "reglaw/dictionary.hpp"
#include "reglaw/heat.hpp"
#include "reglaw/hermite.hpp"
#include "reglaw/ibp.hpp"
#include "reglaw/interp.hpp"
#include "reglaw/mollify.hpp"
#include "reglaw/parallel.hpp"
#include "reglaw/rng.hpp"
#include "reglaw/sde.hpp"
#include "reglaw/young.hpp"

namespace reglaw {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct Field {
    const char* name;
    const char* type; // int | number | bool | string | array
    ojson def;
    const char* desc;
};

const std::map<std::string, std::vector<Field>>& schema_table() {
    static const std::map<std::string, std::vector<Field>> table = {
        {"orlicz-check",
         {{"trials", "int", 20, "random Luxembourg-vs-Lp cases"},
          {"holder_trials", "int", 100, "random pairs for the duality defect"}}},
        {"hermite-verify",
         {{"n_max", "int", 64, "largest basis level in the Gram table"}}},
        {"mollify-rates",
         {{"grid_points", "int", 801, "lattice points of the test functions"},
          {"deltas", "array", ojson::array({0.4, 0.28, 0.2, 0.14, 0.1}),
           "mollification widths for the slope fits"}}},
        {"balance-verdict",
         {{"q", "int", 0, "target derivative order"},
          {"k", "int", 1, "dual-distance smoothness"},
          {"m", "int", 1, "approximation-rate parameter"},
          {"a", "number", 1.1, "logarithmic weight exponent"},
          {"e", "string", "log_entropy", "gauge label (power:p | log_entropy | loglog)"},
          {"levels", "int", 6, "truncation level of the series"},
          {"grid_points", "int", 241, "approximant lattice points"}}},
        {"interp-props",
         {{"dim", "int", 12, "coordinates of the weighted-sequence couple"},
          {"samples", "int", 100, "random elements for the equivalence sweep"},
          {"theta", "number", 0.5, "interpolation exponent"},
          {"m", "int", 1, "rate parameter"},
          {"a", "number", 1.1, "logarithmic weight exponent"}}},
        {"ibp-density",
         {{"particles", "int", 200000, "cloud size"},
          {"order", "int", 1, "weight order to attach"}}},
        {"sde-elliptic",
         {{"d", "int", 1, "state dimension"},
          {"q", "int", 0, "target derivative order"},
          {"k", "int", 1, "dual-distance smoothness"},
          {"m", "int", 2, "approximation-rate parameter"},
          {"a", "number", 1.1, "logarithmic weight exponent"},
          {"h", "number", 1.0, "diffusion modulus parameter"},
          {"r", "number", 1.0, "localization radius"},
          {"T", "number", 1.0, "horizon"},
          {"n_paths", "int", 50000, "Monte Carlo paths"},
          {"grid_points", "int", 401, "mixture-norm lattice points per axis"},
          {"y0", "array", ojson::array(), "localization center (default origin)"},
          {"delta_grid", "array", ojson::array(), "window sizes (default 2^-9..2^-16)"},
          {"lemma10", "bool", false, "also fit the localized distance rate"}}},
        {"sde-hormander",
         {{"q", "int", 0, "target derivative order"},
          {"k", "int", 1, "dual-distance smoothness"},
          {"m", "int", 2, "approximation-rate parameter"},
          {"a", "number", 1.1, "logarithmic weight exponent"},
          {"T", "number", 1.0, "horizon"},
          {"n_paths", "int", 100000, "Monte Carlo paths"},
          {"delta_grid", "array", ojson::array(), "window sizes (default 2^-2..2^-9)"}}},
        {"heat",
         {{"model", "string", "clog", "coefficient family: clog | additive"},
          {"h", "number", 1.0, "diffusion modulus parameter"},
          {"points", "array", ojson::array({0.35, 0.65}), "observation sites in (0,1)"},
          {"q", "int", 0, "target derivative order"},
          {"k", "int", 1, "dual-distance smoothness"},
          {"m", "int", 3, "approximation-rate parameter"},
          {"a", "number", 1.1, "logarithmic weight exponent"},
          {"T", "number", 0.25, "horizon"},
          {"nx", "int", 64, "spatial cells"},
          {"n_real", "int", 2000, "field realizations"},
          {"grid_points", "int", 41, "mixture-norm lattice points per axis"},
          {"eps_grid", "array", ojson::array(), "window sizes (default T*2^-2..T*2^-11)"},
          {"cov_eps", "array", ojson::array({1e-5, 1e-4, 1e-3, 1e-2}),
           "window sizes for the covariance eigenvalue table"}}},
    };
    return table;
}

bool type_ok(const char* type, const json& v) {
    std::string t = type;
    if (t == "int") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "bool") return v.is_boolean();
    if (t == "string") return v.is_string();
    if (t == "array") {
        if (!v.is_array()) return false;
        for (const auto& e : v)
            if (!e.is_number()) return false;
        return true;
    }
    return false;
}

struct ParsedConfig {
    std::string kind;
    ojson params; // effective, defaults filled in
    std::uint64_t seed = 1;
    long long max_paths = 2000000;
    long long max_grid = 1024;
};

ParsedConfig parse_config(const std::string& text, long long seed_override) {
    json cfg;
    try {
        cfg = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw experiment_error(std::string("config parse: ") + ex.what());
    }
    if (!cfg.is_object()) throw experiment_error("config: top level must be an object");
    for (const auto& [key, val] : cfg.items()) {
        if (key != "kind" && key != "seed" && key != "out" && key != "max_paths" &&
            key != "max_grid" && key != "params")
            throw experiment_error("config: unknown field '" + key + "'");
        (void)val;
    }
    if (!cfg.contains("kind") || !cfg["kind"].is_string())
        throw experiment_error("config: missing string field 'kind'");
    ParsedConfig out;
    out.kind = cfg["kind"].get<std::string>();
    auto it = schema_table().find(out.kind);
    if (it == schema_table().end())
        throw experiment_error("config: unknown kind '" + out.kind + "'");
    if (cfg.contains("seed")) {
        if (!cfg["seed"].is_number_unsigned() && !cfg["seed"].is_number_integer())
            throw experiment_error("config: 'seed' must be an integer");
        long long s = cfg["seed"].get<long long>();
        if (s < 0) throw experiment_error("config: 'seed' must be nonnegative");
        out.seed = static_cast<std::uint64_t>(s);
    }
    if (seed_override >= 0) out.seed = static_cast<std::uint64_t>(seed_override);
    if (cfg.contains("max_paths")) {
        if (!cfg["max_paths"].is_number_integer())
            throw experiment_error("config: 'max_paths' must be an integer");
        out.max_paths = cfg["max_paths"].get<long long>();
    }
    if (cfg.contains("max_grid")) {
        if (!cfg["max_grid"].is_number_integer())
            throw experiment_error("config: 'max_grid' must be an integer");
        out.max_grid = cfg["max_grid"].get<long long>();
    }
    json params = cfg.value("params", json::object());
    if (!params.is_object()) throw experiment_error("config: 'params' must be an object");
    for (const auto& [key, val] : params.items()) {
        const Field* found = nullptr;
        for (const Field& f : it->second)
            if (key == f.name) found = &f;
        if (!found)
            throw experiment_error("config: unknown field 'params." + key + "' for kind '" +
                                   out.kind + "'");
        if (!type_ok(found->type, val))
            throw experiment_error("config: field 'params." + key + "' must have type " +
                                   found->type);
    }
    for (const Field& f : it->second)
        out.params[f.name] = params.contains(f.name) ? ojson(params[f.name]) : f.def;
    for (const char* key : {"n_paths", "n_real", "particles"})
        if (out.params.contains(key) && out.params[key].get<long long>() > out.max_paths)
            throw experiment_error(std::string("config: 'params.") + key +
                                   "' exceeds max_paths");
    for (const char* key : {"grid_points", "nx"})
        if (out.params.contains(key) && out.params[key].get<long long>() > out.max_grid)
            throw experiment_error(std::string("config: 'params.") + key +
                                   "' exceeds max_grid");
    return out;
}

std::string csv(const std::vector<std::array<double, 3>>& rows) {
    std::string out = "x,y,y_err\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r[0], r[1], r[2]);
        out += buf;
    }
    return out;
}

std::vector<double> geometric_grid(double first, double ratio, int count) {
    std::vector<double> out;
    double v = first;
    for (int i = 0; i < count; ++i, v *= ratio) out.push_back(v);
    return out;
}

std::vector<double> array_param(const ojson& params, const char* name,
                                std::vector<double> fallback) {
    auto arr = params[name].get<std::vector<double>>();
    return arr.empty() ? fallback : arr;
}

std::vector<std::array<double, 3>> curve_rows(const BalanceReport& rep) {
    std::vector<std::array<double, 3>> rows;
    for (const LevelRow& r : rep.table) rows.push_back({r.R, r.dk, 0.0});
    return rows;
}

std::vector<std::array<double, 3>> norm_rows(const BalanceReport& rep) {
    std::vector<std::array<double, 3>> rows;
    for (const LevelRow& r : rep.table) rows.push_back({r.level, r.norm, 0.0});
    return rows;
}

RunResult run_orlicz(const ParsedConfig& cfg) {
    const int trials = cfg.params["trials"].get<int>();
    const int holder_trials = cfg.params["holder_trials"].get<int>();
    RngStream rng(cfg.seed, 0x0a11ULL);
    auto random_fn = [&rng]() {
        double c = 2.0 * rng.uniform() - 1.0;
        double s = 0.5 + rng.uniform();
        double base = 0.5 * rng.uniform();
        return GridFunction::sample1d(-4.0, 4.0, 401, [c, s, base](double x) {
            return std::exp(-(x - c) * (x - c) / (2.0 * s * s)) + base;
        });
    };
    double max_lp_err = 0.0;
    for (int t = 0; t < trials; ++t) {
        double p = 1.2 + 2.8 * rng.uniform();
        GridFunction f = random_fn();
        double lux = luxembourg_norm(f, YoungFunction::power(p));
        double ref = f.lp_norm(p);
        max_lp_err = std::max(max_lp_err, std::abs(lux - ref) / ref);
    }
    double min_defect = 1e300;
    for (int t = 0; t < holder_trials; ++t) {
        GridFunction f = random_fn(), g = random_fn();
        YoungFunction e = (t % 2) ? YoungFunction::log_entropy()
                                  : YoungFunction::power(1.5 + 2.0 * rng.uniform());
        min_defect = std::min(min_defect, holder_defect(f, g, e));
    }
    YoungFunction elog = YoungFunction::log_entropy();
    std::vector<std::array<double, 3>> beta_rows;
    double ratio_lo = 1e300, ratio_hi = 0.0;
    for (int i = 0; i <= 18; ++i) {
        double t = std::pow(10.0, 3.0 + 9.0 * i / 18.0);
        double ratio = elog.beta(t) / std::log(t);
        beta_rows.push_back({t, ratio, 0.0});
        ratio_lo = std::min(ratio_lo, ratio);
        ratio_hi = std::max(ratio_hi, ratio);
    }
    bool pass = max_lp_err < 1e-6 && min_defect >= -1e-9 && ratio_lo >= 0.9 &&
                ratio_hi <= 2.1;
    RunResult out;
    out.status = pass ? 0 : 2;
    out.report["results"] = {{"max_lp_error", max_lp_err},
                             {"min_holder_defect", min_defect},
                             {"beta_ratio_lo", ratio_lo},
                             {"beta_ratio_hi", ratio_hi},
                             {"pass", pass}};
    out.csv_files.emplace_back("beta_ratio.csv", csv(beta_rows));
    return out;
}

RunResult run_hermite(const ParsedConfig& cfg) {
    const int n_max = cfg.params["n_max"].get<int>();
    GaussHermite rule = GaussHermite::build(n_max + 1);
    std::vector<std::vector<double>> vals(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        hermite_all(n_max, rule.nodes[i], vals[i]);
    double gram_err = 0.0;
    std::vector<std::array<double, 3>> gram_rows;
    for (int a = 0; a <= n_max; ++a) {
        double row_err = 0.0;
        for (int b = 0; b <= n_max; ++b) {
            double g = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                g += rule.weights[i] * vals[i][static_cast<std::size_t>(a)] *
                     vals[i][static_cast<std::size_t>(b)];
            row_err = std::max(row_err, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
        gram_err = std::max(gram_err, row_err);
        gram_rows.push_back({static_cast<double>(a), row_err, 0.0});
    }
    CutoffA a;
    double unity_err = 0.0;
    for (int j = 1; j <= 1024; ++j) {
        double s = 0.0;
        for (int n = 0; n <= 8; ++n) s += a(j / std::pow(4.0, n));
        unity_err = std::max(unity_err, std::abs(s - 1.0));
    }
    GridFunction coarse({-8.0}, {8.0}, {161});
    GridFunction fine({-8.0}, {8.0}, {321});
    double r1 = eigen_check({2}, coarse);
    double r2 = eigen_check({2}, fine);
    double ratio = r1 / r2;
    bool pass = gram_err < 1e-8 && unity_err < 1e-10 && ratio >= 3.5 && ratio <= 4.5;
    RunResult out;
    out.status = pass ? 0 : 2;
    out.report["results"] = {{"gram_max_error", gram_err},
                             {"partition_of_unity_error", unity_err},
                             {"eigen_residual_ratio", ratio},
                             {"pass", pass}};
    out.csv_files.emplace_back("orthonormality.csv", csv(gram_rows));
    return out;
}

RunResult run_mollify(const ParsedConfig& cfg) {
    const int np = cfg.params["grid_points"].get<int>();
    const std::vector<double> deltas = cfg.params["deltas"].get<std::vector<double>>();
    TestDictionary dict = TestDictionary::standard(1);
    YoungFunction l2 = YoungFunction::power(2.0);
    GridFunction tent = GridFunction::sample1d(-2.5, 2.5, np, [](double x) {
        return std::max(0.0, 1.0 - std::abs(x));
    });
    GridFunction step = GridFunction::sample1d(-2.5, 2.5, np, [](double x) {
        return (x > -1.2 && x < 0.6) ? 1.0 : 0.0;
    });
    struct Case {
        const char* label;
        const GridFunction* f;
        int q, k, n;
    };
    SuperKernel kern = SuperKernel::build(1, 2);
    std::vector<Case> cases = {{"tent_q1_k1_n3", &tent, 1, 1, 3},
                               {"step_q0_k2_n2", &step, 0, 2, 2}};
    bool pass = true;
    ojson results = ojson::array();
    std::vector<std::array<double, 3>> rows;
    int idx = 0;
    for (const Case& c : cases) {
        double s_smooth = rate_smoothing(*c.f, kern, c.q, c.k, dict, deltas);
        double s_blow = rate_blowup(*c.f, kern, c.n, 0, l2, deltas);
        bool ok = s_smooth >= (c.q + c.k) - 0.3 && s_blow >= -(c.n - c.q) - 0.3;
        pass = pass && ok;
        results.push_back({{"case", c.label},
                           {"smoothing_slope", s_smooth},
                           {"blowup_slope", s_blow},
                           {"pass", ok}});
        rows.push_back({static_cast<double>(idx), s_smooth, 0.0});
        rows.push_back({static_cast<double>(idx) + 0.5, s_blow, 0.0});
        ++idx;
    }
    RunResult out;
    out.status = pass ? 0 : 2;
    out.report["results"] = {{"cases", results},
                             {"kernel_condition", kern.condition_number()},
                             {"pass", pass}};
    out.csv_files.emplace_back("slopes.csv", csv(rows));
    return out;
}

RunResult run_balance(const ParsedConfig& cfg) {
    const int q = cfg.params["q"].get<int>();
    const int k = cfg.params["k"].get<int>();
    const int m = cfg.params["m"].get<int>();
    const double a = cfg.params["a"].get<double>();
    const int N = cfg.params["levels"].get<int>();
    const int np = cfg.params["grid_points"].get<int>();
    YoungFunction e = YoungFunction::from_label(cfg.params["e"].get<std::string>());
    GridFunction geometry({-6.0}, {6.0}, {np});
    GridFunction g = GridFunction::sample1d(-6.0, 6.0, np, [](double x) {
        return std::exp(-x * x / 2.0) / std::sqrt(2.0 * std::numbers::pi);
    });
    ParticleMeasure mu = grid_density_particles(g);
    std::vector<GridFunction> approximants;
    for (int n = 1; n <= N; ++n)
        approximants.push_back(regularize(mu, std::pow(2.0, -n), geometry));
    TestDictionary dict = TestDictionary::standard(1);
    BalanceReport rep = theorem2C_verdict(mu, approximants, q, k, m, e, a, dict, N);
    RunResult out;
    out.status = rep.verdict == "regular" ? 0 : 2;
    out.report["results"] = rep.to_json();
    out.csv_files.emplace_back("distances.csv", curve_rows(rep).empty()
                                                    ? csv({})
                                                    : csv(curve_rows(rep)));
    out.csv_files.emplace_back("norms.csv", csv(norm_rows(rep)));
    return out;
}

RunResult run_interp(const ParsedConfig& cfg) {
    const int dim = cfg.params["dim"].get<int>();
    const int n_samples = cfg.params["samples"].get<int>();
    const double theta = cfg.params["theta"].get<double>();
    const int m = cfg.params["m"].get<int>();
    const double a = cfg.params["a"].get<double>();
    ToyPair pair;
    for (int i = 0; i < dim; ++i) pair.w.push_back(std::pow(1.7, i));
    RngStream rng(cfg.seed, 0x17e2ULL);
    std::vector<std::vector<double>> samples;
    for (int s = 0; s < n_samples; ++s) {
        std::vector<double> y(static_cast<std::size_t>(dim));
        for (double& v : y) v = 2.0 * rng.uniform() - 1.0;
        samples.push_back(y);
    }
    NormEquivalenceReport ne = prop_norm_equivalence(pair, samples, theta, m, a);
    std::vector<double> y0(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) y0[static_cast<std::size_t>(i)] = std::pow(2.0, -i);
    BalanceInclusionWitness bi = prop_balance_inclusion(pair, y0, theta, m, a);
    bool chain = balance_witness_chain(m, a, 60);
    bool pass = ne.holds && bi.b_condition_finite && bi.witness_converges && chain;
    std::vector<std::array<double, 3>> krows;
    for (int i = 0; i <= 24; ++i) {
        double t = std::pow(10.0, -4.0 + 6.0 * i / 24.0);
        krows.push_back({t, k_functional(pair, y0, t), 0.0});
    }
    RunResult out;
    out.status = pass ? 0 : 2;
    out.report["results"] = {{"equivalence_best_C", ne.best_C},
                             {"equivalence_proof_C", ne.proof_C},
                             {"equivalence_holds", ne.holds},
                             {"equivalence_failures", ne.failures},
                             {"balance_finite", bi.b_condition_finite},
                             {"witness_converges", bi.witness_converges},
                             {"witness_pi", bi.pi_value},
                             {"witness_limsup", bi.b_limsup},
                             {"inequality_chain", chain},
                             {"pass", pass}};
    out.csv_files.emplace_back("k_functional.csv", csv(krows));
    return out;
}

RunResult run_ibp(const ParsedConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.params["particles"].get<long long>());
    const int order = cfg.params["order"].get<int>();
    IbpSample gs = gaussian_ibp_weights({0.0, 0.0}, {1.0, 0.0, 0.0, 1.0}, order, n,
                                        cfg.seed);
    std::vector<double> origin = {0.0, 0.0};
    DensityEstimate d0 = mt_density(gs.mu, origin);
    const double target0 = 1.0 / (2.0 * std::numbers::pi);
    bool pass_gauss = std::abs(d0.value - target0) <= 3.0 * d0.se;

    const std::vector<std::vector<double>> cm = {{-1.2, 0.0}, {1.1, 0.3}};
    const std::vector<double> cvar = {0.8, 1.1};
    const double p1 = 0.4;
    std::vector<double> pos(2 * n), wts(n, 1.0 / static_cast<double>(n));
    std::vector<std::vector<double>> means(n), covs(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream r(cfg.seed ^ 0x5b7ULL, i);
        int c = r.uniform() < p1 ? 0 : 1;
        double sd = std::sqrt(cvar[static_cast<std::size_t>(c)]);
        means[i] = cm[static_cast<std::size_t>(c)];
        covs[i] = {cvar[static_cast<std::size_t>(c)], 0.0, 0.0,
                   cvar[static_cast<std::size_t>(c)]};
        pos[2 * i] = means[i][0] + sd * r.normal();
        pos[2 * i + 1] = means[i][1] + sd * r.normal();
    }
    ParticleMeasure mix(2, std::move(pos), std::move(wts));
    attach_conditional_gaussian_weights(mix, means, covs, order);
    std::vector<double> probe = {0.0, 0.1};
    DensityEstimate d1 = mt_density(mix, probe);
    auto comp_density = [&](int c, const std::vector<double>& x) {
        double v = cvar[static_cast<std::size_t>(c)];
        double dx = x[0] - cm[static_cast<std::size_t>(c)][0];
        double dy = x[1] - cm[static_cast<std::size_t>(c)][1];
        return std::exp(-(dx * dx + dy * dy) / (2.0 * v)) / (2.0 * std::numbers::pi * v);
    };
    double target1 = p1 * comp_density(0, probe) + (1.0 - p1) * comp_density(1, probe);
    bool pass_mix = std::abs(d1.value - target1) <= 3.0 * d1.se;

    struct Probe {
        const char* label;
        double (*f)(double, double);
        double (*df)(double, double);
    };
    const std::vector<Probe> probes = {
        {"sin_x1", [](double x, double) { return std::sin(x); },
         [](double x, double) { return std::cos(x); }},
        {"cos_sum", [](double x, double y) { return std::cos(x + y); },
         [](double x, double y) { return -std::sin(x + y); }},
        {"x1_gauss", [](double x, double y) { return x * std::exp(-(x * x + y * y) / 2); },
         [](double x, double y) { return (1 - x * x) * std::exp(-(x * x + y * y) / 2); }},
        {"tanh_x1", [](double x, double) { return std::tanh(x); },
         [](double x, double) { double c = std::cosh(x); return 1.0 / (c * c); }},
        {"gauss_x1", [](double x, double) { return std::exp(-x * x); },
         [](double x, double) { return -2.0 * x * std::exp(-x * x); }}};
    const std::vector<double>& hw = gs.mu.ibp_weights().at({1, 0});
    bool pass_ibp = true;
    ojson identity = ojson::array();
    std::vector<std::array<double, 3>> rows = {
        {0.0, d0.value - target0, d0.se}, {1.0, d1.value - target1, d1.se}};
    for (std::size_t j = 0; j < probes.size(); ++j) {
        double sl = 0.0, sl2 = 0.0, sr = 0.0, sr2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto x = gs.mu.position(i);
            double l = probes[j].df(x[0], x[1]);
            double r = probes[j].f(x[0], x[1]) * hw[i];
            sl += l;
            sl2 += l * l;
            sr += r;
            sr2 += r * r;
        }
        double nn = static_cast<double>(n);
        double ml = sl / nn, mr = sr / nn;
        double se = std::sqrt((sl2 / nn - ml * ml) / nn + (sr2 / nn - mr * mr) / nn);
        bool ok = std::abs(ml - mr) <= 3.0 * se;
        pass_ibp = pass_ibp && ok;
        identity.push_back({{"function", probes[j].label},
                            {"lhs", ml},
                            {"rhs", mr},
                            {"se", se},
                            {"pass", ok}});
        rows.push_back({2.0 + static_cast<double>(j), ml - mr, se});
    }
    bool pass = pass_gauss && pass_mix && pass_ibp;
    RunResult out;
    out.status = pass ? 0 : 2;
    out.report["results"] = {{"gaussian_density", d0.value},
                             {"gaussian_se", d0.se},
                             {"gaussian_target", target0},
                             {"mixture_density", d1.value},
                             {"mixture_se", d1.se},
                             {"mixture_target", target1},
                             {"identity", identity},
                             {"pass", pass}};
    out.csv_files.emplace_back("residuals.csv", csv(rows));
    return out;
}

RunResult run_sde_elliptic(const ParsedConfig& cfg) {
    const int d = cfg.params["d"].get<int>();
    Theorem9Params p;
    p.q = cfg.params["q"].get<int>();
    p.k = cfg.params["k"].get<int>();
    p.m = cfg.params["m"].get<int>();
    p.a = cfg.params["a"].get<double>();
    p.T = cfg.params["T"].get<double>();
    p.r = cfg.params["r"].get<double>();
    p.n_paths = static_cast<std::size_t>(cfg.params["n_paths"].get<long long>());
    p.grid_points = cfg.params["grid_points"].get<int>();
    p.seed = cfg.seed;
    const double h = cfg.params["h"].get<double>();
    std::vector<double> y0 = cfg.params["y0"].get<std::vector<double>>();
    if (y0.empty()) y0.assign(static_cast<std::size_t>(d), 0.0);
    if (static_cast<int>(y0.size()) != d)
        throw experiment_error("config: 'params.y0' must have length d");
    std::vector<double> deltas = array_param(cfg.params, "delta_grid",
                                             geometric_grid(std::pow(2.0, -9), 0.5, 8));
    std::vector<double> xstar(y0);
    xstar[0] += 0.25;
    SdeModel model = SdeModel::elliptic_clog(d, h, 0.5, 1.0, xstar, 2.0 * p.r + 1.5);
    TestDictionary dict = TestDictionary::standard(d);
    BalanceReport rep = theorem9_pipeline(model, y0, p, deltas, dict);
    RunResult out;
    out.status = rep.verdict == "regular" ? 0 : 2;
    out.report["results"] = rep.to_json();
    if (cfg.params["lemma10"].get<bool>()) {
        RateFit rf = lemma10_rate(model, y0, 0.5 * p.r, p.T, deltas, p.n_paths,
                                  cfg.seed + 1, dict);
        out.report["results"]["distance_rate"] = {{"exponent", rf.exponent},
                                                  {"exponent_ci", rf.exponent_ci},
                                                  {"log_power", rf.log_power},
                                                  {"log_power_ci", rf.log_power_ci}};
        std::vector<std::array<double, 3>> rows;
        for (std::size_t i = 0; i < rf.x.size(); ++i)
            rows.push_back({rf.x[i], rf.y[i], 0.0});
        out.csv_files.emplace_back("distance_rate.csv", csv(rows));
    }
    out.csv_files.emplace_back("curve.csv", csv(curve_rows(rep)));
    out.csv_files.emplace_back("norms.csv", csv(norm_rows(rep)));
    return out;
}

RunResult run_sde_hormander(const ParsedConfig& cfg) {
    const int q = cfg.params["q"].get<int>();
    const int k = cfg.params["k"].get<int>();
    const int m = cfg.params["m"].get<int>();
    const double a = cfg.params["a"].get<double>();
    const double T = cfg.params["T"].get<double>();
    const std::size_t n_paths =
        static_cast<std::size_t>(cfg.params["n_paths"].get<long long>());
    std::vector<double> deltas = array_param(cfg.params, "delta_grid",
                                             geometric_grid(0.25, 0.5, 8));
    TestDictionary dict = TestDictionary::standard(2);
    KineticReport kr = hormander_kinetic_pipeline(T, q, k, m, a, deltas, n_paths,
                                                  cfg.seed, dict);
    bool pass = kr.lambda0 < 1e-8 && kr.lambda1 >= 0.5 &&
                std::abs(kr.density_at_mode - kr.density_closed_form) <=
                    3.0 * kr.density_se &&
                kr.report.verdict == "regular";
    RunResult out;
    out.status = pass ? 0 : 2;
    out.report["results"] = {{"lambda0", kr.lambda0},
                             {"lambda1", kr.lambda1},
                             {"density_at_mode", kr.density_at_mode},
                             {"density_se", kr.density_se},
                             {"density_closed_form", kr.density_closed_form},
                             {"distance_decay_exponent", kr.distance_decay.exponent},
                             {"norm_scaling_slope", kr.norm_scaling_slope},
                             {"verdict_matches_explicit", kr.verdict_matches_explicit},
                             {"balance", kr.report.to_json()},
                             {"pass", pass}};
    out.csv_files.emplace_back("curve.csv", csv(curve_rows(kr.report)));
    std::vector<std::array<double, 3>> decay;
    for (std::size_t i = 0; i < kr.distance_decay.x.size(); ++i)
        decay.push_back({kr.distance_decay.x[i], kr.distance_decay.y[i], 0.0});
    out.csv_files.emplace_back("distance_decay.csv", csv(decay));
    return out;
}

RunResult run_heat(const ParsedConfig& cfg) {
    const std::string which = cfg.params["model"].get<std::string>();
    HeatModel model;
    if (which == "additive")
        model = HeatModel::additive();
    else if (which == "clog")
        model = HeatModel::clog(cfg.params["h"].get<double>(), 0.5, 1.0, 0.0);
    else
        throw experiment_error("config: 'params.model' must be clog or additive");
    SpdeParams sp;
    sp.q = cfg.params["q"].get<int>();
    sp.k = cfg.params["k"].get<int>();
    sp.m = cfg.params["m"].get<int>();
    sp.a = cfg.params["a"].get<double>();
    sp.T = cfg.params["T"].get<double>();
    sp.nx = cfg.params["nx"].get<int>();
    sp.n_real = static_cast<std::size_t>(cfg.params["n_real"].get<long long>());
    sp.grid_points = cfg.params["grid_points"].get<int>();
    sp.seed = cfg.seed;
    std::vector<double> points = cfg.params["points"].get<std::vector<double>>();
    std::vector<double> eps = array_param(cfg.params, "eps_grid",
                                          geometric_grid(sp.T * 0.25, 0.5, 10));
    std::vector<double> cov_eps = cfg.params["cov_eps"].get<std::vector<double>>();
    std::vector<CovarianceRow> cov = covariance_bounds(points, cov_eps);
    TestDictionary dict = TestDictionary::standard(static_cast<int>(points.size()));
    BalanceReport rep = spde_verdict(model, points, sp, eps, dict);
    RunResult out;
    out.status = rep.verdict == "regular" ? 0 : 2;
    ojson cov_json = ojson::array();
    std::vector<std::array<double, 3>> cov_rows;
    for (const CovarianceRow& r : cov) {
        cov_json.push_back({{"eps", r.eps}, {"lo", r.lo}, {"hi", r.hi}});
        cov_rows.push_back({r.eps, r.lo, r.hi - r.lo});
    }
    out.report["results"] = rep.to_json();
    out.report["results"]["covariance_table"] = cov_json;
    out.csv_files.emplace_back("curve.csv", csv(curve_rows(rep)));
    out.csv_files.emplace_back("covariance.csv", csv(cov_rows));
    return out;
}

} // namespace

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = [] {
        std::vector<std::string> k;
        for (const auto& [name, fields] : schema_table()) {
            k.push_back(name);
            (void)fields;
        }
        return k;
    }();
    return kinds;
}

nlohmann::ordered_json experiment_schema(const std::string& kind) {
    auto it = schema_table().find(kind);
    if (it == schema_table().end())
        throw experiment_error("unknown kind '" + kind + "'");
    ojson params = ojson::array();
    for (const Field& f : it->second)
        params.push_back({{"name", f.name},
                          {"type", f.type},
                          {"default", f.def},
                          {"description", f.desc}});
    return ojson{{"kind", kind},
                 {"params", params},
                 {"common", {{"seed", "uint64"},
                             {"out", "string"},
                             {"max_paths", "int"},
                             {"max_grid", "int"}}}};
}

void validate_config(const std::string& config_text) {
    (void)parse_config(config_text, -1);
}

RunResult run_experiment(const std::string& config_text, int workers,
                         long long seed_override) {
    ParsedConfig cfg = parse_config(config_text, seed_override);
    default_workers() = workers > 0
                            ? workers
                            : static_cast<int>(std::thread::hardware_concurrency());
    RunResult out;
    if (cfg.kind == "orlicz-check") out = run_orlicz(cfg);
    else if (cfg.kind == "hermite-verify") out = run_hermite(cfg);
    else if (cfg.kind == "mollify-rates") out = run_mollify(cfg);
    else if (cfg.kind == "balance-verdict") out = run_balance(cfg);
    else if (cfg.kind == "interp-props") out = run_interp(cfg);
    else if (cfg.kind == "ibp-density") out = run_ibp(cfg);
    else if (cfg.kind == "sde-elliptic") out = run_sde_elliptic(cfg);
    else if (cfg.kind == "sde-hormander") out = run_sde_hormander(cfg);
    else if (cfg.kind == "heat") out = run_heat(cfg);
    else throw experiment_error("unknown kind '" + cfg.kind + "'");
    ojson report;
    report["kind"] = cfg.kind;
    report["seed"] = cfg.seed;
    report["params"] = cfg.params;
    report["status"] = out.status;
    for (const auto& [key, val] : out.report.items()) report[key] = val;
    out.report = std::move(report);
    return out;
}

int run_to_directory(const std::string& config_text, const std::string& out_dir,
                     int workers, long long seed_override) {
    namespace fs = std::filesystem;
    try {
        auto t0 = std::chrono::steady_clock::now();
        RunResult res = run_experiment(config_text, workers, seed_override);
        double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ojson manifest;
        manifest["config"] = json::parse(config_text);
        manifest["versions"] = {{"reglaw", "0.1.0"},
                                {"compiler", __VERSION__}};
        manifest["seed"] = res.report["seed"];
        manifest["workers"] = workers;
        manifest["wall_time_s"] = wall;
        fs::create_directories(out_dir);
        auto write = [&](const std::string& name, const std::string& body) {
            std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
            if (!f) throw experiment_error("cannot write " + name + " in " + out_dir);
            f << body;
        };
        write("manifest.json", manifest.dump(2) + "\n");
        write("report.json", res.report.dump(2) + "\n");
        for (const auto& [name, body] : res.csv_files) write(name, body);
        return res.status;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
}

} // namespace reglaw
