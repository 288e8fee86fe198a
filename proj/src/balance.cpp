#include "reglaw/balance.hpp"

#include <algorithm>
#include <cmath>

#include "reglaw/rates.hpp"

namespace reglaw {

namespace {

double wasserstein_1d(const ParticleMeasure& mu, const ParticleMeasure& nu) {
    // Quantile coupling distance between the density closures.
    const double lo = -14.0, hi = 14.0;
    const int n = 7001;
    const double h = (hi - lo) / (n - 1);
    double Fmu = 0.0, Fnu = 0.0, dist = 0.0;
    double pmu_prev = 0.0, pnu_prev = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = lo + i * h;
        double pmu = mu.density_at(std::span<const double>(&x, 1));
        double pnu = nu.density_at(std::span<const double>(&x, 1));
        if (i > 0) {
            Fmu += 0.5 * h * (pmu + pmu_prev);
            Fnu += 0.5 * h * (pnu + pnu_prev);
            dist += h * std::abs(Fmu - Fnu);
        }
        pmu_prev = pmu;
        pnu_prev = pnu;
    }
    return dist;
}

} // namespace

DkResult dk_distance(const ParticleMeasure& mu, const ParticleMeasure& nu, int k,
                     const TestDictionary& dict) {
    if (mu.dim() != nu.dim()) throw balance_error("dimension mismatch");
    DkResult r;
    double best = -1.0;
    // distance_lower parallelizes internally; recompute argmax serially on
    // the per-entry values would double work, so inline the loop here.
    for (std::size_t j = 0; j < dict.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < mu.count(); ++i) s += mu.weight(i) * dict.eval(j, mu.position(i));
        for (std::size_t i = 0; i < nu.count(); ++i) s -= nu.weight(i) * dict.eval(j, nu.position(i));
        double v = std::abs(s) / dict.k_norm(j, k);
        if (v > best) {
            best = v;
            r.argmax = j;
        }
    }
    r.lower = best;
    if (mu.dim() == 1 && k >= 1 && mu.has_density() && nu.has_density())
        r.wasserstein_upper = wasserstein_1d(mu, nu);
    return r;
}

ParticleMeasure grid_density_particles(const GridFunction& density) {
    const int d = density.dim();
    std::vector<double> pos;
    std::vector<double> w;
    pos.reserve(density.size() * static_cast<std::size_t>(d));
    w.reserve(density.size());
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < density.size(); ++i) {
        density.point(i, x);
        pos.insert(pos.end(), x.begin(), x.end());
        w.push_back(density[i] * density.quad_weight(i));
    }
    ParticleMeasure out(d, std::move(pos), std::move(w));
    GridFunction copy = density;
    out.set_density([copy](std::span<const double> p) { return copy.value_at(p); });
    return out;
}

PiResult pi_functional(const ParticleMeasure& mu, const std::vector<GridFunction>& approximants,
                       int q, int k, int m, const YoungFunction& e,
                       const TestDictionary& dict, int N) {
    N = std::min<int>(N, static_cast<int>(approximants.size()));
    N = std::min(N, 12);
    PiResult out;
    const int d = mu.dim();
    double running = 0.0;
    int grew = 0;
    double prev_term = 0.0;
    for (int n = 0; n < N; ++n) {
        const GridFunction& p = approximants[static_cast<std::size_t>(n)];
        ParticleMeasure mun = grid_density_particles(p);
        double dk = dk_distance(mu, mun, k, dict).lower;
        double norm = weighted_sobolev_orlicz_norm(p, 2 * m + q, 2 * m, e);
        double dist_term = std::pow(2.0, n * (q + k)) * e.beta(std::pow(2.0, n * d)) * dk;
        double norm_term = std::pow(2.0, -2.0 * n * m) * norm;
        double term = dist_term + norm_term;
        LevelRow row;
        row.level = n;
        row.R = norm;
        row.dk = dk;
        row.norm = norm;
        out.rows.push_back(row);
        running += term;
        if (n > 0 && term > prev_term * 1.05)
            ++grew;
        else
            grew = 0;
        prev_term = term;
        out.value = running;
        if (term < 1e-3 * running && n >= 2) {
            out.tail_estimate = term;
            break;
        }
        out.tail_estimate = term;
    }
    out.diverging = grew >= 3 || out.tail_estimate > 0.25 * out.value;
    return out;
}

HqResult hypothesis_Hq_statistic(const std::vector<std::pair<double, double>>& curve,
                                 int q, int k, int m, const YoungFunction& e, double a,
                                 int dim) {
    if (curve.size() < 6) throw balance_error("curve too short (need >= 6 points)");
    auto sorted = curve;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back().first < 1000.0 * sorted.front().first)
        throw balance_error("curve too short (R must span >= 3 decades)");
    std::vector<double> Rs, stats;
    for (std::size_t i = sorted.size() / 2; i < sorted.size(); ++i) {
        double R = sorted[i].first, dk = sorted[i].second;
        double L = R * std::pow(std::log(R), a);
        double s = std::pow(L, 1.0 + static_cast<double>(k + q) / (2.0 * m)) *
                   e.beta(std::pow(L, static_cast<double>(dim) / (2.0 * m))) * dk / R;
        Rs.push_back(R);
        stats.push_back(std::max(s, 1e-30));
    }
    HqResult out;
    out.limsup = *std::max_element(stats.begin(), stats.end());
    out.slope = fit_slope(Rs, stats);
    out.regular = out.slope <= 0.05;
    return out;
}

double fourier_balance(const std::vector<FourierPoint>& curve, int k) {
    std::vector<double> xi, bound;
    for (const auto& p : curve) {
        xi.push_back(p.xi);
        bound.push_back(p.xi * p.approx_error + std::pow(p.xi, -k) * p.weight_size);
    }
    return -fit_slope(xi, bound);
}

double fourier_balance_model(double h, int k, const std::vector<double>& xi_grid) {
    std::vector<FourierPoint> curve;
    for (double xi : xi_grid) {
        double best = 1e300;
        double err_best = 0.0, w_best = 0.0;
        for (int i = 0; i <= 1200; ++i) {
            double delta = std::pow(10.0, -16.0 + 16.0 * i / 1200.0);
            double err = std::pow(delta, 0.5 * (1.0 + h));
            double wt = std::pow(delta, -0.5 * k);
            double b = xi * err + std::pow(xi, -k) * wt;
            if (b < best) {
                best = b;
                err_best = err;
                w_best = wt;
            }
        }
        curve.push_back({xi, err_best, w_best});
    }
    return fourier_balance(curve, k);
}

nlohmann::ordered_json BalanceReport::to_json() const {
    nlohmann::ordered_json j;
    j["parameters"] = {{"q", q}, {"k", k}, {"m", m}, {"gauge", e_label}, {"a", a}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : table)
        rows.push_back({{"level", r.level}, {"R", r.R}, {"dk", r.dk}, {"norm", r.norm}});
    j["table"] = rows;
    j["pi_value"] = pi_value;
    j["pi_tail"] = pi_tail;
    j["limsup_statistic"] = limsup_statistic;
    j["trend_slope"] = trend_slope;
    j["verdict"] = verdict;
    j["provenance"] = provenance;
    return j;
}

BalanceReport theorem2C_verdict(const ParticleMeasure& mu,
                                const std::vector<GridFunction>& approximants,
                                int q, int k, int m, const YoungFunction& e, double a,
                                const TestDictionary& dict, int N) {
    BalanceReport rep;
    rep.q = q;
    rep.k = k;
    rep.m = m;
    rep.e_label = e.label();
    rep.a = a;
    PiResult pi = pi_functional(mu, approximants, q, k, m, e, dict, N);
    rep.table = pi.rows;
    rep.pi_value = pi.value;
    rep.pi_tail = pi.tail_estimate;
    bool regular = !pi.diverging;
    try {
        std::vector<std::pair<double, double>> curve;
        for (const auto& r : pi.rows) curve.emplace_back(r.R, r.dk);
        HqResult hq = hypothesis_Hq_statistic(curve, q, k, m, e, a, mu.dim());
        rep.limsup_statistic = hq.limsup;
        rep.trend_slope = hq.slope;
        regular = regular && hq.regular;
    } catch (const balance_error&) {
        // Curve too short for the limsup instrument; verdict rests on pi.
        rep.limsup_statistic = 0.0;
        rep.trend_slope = 0.0;
    }
    rep.verdict = regular ? "regular" : "inconclusive";
    rep.provenance["dictionary_defect"] = dict.defect();
    rep.provenance["levels_used"] = rep.table.size();
    return rep;
}

} // namespace reglaw
