#include "reglaw/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reglaw {

namespace {
constexpr double kOverflow = 1e300;
}

YoungFunction::YoungFunction(std::function<double(double)> e, std::string label,
                             double power_p, bool validate)
    : e_(std::move(e)), label_(std::move(label)), power_p_(power_p) {
    if (validate) certify_class();
}

void YoungFunction::certify_class() {
    if (std::abs(e_(0.0)) > 1e-14) throw young_error(label_ + ": e(0) != 0");
    double prev_val = 0.0, prev_ratio = 0.0;
    double lambda = 1.0;
    for (int i = 0; i <= 160; ++i) {
        double s = std::pow(10.0, -8.0 + 0.1 * i);
        double v = e_(s);
        if (!(v > 0.0) || !std::isfinite(v))
            throw young_error(label_ + ": e not positive finite on (0,inf)");
        if (std::abs(e_(-s) - v) > 1e-12 * v)
            throw young_error(label_ + ": e not symmetric");
        if (v < prev_val * (1.0 - 1e-12))
            throw young_error(label_ + ": e not increasing");
        double ratio = v / s;
        if (ratio < prev_ratio * (1.0 - 1e-9))
            throw young_error(label_ + ": e(s)/s not nondecreasing");
        double v2 = e_(2.0 * s);
        if (!std::isfinite(v2)) throw young_error(label_ + ": doubling check overflow");
        lambda = std::max(lambda, v2 / v);
        prev_val = v;
        prev_ratio = ratio;
    }
    if (!(lambda < 1e6)) throw young_error(label_ + ": doubling constant too large");
    lambda_ = lambda;
}

YoungFunction YoungFunction::power(double p) {
    if (p < 1.0) throw young_error("power gauge needs p >= 1");
    auto e = [p](double s) { return std::pow(std::abs(s), p); };
    return YoungFunction(e, "power:" + std::to_string(p), p, true);
}

YoungFunction YoungFunction::log_entropy() {
    auto e = [](double s) {
        double t = std::abs(s);
        return (1.0 + t) * std::log1p(t);
    };
    return YoungFunction(e, "log_entropy", 0.0, true);
}

YoungFunction YoungFunction::loglog() {
    auto e = [](double s) {
        double t = std::abs(s);
        return (1.0 + t) * std::log1p(std::log1p(t));
    };
    return YoungFunction(e, "loglog", 0.0, true);
}

YoungFunction YoungFunction::custom(std::function<double(double)> e, std::string label) {
    return YoungFunction(std::move(e), std::move(label), 0.0, true);
}

YoungFunction YoungFunction::from_label(const std::string& label) {
    if (label == "log_entropy") return log_entropy();
    if (label == "loglog") return loglog();
    if (label.rfind("power:", 0) == 0) return power(std::stod(label.substr(6)));
    throw young_error("unknown gauge label: " + label);
}

double YoungFunction::operator()(double s) const { return e_(s); }

double YoungFunction::inverse(double a) const {
    if (a <= 0.0) return 0.0;
    if (power_p_ > 0.0) return std::pow(a, 1.0 / power_p_);
    double hi = 1.0;
    while (e_(hi) < a && hi < kOverflow) hi *= 2.0;
    double lo = hi * 0.5 < 1.0 ? 0.0 : hi * 0.5;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (e_(mid) <= a ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double YoungFunction::beta(double R) const {
    if (!(R > 0.0)) throw young_error("beta needs R > 0");
    return R / inverse(R);
}

double YoungFunction::phi(double r) const {
    if (!(r > 0.0)) throw young_error("phi needs r > 0");
    return 1.0 / inverse(1.0 / r);
}

YoungFunction YoungFunction::conjugate() const {
    if (power_p_ > 1.0) {
        double p = power_p_;
        double pstar = p / (p - 1.0);
        double c = (p - 1.0) * std::pow(p, -pstar);
        auto e = [c, pstar](double s) { return c * std::pow(std::abs(s), pstar); };
        // Conjugates may leave the doubling class; skip class certification.
        return YoungFunction(e, "conjugate(" + label_ + ")", 0.0, false);
    }
    auto base = e_;
    auto e = [base](double s) {
        s = std::abs(s);
        if (s == 0.0) return 0.0;
        auto val = [&](double t) { return s * t - base(t); };
        // Expand until past the (unique) maximum of the concave objective.
        double hi = 1.0;
        while (val(2.0 * hi) > val(hi)) {
            hi *= 2.0;
            if (hi > kOverflow) return kOverflow;
        }
        double a = 0.0, b = 2.0 * hi;
        const double gr = 0.6180339887498949;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = val(x1), f2 = val(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + b); ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = val(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = val(x1);
            }
        }
        return std::max(0.0, val(0.5 * (a + b)));
    };
    return YoungFunction(e, "conjugate(" + label_ + ")", 0.0, false);
}

double luxembourg_norm(const GridFunction& f, const YoungFunction& e) {
    double l1 = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        l1 += f.quad_weight(i) * std::abs(f[i]);
        linf = std::max(linf, std::abs(f[i]));
    }
    if (linf == 0.0) return 0.0;

    auto target = [&](double c) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            double v = e(f[i] / c);
            if (!std::isfinite(v) || v > kOverflow) return kOverflow;
            s += f.quad_weight(i) * v;
            if (s > kOverflow) return kOverflow;
        }
        return s;
    };

    double hi = std::max(l1 + linf, 1e-300);
    int guard = 0;
    while (target(hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 2000) throw young_error("non-integrable: no bracketing c found");
    }
    double lo = hi;
    guard = 0;
    while (target(lo * 0.5) <= 1.0) {
        lo *= 0.5;
        if (++guard > 2000) break;
    }
    lo *= 0.5;
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (target(mid) <= 1.0 ? hi : lo) = mid;
    }
    // hi is feasible (target <= 1), so it upper-bounds the true infimum and
    // the Holder product bound stays valid for the quadrature measure.
    return hi;
}

std::vector<std::vector<int>> multi_indices_up_to(int dim, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(dim, 0);
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == dim) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[axis] = v;
            rec(axis + 1, remaining - v);
        }
        cur[axis] = 0;
    };
    rec(0, k);
    return out;
}

namespace {

GridFunction monomial_weighted(const GridFunction& f, const std::vector<int>& gamma) {
    GridFunction out = f;
    std::vector<double> x(f.dim());
    bool trivial = true;
    for (int g : gamma) trivial = trivial && g == 0;
    if (trivial) return out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.point(i, x);
        double w = 1.0;
        for (int a = 0; a < f.dim(); ++a)
            for (int r = 0; r < gamma[a]; ++r) w *= x[a];
        out[i] = f[i] * w;
    }
    return out;
}

} // namespace

double weighted_sobolev_orlicz_norm(const GridFunction& f, int k, int l,
                                    const YoungFunction& e) {
    for (int a = 0; a < f.dim(); ++a)
        if (f.points(a) < 2 * k + 3 + 2 * (k + 2))
            throw grid_error("grid too coarse for order-" + std::to_string(k) +
                             " differences");
    const int buffer = k + 2;
    double total = 0.0;
    for (const auto& alpha : multi_indices_up_to(f.dim(), k)) {
        GridFunction pf = f.partial(alpha);
        for (const auto& gamma : multi_indices_up_to(f.dim(), l))
            total += luxembourg_norm(monomial_weighted(pf, gamma).restricted(buffer), e);
    }
    return total;
}

double sobolev_orlicz_norm(const GridFunction& f, int k, const YoungFunction& e) {
    const int buffer = k + 2;
    double total = 0.0;
    for (const auto& alpha : multi_indices_up_to(f.dim(), k))
        total += luxembourg_norm(f.partial(alpha).restricted(buffer), e);
    return total;
}

double sobolev_sup_norm(const GridFunction& f, int k) {
    const int buffer = k + 2;
    double total = 0.0;
    for (const auto& alpha : multi_indices_up_to(f.dim(), k))
        total += f.partial(alpha).restricted(buffer).max_abs();
    return total;
}

double holder_defect(const GridFunction& f, const GridFunction& g, const YoungFunction& e) {
    return 2.0 * luxembourg_norm(f, e) * luxembourg_norm(g, e.conjugate()) -
           std::abs(f.inner(g));
}

} // namespace reglaw
