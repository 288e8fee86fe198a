#include "reglaw/dictionary.hpp"

#include <algorithm>
#include <cmath>

#include "reglaw/hermite.hpp"
#include "reglaw/parallel.hpp"
#include "reglaw/young.hpp"

namespace reglaw {

namespace {

// sup |f^(r)| on [-12, 12] by iterated central differences.
std::vector<double> derivative_sups(const std::function<double(double)>& f, int k_max) {
    const double h = 2e-3;
    const int n = static_cast<int>(24.0 / h) + 1;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = f(-12.0 + i * h);
    std::vector<double> sups;
    for (int r = 0; r <= k_max; ++r) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::abs(x));
        sups.push_back(s);
        std::vector<double> d(v.size(), 0.0);
        for (std::size_t i = 1; i + 1 < v.size(); ++i)
            d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        v = std::move(d);
    }
    return sups;
}

} // namespace

void TestDictionary::add_entry(const std::vector<int>& axes) {
    Entry e;
    e.axes = axes;
    e.label = "";
    for (std::size_t a = 0; a < axes.size(); ++a) {
        if (a) e.label += " x ";
        e.label += prims_[static_cast<std::size_t>(axes[a])].label;
    }
    e.knorm.resize(static_cast<std::size_t>(k_max_) + 1);
    auto orders = multi_indices_up_to(dim_, k_max_);
    for (int k = 0; k <= k_max_; ++k) {
        double best = 0.0;
        for (const auto& alpha : orders) {
            int total = 0;
            for (int v : alpha) total += v;
            if (total > k) continue;
            double prod = 1.0;
            for (int a = 0; a < dim_; ++a)
                prod *= prims_[static_cast<std::size_t>(axes[static_cast<std::size_t>(a)])]
                            .dsup[static_cast<std::size_t>(alpha[static_cast<std::size_t>(a)])];
            best = std::max(best, prod);
        }
        e.knorm[static_cast<std::size_t>(k)] = best;
    }
    if (e.knorm[0] > 0.0) entries_.push_back(std::move(e));
}

TestDictionary TestDictionary::standard(int dim, int k_max) {
    TestDictionary d;
    d.dim_ = dim;
    d.k_max_ = k_max;

    auto add_prim = [&](std::function<double(double)> f, const std::string& label) {
        Primitive p;
        p.f = std::move(f);
        p.dsup = derivative_sups(p.f, k_max);
        p.label = label;
        d.prims_.push_back(std::move(p));
        return static_cast<int>(d.prims_.size()) - 1;
    };

    std::vector<int> gaussians, waves, hermites;
    const std::vector<double> centers =
        dim == 1 ? std::vector<double>{-4, -3, -2, -1, 0, 1, 2, 3, 4}
                 : std::vector<double>{-2, -1, 0, 1, 2};
    const std::vector<double> widths = {0.35, 0.7, 1.4, 2.8};
    for (double c : centers)
        for (double w : widths)
            gaussians.push_back(add_prim(
                [c, w](double t) { return std::exp(-0.5 * (t - c) * (t - c) / (w * w)); },
                "gauss(" + std::to_string(c) + "," + std::to_string(w) + ")"));

    const std::vector<double> freqs = {0.5, 1.0, 2.0, 3.14159265358979323846, 4.0, 6.0};
    for (double om : freqs)
        for (int ph = 0; ph < 2; ++ph)
            waves.push_back(add_prim(
                [om, ph](double t) {
                    double env = std::exp(-t * t / 36.0);
                    return (ph ? std::cos(om * t) : std::sin(om * t)) * env;
                },
                "wave(" + std::to_string(om) + "," + (ph ? "cos" : "sin") + ")"));

    for (int j = 1; j <= 4; ++j)
        for (double s : {0.7, 1.0})
            hermites.push_back(add_prim(
                [j, s](double t) { return hermite_h(j, s * t); },
                "hermite(" + std::to_string(j) + "," + std::to_string(s) + ")"));

    if (dim == 1) {
        for (int p : gaussians) d.add_entry({p});
        for (int p : waves) d.add_entry({p});
        for (int p : hermites) d.add_entry({p});
    } else if (dim == 2) {
        // Radial-style Gaussian products over a center lattice.
        for (int p1 : gaussians)
            for (int p2 : gaussians)
                if (d.prims_[static_cast<std::size_t>(p1)].label.substr(0, 5) == "gauss" &&
                    p1 <= p2 && (p1 + p2) % 2 == 0)
                    d.add_entry({p1, p2});
        int env = gaussians[gaussians.size() / 2]; // a wide centered Gaussian
        for (int p : waves) {
            d.add_entry({p, env});
            d.add_entry({env, p});
        }
        for (int w1 : {waves[2], waves[3], waves[6], waves[7]})
            for (int w2 : {waves[2], waves[3], waves[6], waves[7]}) d.add_entry({w1, w2});
        for (int h1 : {hermites[1], hermites[3]})
            for (int h2 : {hermites[1], hermites[3]}) d.add_entry({h1, h2});
    } else {
        throw measure_error("dictionary supports d = 1, 2");
    }

    d.compute_defect();
    return d;
}

double TestDictionary::eval(std::size_t j, std::span<const double> x) const {
    const Entry& e = entries_[j];
    double v = 1.0;
    for (int a = 0; a < dim_; ++a)
        v *= prims_[static_cast<std::size_t>(e.axes[static_cast<std::size_t>(a)])].f(
            x[static_cast<std::size_t>(a)]);
    return v;
}

double TestDictionary::k_norm(std::size_t j, int k) const {
    if (k > k_max_) throw measure_error("dictionary does not cover this k");
    return entries_[j].knorm[static_cast<std::size_t>(k)];
}

double TestDictionary::distance_lower(const ParticleMeasure& mu, const ParticleMeasure& nu,
                                      int k) const {
    if (mu.dim() != dim_ || nu.dim() != dim_)
        throw measure_error("dimension mismatch in distance estimate");
    std::vector<double> vals(entries_.size(), 0.0);
    parallel_for(entries_.size(), default_workers(), [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t i = 0; i < mu.count(); ++i) s += mu.weight(i) * eval(j, mu.position(i));
        for (std::size_t i = 0; i < nu.count(); ++i) s -= nu.weight(i) * eval(j, nu.position(i));
        vals[j] = std::abs(s) / k_norm(j, k);
    });
    double best = 0.0;
    for (double v : vals) best = std::max(best, v);
    return best;
}

void TestDictionary::compute_defect() {
    if (dim_ != 1) {
        defect_ = 0.0;
        return;
    }
    ParticleMeasure d0 = ParticleMeasure::dirac({0.0});
    ParticleMeasure d1 = ParticleMeasure::dirac({1.0});
    double est = distance_lower(d0, d1, 0);
    defect_ = 1.0 - est / 2.0; // exact total variation is 2
}

} // namespace reglaw
