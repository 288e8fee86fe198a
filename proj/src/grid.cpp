#include "reglaw/grid.hpp"

#include <algorithm>
#include <cmath>

namespace reglaw {

GridFunction::GridFunction(std::vector<double> lo, std::vector<double> hi, std::vector<int> npts)
    : lo_(std::move(lo)), hi_(std::move(hi)), npts_(std::move(npts)) {
    if (lo_.size() != hi_.size() || lo_.size() != npts_.size() || lo_.empty())
        throw grid_error("inconsistent box specification");
    std::size_t total = 1;
    spacing_.resize(npts_.size());
    for (std::size_t a = 0; a < npts_.size(); ++a) {
        if (npts_[a] < 2 || !(hi_[a] > lo_[a]))
            throw grid_error("need at least 2 points per axis and hi > lo");
        spacing_[a] = (hi_[a] - lo_[a]) / (npts_[a] - 1);
        total *= static_cast<std::size_t>(npts_[a]);
    }
    stride_.assign(npts_.size(), 1);
    for (int a = static_cast<int>(npts_.size()) - 2; a >= 0; --a)
        stride_[a] = stride_[a + 1] * static_cast<std::size_t>(npts_[a + 1]);
    values_.assign(total, 0.0);
}

GridFunction GridFunction::sample(std::vector<double> lo, std::vector<double> hi,
                                  std::vector<int> npts, const PointFn& f) {
    GridFunction g(std::move(lo), std::move(hi), std::move(npts));
    std::vector<double> x(g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        g.values_[i] = f(x);
    }
    return g;
}

GridFunction GridFunction::sample1d(double lo, double hi, int npts,
                                    const std::function<double(double)>& f) {
    return sample({lo}, {hi}, {npts},
                  [&](std::span<const double> x) { return f(x[0]); });
}

void GridFunction::point(std::size_t flat, std::span<double> out) const {
    for (std::size_t a = 0; a < npts_.size(); ++a) {
        std::size_t idx = (flat / stride_[a]) % static_cast<std::size_t>(npts_[a]);
        out[a] = lo_[a] + static_cast<double>(idx) * spacing_[a];
    }
}

double GridFunction::quad_weight(std::size_t flat) const {
    double w = 1.0;
    for (std::size_t a = 0; a < npts_.size(); ++a) {
        std::size_t idx = (flat / stride_[a]) % static_cast<std::size_t>(npts_[a]);
        double wa = spacing_[a];
        if (idx == 0 || idx + 1 == static_cast<std::size_t>(npts_[a])) wa *= 0.5;
        w *= wa;
    }
    return w;
}

double GridFunction::cell_volume() const {
    double v = 1.0;
    for (double s : spacing_) v *= s;
    return v;
}

double GridFunction::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += quad_weight(i) * values_[i];
    return s;
}

double GridFunction::inner(const GridFunction& g) const {
    if (g.size() != size()) throw grid_error("grid mismatch in inner product");
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += quad_weight(i) * values_[i] * g.values_[i];
    return s;
}

double GridFunction::lp_norm(double p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        s += quad_weight(i) * std::pow(std::abs(values_[i]), p);
    return std::pow(s, 1.0 / p);
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::mass_of_weights() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += quad_weight(i);
    return s;
}

GridFunction GridFunction::derivative(int axis) const {
    GridFunction out(lo_, hi_, npts_);
    const double h = spacing_[axis];
    const std::size_t st = stride_[axis];
    const std::size_t n = static_cast<std::size_t>(npts_[axis]);
    for (std::size_t i = 0; i < size(); ++i) {
        std::size_t idx = (i / st) % n;
        if (idx == 0)
            out.values_[i] = (values_[i + st] - values_[i]) / h;
        else if (idx + 1 == n)
            out.values_[i] = (values_[i] - values_[i - st]) / h;
        else
            out.values_[i] = (values_[i + st] - values_[i - st]) / (2.0 * h);
    }
    return out;
}

GridFunction GridFunction::partial(const std::vector<int>& alpha) const {
    GridFunction out = *this;
    for (std::size_t a = 0; a < alpha.size(); ++a)
        for (int r = 0; r < alpha[a]; ++r) out = out.derivative(static_cast<int>(a));
    return out;
}

GridFunction GridFunction::restricted(int buffer_cells) const {
    std::vector<double> lo(lo_), hi(hi_);
    std::vector<int> npts(npts_);
    for (std::size_t a = 0; a < npts_.size(); ++a) {
        npts[a] -= 2 * buffer_cells;
        if (npts[a] < 2) throw grid_error("restriction buffer leaves no interior");
        lo[a] += buffer_cells * spacing_[a];
        hi[a] -= buffer_cells * spacing_[a];
    }
    GridFunction out(lo, hi, npts);
    std::vector<std::size_t> idx(npts_.size(), 0);
    for (std::size_t j = 0; j < out.size(); ++j) {
        std::size_t src = 0;
        for (std::size_t a = 0; a < npts_.size(); ++a) {
            std::size_t ia = (j / out.stride_[a]) % static_cast<std::size_t>(out.npts_[a]);
            src += (ia + static_cast<std::size_t>(buffer_cells)) * stride_[a];
        }
        out.values_[j] = values_[src];
    }
    return out;
}

GridFunction GridFunction::with_values(std::vector<double> v) const {
    if (v.size() != values_.size()) throw grid_error("value count mismatch");
    GridFunction out(lo_, hi_, npts_);
    out.values_ = std::move(v);
    return out;
}

namespace {
double catmull_rom(double fm1, double f0, double f1, double f2, double u) {
    double a = -0.5 * fm1 + 1.5 * f0 - 1.5 * f1 + 0.5 * f2;
    double b = fm1 - 2.5 * f0 + 2.0 * f1 - 0.5 * f2;
    double c = 0.5 * (f1 - fm1);
    return ((a * u + b) * u + c) * u + f0;
}
} // namespace

double GridFunction::interp_axis(int axis, std::size_t base, std::span<const double> x) const {
    const double t = (x[static_cast<std::size_t>(axis)] - lo_[axis]) / spacing_[axis];
    int i0 = static_cast<int>(std::floor(t));
    i0 = std::clamp(i0, 0, npts_[axis] - 2);
    const double u = t - i0;
    auto fetch = [&](int i) -> double {
        i = std::clamp(i, 0, npts_[axis] - 1);
        std::size_t at = base + static_cast<std::size_t>(i) * stride_[axis];
        if (axis + 1 == dim()) return values_[at];
        return interp_axis(axis + 1, at, x);
    };
    return catmull_rom(fetch(i0 - 1), fetch(i0), fetch(i0 + 1), fetch(i0 + 2), u);
}

double GridFunction::value_at(std::span<const double> x) const {
    for (int a = 0; a < dim(); ++a)
        if (x[a] < lo_[a] || x[a] > hi_[a]) return 0.0;
    return interp_axis(0, 0, x);
}

GridFunction& GridFunction::operator+=(const GridFunction& g) {
    if (g.size() != size()) throw grid_error("grid mismatch");
    for (std::size_t i = 0; i < size(); ++i) values_[i] += g.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& g) {
    if (g.size() != size()) throw grid_error("grid mismatch");
    for (std::size_t i = 0; i < size(); ++i) values_[i] -= g.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

} // namespace reglaw
