#include "reglaw/hermite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "reglaw/parallel.hpp"

namespace reglaw {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Normalized-recurrence iterator with a power-of-two exponent offset so the
// Gaussian seed can live far below double range and still re-emerge for
// large n (needed near the edge nodes of big quadrature rules).
class HermiteIter {
public:
    explicit HermiteIter(double t) : t_(t) {
        double l2 = (-0.25 * std::log(kPi) - 0.5 * t * t) / std::log(2.0);
        exp_ = static_cast<int>(std::floor(l2));
        cur_ = std::exp2(l2 - exp_);
        prev_ = 0.0;
    }

    // h_j for the current j (starts at 0).
    double value() const { return ldexp_safe(cur_, exp_); }
    // h_{j-1}, same scaling.
    double prev_value() const { return ldexp_safe(prev_, exp_); }

    void advance() {
        double nxt = t_ * std::sqrt(2.0 / (j_ + 1)) * cur_ -
                     std::sqrt(static_cast<double>(j_) / (j_ + 1)) * prev_;
        prev_ = cur_;
        cur_ = nxt;
        ++j_;
        double m = std::max(std::abs(cur_), std::abs(prev_));
        if (m > 0x1p400) {
            cur_ *= 0x1p-400;
            prev_ *= 0x1p-400;
            exp_ += 400;
        } else if (m > 0.0 && m < 0x1p-400) {
            cur_ *= 0x1p400;
            prev_ *= 0x1p400;
            exp_ -= 400;
        }
    }

private:
    static double ldexp_safe(double m, int e) {
        if (e < -2000) return 0.0;
        return std::ldexp(m, e);
    }
    double t_, cur_, prev_;
    int exp_, j_ = 0;
};

} // namespace

double hermite_h(int n, double t) {
    if (n < 0) throw hermite_error("negative Hermite index");
    HermiteIter it(t);
    for (int j = 0; j < n; ++j) it.advance();
    return it.value();
}

void hermite_all(int nmax, double t, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(nmax) + 1);
    HermiteIter it(t);
    for (int j = 0; j <= nmax; ++j) {
        out[static_cast<std::size_t>(j)] = it.value();
        it.advance();
    }
}

void hermite_all_deriv(int nmax, double t, std::vector<double>& val,
                       std::vector<double>& deriv) {
    hermite_all(nmax, t, val);
    deriv.resize(val.size());
    deriv[0] = -t * val[0];
    for (int j = 1; j <= nmax; ++j)
        deriv[static_cast<std::size_t>(j)] =
            std::sqrt(2.0 * j) * val[static_cast<std::size_t>(j - 1)] -
            t * val[static_cast<std::size_t>(j)];
}

GaussHermite GaussHermite::build(int n) {
    if (n < 1) throw hermite_error("quadrature rule needs n >= 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max(1, n - 1));
    for (int j = 1; j < n; ++j) sub(j - 1) = std::sqrt(0.5 * j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(std::max(0, n - 1)),
                              Eigen::EigenvaluesOnly);
    GaussHermite rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()(i);
        // One Newton step on h_n sharpens the eigenvalue to full precision.
        HermiteIter it(x);
        for (int j = 0; j < n; ++j) it.advance();
        double hn = it.value(), hnm1 = it.prev_value();
        double dh = std::sqrt(2.0 * n) * hnm1 - x * hn;
        if (dh != 0.0) x -= hn / dh;
        rule.nodes[static_cast<std::size_t>(i)] = x;
        double hm = hermite_h(n - 1, x);
        rule.weights[static_cast<std::size_t>(i)] = 1.0 / (n * hm * hm);
    }
    return rule;
}

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double smooth_plateau(double r, double r1, double r2) {
    return 1.0 - smooth_step((r - r1) / (r2 - r1));
}

double CutoffA::operator()(double t) const {
    if (t <= 0.25 || t >= 4.0) return 0.0;
    if (t <= 1.0) return smooth_step((t - 0.25) / 0.75);
    return 1.0 - smooth_step((t / 4.0 - 0.25) / 0.75);
}

double CutoffA::norm_l(int l) const {
    const double h = 1e-3;
    const int n = static_cast<int>(5.0 / h);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (*this)(i * h);
    double total = 0.0;
    for (int ord = 0; ord <= l; ++ord) {
        double sup = 0.0;
        for (double x : v) sup = std::max(sup, std::abs(x));
        total += sup;
        std::vector<double> d(v.size());
        for (std::size_t i = 1; i + 1 < v.size(); ++i)
            d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        d.front() = d.size() > 1 ? d[1] : 0.0;
        d.back() = d[d.size() - 2];
        v = std::move(d);
    }
    return total;
}

std::size_t DyadicBlockSet::pair_index(int a1, int a2) const {
    int j = a1 + a2;
    return static_cast<std::size_t>(j) * (j + 1) / 2 + static_cast<std::size_t>(a1);
}

DyadicBlockSet DyadicBlockSet::create(int dim, int n_max, int quad_points) {
    if (dim < 1 || dim > 2) throw hermite_error("dyadic blocks support d = 1, 2");
    if (n_max < 0) throw hermite_error("n_max must be nonnegative");
    DyadicBlockSet b;
    b.dim_ = dim;
    b.n_max_ = n_max;
    b.level_cap_ = static_cast<int>(std::pow(4.0, n_max + 1)) - 1;
    if (dim == 2 && b.level_cap_ > 1023)
        throw hermite_error("level enumeration budget exceeded in d = 2");
    int q = quad_points;
    if (q <= 0) q = std::min(b.level_cap_ + 129, dim == 1 ? 4096 : 512);
    b.rule_ = GaussHermite::build(q);
    return b;
}

double DyadicBlockSet::coefficient(int n, int level) const {
    if (n > n_max_) throw hermite_error("block index beyond n_max");
    // the cutoff pairs tile all levels >= 1; level 0 rides with block 0
    if (level == 0) return n == 0 ? 1.0 : 0.0;
    double scale = std::pow(4.0, n);
    return a_(static_cast<double>(level) / scale);
}

double DyadicBlockSet::kernel(int n, std::span<const double> x,
                              std::span<const double> y) const {
    if (dim_ == 1) {
        int cap = static_cast<int>(std::pow(4.0, n + 1)) - 1;
        HermiteIter ix(x[0]), iy(y[0]);
        double s = 0.0;
        for (int j = 0; j <= cap; ++j) {
            double c = coefficient(n, j);
            if (c != 0.0) s += c * ix.value() * iy.value();
            ix.advance();
            iy.advance();
        }
        return s;
    }
    int cap = std::min(level_cap_, static_cast<int>(std::pow(4.0, n + 1)) - 1);
    std::vector<double> hx1, hx2, hy1, hy2;
    hermite_all(cap, x[0], hx1);
    hermite_all(cap, x[1], hx2);
    hermite_all(cap, y[0], hy1);
    hermite_all(cap, y[1], hy2);
    double s = 0.0;
    for (int j = 0; j <= cap; ++j) {
        double c = coefficient(n, j);
        if (c == 0.0) continue;
        double level_sum = 0.0;
        for (int a1 = 0; a1 <= j; ++a1) {
            int a2 = j - a1;
            level_sum += hx1[static_cast<std::size_t>(a1)] * hy1[static_cast<std::size_t>(a1)] *
                         hx2[static_cast<std::size_t>(a2)] * hy2[static_cast<std::size_t>(a2)];
        }
        s += c * level_sum;
    }
    return s;
}

std::vector<double> DyadicBlockSet::hermite_coeffs(const GridFunction& f) const {
    const int L = level_cap_;
    const std::size_t nq = rule_.nodes.size();
    if (dim_ == 1) {
        std::vector<double> c(static_cast<std::size_t>(L) + 1, 0.0);
        for (std::size_t i = 0; i < nq; ++i) {
            double x = rule_.nodes[i];
            double wf = rule_.weights[i] * f.value_at(std::span<const double>(&x, 1));
            if (wf == 0.0) continue;
            HermiteIter it(x);
            for (int j = 0; j <= L; ++j) {
                c[static_cast<std::size_t>(j)] += wf * it.value();
                it.advance();
            }
        }
        return c;
    }
    // Separated two-stage transform: first the x1 axis, then x2.
    std::vector<double> A((static_cast<std::size_t>(L) + 1) * nq, 0.0);
    parallel_for(nq, default_workers(), [&](std::size_t iy) {
        double y = rule_.nodes[iy];
        for (std::size_t ix = 0; ix < nq; ++ix) {
            double pt[2] = {rule_.nodes[ix], y};
            double wf = rule_.weights[ix] * f.value_at(pt);
            if (wf == 0.0) continue;
            HermiteIter it(rule_.nodes[ix]);
            for (int a1 = 0; a1 <= L; ++a1) {
                A[static_cast<std::size_t>(a1) * nq + iy] += wf * it.value();
                it.advance();
            }
        }
    });
    std::vector<double> c((static_cast<std::size_t>(L) + 1) * (static_cast<std::size_t>(L) + 2) / 2, 0.0);
    for (std::size_t iy = 0; iy < nq; ++iy) {
        double w = rule_.weights[iy];
        HermiteIter it(rule_.nodes[iy]);
        for (int a2 = 0; a2 <= L; ++a2) {
            double wy = w * it.value();
            if (wy != 0.0)
                for (int a1 = 0; a1 + a2 <= L; ++a1)
                    c[pair_index(a1, a2)] += wy * A[static_cast<std::size_t>(a1) * nq + iy];
            it.advance();
        }
    }
    return c;
}

GridFunction DyadicBlockSet::synthesize(const std::vector<double>& coeffs,
                                        const std::vector<double>& level_gain,
                                        const GridFunction& like) const {
    const int L = level_cap_;
    GridFunction out = like.with_values(std::vector<double>(like.size(), 0.0));
    if (dim_ == 1) {
        parallel_for(out.size(), default_workers(), [&](std::size_t i) {
            double x = out.coord(0, static_cast<int>(i));
            HermiteIter it(x);
            double s = 0.0;
            for (int j = 0; j <= L; ++j) {
                double g = level_gain[static_cast<std::size_t>(j)];
                if (g != 0.0) s += g * coeffs[static_cast<std::size_t>(j)] * it.value();
                it.advance();
            }
            out[i] = s;
        });
        return out;
    }
    const int n1 = like.points(0), n2 = like.points(1);
    // B[a1][i2] = sum_{a2} gain(a1+a2) c_{a1,a2} h_{a2}(x2_i2)
    std::vector<double> B(static_cast<std::size_t>(L + 1) * n2, 0.0);
    parallel_for(static_cast<std::size_t>(n2), default_workers(), [&](std::size_t i2) {
        HermiteIter it(like.coord(1, static_cast<int>(i2)));
        for (int a2 = 0; a2 <= L; ++a2) {
            double h = it.value();
            if (h != 0.0)
                for (int a1 = 0; a1 + a2 <= L; ++a1) {
                    double g = level_gain[static_cast<std::size_t>(a1 + a2)];
                    if (g != 0.0)
                        B[static_cast<std::size_t>(a1) * n2 + i2] +=
                            g * coeffs[pair_index(a1, a2)] * h;
                }
            it.advance();
        }
    });
    parallel_for(static_cast<std::size_t>(n1), default_workers(), [&](std::size_t i1) {
        HermiteIter it(like.coord(0, static_cast<int>(i1)));
        std::vector<double> row(static_cast<std::size_t>(n2), 0.0);
        for (int a1 = 0; a1 <= L; ++a1) {
            double h = it.value();
            if (h != 0.0)
                for (int i2 = 0; i2 < n2; ++i2)
                    row[static_cast<std::size_t>(i2)] +=
                        h * B[static_cast<std::size_t>(a1) * n2 + static_cast<std::size_t>(i2)];
            it.advance();
        }
        for (int i2 = 0; i2 < n2; ++i2)
            out[i1 * static_cast<std::size_t>(n2) + static_cast<std::size_t>(i2)] =
                row[static_cast<std::size_t>(i2)];
    });
    return out;
}

GridFunction DyadicBlockSet::convolve(int n, const GridFunction& f) const {
    if (n > n_max_) throw hermite_error("block index beyond n_max");
    std::vector<double> gain(static_cast<std::size_t>(level_cap_) + 1, 0.0);
    for (int j = 0; j <= level_cap_; ++j)
        gain[static_cast<std::size_t>(j)] = coefficient(n, j);
    return synthesize(hermite_coeffs(f), gain, f);
}

double eigen_check(const std::vector<int>& alpha, const GridFunction& geometry) {
    const int d = geometry.dim();
    if (static_cast<int>(alpha.size()) != d) throw hermite_error("multi-index/grid dim mismatch");
    int total = 0;
    for (int a : alpha) total += a;
    std::vector<double> x(static_cast<std::size_t>(d));
    GridFunction H = geometry;
    for (std::size_t i = 0; i < H.size(); ++i) {
        H.point(i, x);
        double v = 1.0;
        for (int a = 0; a < d; ++a) v *= hermite_h(alpha[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
        H[i] = v;
    }
    double lambda = 2.0 * total + d;
    double sup = 0.0;
    // -Δ by central differences, interior points only.
    GridFunction lap = H.with_values(std::vector<double>(H.size(), 0.0));
    for (int a = 0; a < d; ++a) {
        GridFunction second = H.derivative(a).derivative(a);
        lap += second;
    }
    for (std::size_t i = 0; i < H.size(); ++i) {
        H.point(i, x);
        bool interior = true;
        for (int a = 0; a < d; ++a) {
            double rel = (x[static_cast<std::size_t>(a)] - geometry.lo(a)) / geometry.spacing(a);
            if (rel < 2.5 || rel > geometry.points(a) - 3.5) interior = false;
        }
        if (!interior) continue;
        double x2 = 0.0;
        for (int a = 0; a < d; ++a) x2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        double res = -lap[i] + x2 * H[i] - lambda * H[i];
        sup = std::max(sup, std::abs(res));
    }
    return sup;
}

std::vector<double> kernel_bound_ratio(const DyadicBlockSet& blocks, int alpha, int k) {
    if (blocks.dim() != 1) throw hermite_error("kernel bound verification is d = 1 only");
    if (alpha < 0 || alpha > 2) throw hermite_error("derivative order <= 2 only");
    // Scale-free offsets u = 2^n (x - y): the kernel concentrates at width
    // 2^{-n}, so a fixed u grid probes the same normalized geometry at each n.
    const int np = 65;
    const int nu = 129;
    const double umax = 16.0;

    const int L = blocks.level_cap();
    std::vector<double> out(static_cast<std::size_t>(blocks.n_max()) + 1, 0.0);
    for (int n = 0; n <= blocks.n_max(); ++n) {
        int cap = std::min(L, static_cast<int>(std::pow(4.0, n + 1)) - 1);
        // x probes cover the oscillation region of the top level (turning
        // point at sqrt(2 j)), so every block sees its whole Airy bump.
        const double xmax = 1.2 * std::sqrt(2.0 * cap);
        std::vector<double> xs(np);
        for (int i = 0; i < np; ++i)
            xs[static_cast<std::size_t>(i)] = -xmax + 2.0 * xmax * i / (np - 1);
        std::vector<double> coef(static_cast<std::size_t>(cap) + 1);
        int lo = cap;
        for (int j = 0; j <= cap; ++j) {
            coef[static_cast<std::size_t>(j)] = blocks.coefficient(n, j);
            if (coef[static_cast<std::size_t>(j)] != 0.0) lo = std::min(lo, j);
        }
        const double denom = std::pow(2.0, n * (alpha + 1));
        const double scale = std::pow(2.0, -n);
        std::vector<double> sups(static_cast<std::size_t>(np), 0.0);
        parallel_for(static_cast<std::size_t>(np), default_workers(), [&](std::size_t ix) {
            double xval = xs[ix];
            std::vector<double> vx, dx, vy;
            hermite_all_deriv(cap, xval, vx, dx);
            for (int iu = 0; iu < nu; ++iu) {
                double u = -umax + 2.0 * umax * iu / (nu - 1);
                hermite_all(cap, xval - u * scale, vy);
                double s = 0.0;
                for (int j = lo; j <= cap; ++j) {
                    double c = coef[static_cast<std::size_t>(j)];
                    if (c == 0.0) continue;
                    double dxj;
                    if (alpha == 0)
                        dxj = vx[static_cast<std::size_t>(j)];
                    else if (alpha == 1)
                        dxj = dx[static_cast<std::size_t>(j)];
                    else
                        dxj = (xval * xval - (2.0 * j + 1.0)) * vx[static_cast<std::size_t>(j)];
                    s += c * dxj * vy[static_cast<std::size_t>(j)];
                }
                double ratio = std::abs(s) * std::pow(1.0 + std::abs(u), k) / denom;
                sups[ix] = std::max(sups[ix], ratio);
            }
        });
        for (double v : sups) out[static_cast<std::size_t>(n)] = std::max(out[static_cast<std::size_t>(n)], v);
    }
    return out;
}

GridFunction regularize(const ParticleMeasure& mu, double delta, const GridFunction& geometry) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw hermite_error("delta must lie in (0,1)");
    const int d = mu.dim();
    if (geometry.dim() != d) throw hermite_error("grid/measure dim mismatch");
    const double norm = std::pow(2.0 * kPi * delta, -0.5 * d);
    GridFunction out = geometry.with_values(std::vector<double>(geometry.size(), 0.0));
    parallel_for(out.size(), default_workers(), [&](std::size_t i) {
        std::vector<double> y(static_cast<std::size_t>(d));
        out.point(i, y);
        double r = 0.0;
        for (double v : y) r += v * v;
        r = std::sqrt(r);
        double plateau = smooth_plateau(r, 1.0 / delta, 1.0 + 1.0 / delta);
        if (plateau == 0.0) {
            out[i] = 0.0;
            return;
        }
        double s = 0.0;
        for (std::size_t p = 0; p < mu.count(); ++p) {
            auto xp = mu.position(p);
            double q = 0.0;
            for (int a = 0; a < d; ++a) {
                double z = xp[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(a)];
                q += z * z;
            }
            s += mu.weight(p) * std::exp(-0.5 * q / delta);
        }
        out[i] = plateau * norm * s;
    });
    return out;
}

} // namespace reglaw
