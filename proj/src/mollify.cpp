#include "reglaw/mollify.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "reglaw/balance.hpp"
#include "reglaw/rates.hpp"

namespace reglaw {

namespace {

// Flat-vanishing bump in the radius: chi(r) = exp(-1/(1-r²)) for r < 1.
double bump_chi(double r) {
    double s = 1.0 - r * r;
    if (s <= 0.0) return 0.0;
    return std::exp(-1.0 / s);
}

// 200-point Gauss-Legendre on [0,1] via Newton on Legendre polynomials.
struct RadialRule {
    std::vector<double> x, w;
    RadialRule() {
        const int n = 200;
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x.push_back(0.5 * (t + 1.0));
            w.push_back(1.0 / ((1.0 - t * t) * dp * dp)); // = 0.5 * GL weight
        }
    }
};

const RadialRule& radial_rule() {
    static RadialRule rule;
    return rule;
}

// ∫_0^1 r^{pow} r^{d-1} s^i p-basis ... : radial moment ∫_0^1 r^{2i+d-1} r^{2c} chi(r) dr
double radial_moment(int exponent) {
    const auto& rule = radial_rule();
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        s += rule.w[i] * std::pow(rule.x[i], exponent) * bump_chi(rule.x[i]);
    return s;
}

double sphere_area(int d) {
    // |S^{d-1}|: 2 for d=1, 2*pi for d=2.
    if (d == 1) return 2.0;
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

} // namespace

SuperKernel SuperKernel::build(int dim, int M) {
    if (dim < 1 || dim > 2) throw mollify_error("super kernels support d = 1, 2");
    if (M < 0 || M > 12) throw mollify_error("moment order must lie in [0, 12]");
    SuperKernel k;
    k.dim_ = dim;
    k.M_ = M;
    const int deg = (M + 1) / 2; // ceil(M/2)
    const int rows = deg + 1;
    // Conditions: ∫ |y|^{2i} phi dy = delta_{i0} * (1/1) for i = 0..deg;
    // radially: |S^{d-1}| Σ_c p_c ∫ r^{2i + 2c + d - 1} chi dr = delta_{i0}.
    Eigen::MatrixXd A(rows, rows);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    b(0) = 1.0 / sphere_area(dim);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < rows; ++c)
            A(i, c) = radial_moment(2 * i + 2 * c + dim - 1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    double cond = svd.singularValues()(0) / svd.singularValues()(rows - 1);
    if (!lu.isInvertible() || cond > 1e12)
        throw mollify_error("singular moment system (condition " + std::to_string(cond) + ")");
    Eigen::VectorXd p = lu.solve(b);
    k.poly_.assign(p.data(), p.data() + rows);
    k.condition_ = cond;
    return k;
}

double SuperKernel::radial(double r) const {
    if (r >= 1.0) return 0.0;
    double s = r * r;
    double p = 0.0;
    for (std::size_t c = poly_.size(); c-- > 0;) p = p * s + poly_[c];
    return p * bump_chi(r);
}

double SuperKernel::operator()(std::span<const double> y) const {
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    return radial(std::sqrt(r2));
}

GridFunction mollify(const GridFunction& f, const SuperKernel& kern, double delta) {
    if (!(delta > 0.0) || delta > 1.0) throw mollify_error("delta must lie in (0,1]");
    const int d = f.dim();
    if (kern.dim() != d) throw mollify_error("kernel/grid dimension mismatch");
    for (int a = 0; a < d; ++a)
        if (delta > 0.45 * (f.hi(a) - f.lo(a)))
            throw mollify_error("kernel support exceeds grid margin");
    GridFunction out = f;
    const double scale = std::pow(delta, -d);
    std::vector<double> x(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(d));
    // reach of the kernel in lattice cells per axis
    std::vector<int> reach(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
        reach[static_cast<std::size_t>(a)] = static_cast<int>(std::ceil(delta / f.spacing(a))) + 1;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.point(i, x);
        double s = 0.0;
        if (d == 1) {
            int i0 = static_cast<int>(i);
            for (int j = std::max(0, i0 - reach[0]); j <= std::min(f.points(0) - 1, i0 + reach[0]); ++j) {
                double yy = f.coord(0, j);
                double u = (x[0] - yy) / delta;
                double kv = kern.radial(std::abs(u));
                if (kv == 0.0) continue;
                double w = f.spacing(0);
                if (j == 0 || j == f.points(0) - 1) w *= 0.5;
                s += w * kv * f[static_cast<std::size_t>(j)];
            }
        } else {
            int i1 = static_cast<int>(i) / f.points(1);
            int i2 = static_cast<int>(i) % f.points(1);
            for (int j1 = std::max(0, i1 - reach[0]); j1 <= std::min(f.points(0) - 1, i1 + reach[0]); ++j1)
                for (int j2 = std::max(0, i2 - reach[1]); j2 <= std::min(f.points(1) - 1, i2 + reach[1]); ++j2) {
                    y[0] = (f.coord(0, i1) - f.coord(0, j1)) / delta;
                    y[1] = (f.coord(1, i2) - f.coord(1, j2)) / delta;
                    double kv = kern(y);
                    if (kv == 0.0) continue;
                    double w = f.spacing(0) * f.spacing(1);
                    if (j1 == 0 || j1 == f.points(0) - 1) w *= 0.5;
                    if (j2 == 0 || j2 == f.points(1) - 1) w *= 0.5;
                    s += w * kv * f[static_cast<std::size_t>(j1) * f.points(1) + static_cast<std::size_t>(j2)];
                }
        }
        out[i] = scale * s;
    }
    return out;
}

double rate_smoothing(const GridFunction& f, const SuperKernel& kern, int q, int k,
                      const TestDictionary& dict, const std::vector<double>& deltas) {
    if (kern.moment_order() < q + k)
        throw mollify_error("kernel moment order below q + k");
    std::vector<double> xs, ys;
    ParticleMeasure pf = grid_density_particles(f);
    for (double delta : deltas) {
        GridFunction fd = mollify(f, kern, delta);
        ParticleMeasure pd = grid_density_particles(fd);
        double dist = dict.distance_lower(pf, pd, k);
        xs.push_back(delta);
        ys.push_back(std::max(dist, 1e-14));
    }
    return fit_slope(xs, ys);
}

double rate_blowup(const GridFunction& f, const SuperKernel& kern, int n, int l,
                   const YoungFunction& e, const std::vector<double>& deltas) {
    std::vector<double> xs, ys;
    for (double delta : deltas) {
        GridFunction fd = mollify(f, kern, delta);
        xs.push_back(delta);
        ys.push_back(weighted_sobolev_orlicz_norm(fd, n, l, e));
    }
    return fit_slope(xs, ys);
}

} // namespace reglaw
