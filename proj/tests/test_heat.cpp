#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "reglaw/heat.hpp"

using namespace reglaw;

TEST_CASE("kernel conserves mass and respects the boundary symmetry") {
    for (double t : {0.001, 0.01, 0.3}) {
        // trapezoid integral over y of G_t(x, y) is 1 for every x
        for (double x : {0.0, 0.31, 1.0}) {
            const int n = 2001;
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                double y = static_cast<double>(i) / (n - 1.0);
                double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
                s += w * neumann_kernel(t, x, y) / (n - 1.0);
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
        }
        CHECK(neumann_kernel(t, 0.3, 0.7) ==
              doctest::Approx(neumann_kernel(t, 0.7, 0.3)).epsilon(1e-12));
    }
}

TEST_CASE("kernel satisfies the heat equation away from the diagonal") {
    const double t = 0.02, x = 0.4, y = 0.75, e = 1e-4;
    double ut = (neumann_kernel(t + e, x, y) - neumann_kernel(t - e, x, y)) / (2.0 * e);
    double uxx = (neumann_kernel(t, x + e, y) - 2.0 * neumann_kernel(t, x, y) +
                  neumann_kernel(t, x - e, y)) /
                 (e * e);
    CHECK(ut == doctest::Approx(uxx).epsilon(1e-4));
}

TEST_CASE("series and image representations agree at the crossover") {
    for (double t : {5e-5, 1e-4, 2e-4}) {
        for (double x : {0.1, 0.5, 0.93}) {
            double series = 1.0;
            for (int n = 1; n <= 4000; ++n)
                series += 2.0 * std::exp(-n * n * std::numbers::pi * std::numbers::pi * t) *
                          std::cos(n * std::numbers::pi * x) *
                          std::cos(n * std::numbers::pi * 0.5);
            CHECK(neumann_kernel(t, x, 0.5) == doctest::Approx(series).epsilon(1e-9));
        }
    }
}

TEST_CASE("chapman kolmogorov composition doubles the time") {
    const int n = 4001;
    double direct = neumann_kernel(0.02, 0.3, 0.6);
    double composed = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = static_cast<double>(i) / (n - 1.0);
        double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        composed += w * neumann_kernel(0.01, 0.3, z) * neumann_kernel(0.01, z, 0.6) /
                    (n - 1.0);
    }
    CHECK(composed == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("small window covariance eigenvalues hug the flat limit") {
    std::vector<CovarianceRow> rows =
        covariance_bounds({0.35, 0.65}, {1e-5, 1e-4, 1e-3, 1e-2});
    REQUIRE(rows.size() == 4);
    // int_0^eps G_{2s}(x,x) ds = sqrt(eps / (2 pi)) when the points decouple
    double flat = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (const CovarianceRow& r : rows) {
        CHECK(r.lo > 0.0);
        CHECK(r.lo <= r.hi);
        CHECK(r.hi < 1.0); // stays bounded over the whole window range
    }
    CHECK(rows[0].lo == doctest::Approx(flat).epsilon(1e-4));
    CHECK(rows[0].hi == doctest::Approx(flat).epsilon(1e-4));
}

TEST_CASE("covariance rejects points too close to resolve") {
    CHECK_THROWS_AS(covariance_bounds({0.5, 0.5 + 1e-4}, {1e-3}), heat_error);
}

TEST_CASE("unstable time steps are refused") {
    HeatModel m = HeatModel::additive();
    CHECK_THROWS_AS(walsh_simulate(m, 0.25, 64, 100, 4, 1), heat_error);
}

TEST_CASE("additive field matches its exact pointwise variance") {
    // u(T, x) = int G dW: Var = int_0^T int G_{T-s}(x,y)^2 dy ds = int_0^T G_{2s}(x,x) ds
    HeatModel m = HeatModel::additive();
    const double T = 0.05;
    const int nx = 32;
    WalshResult w = walsh_simulate(m, T, nx, 4 * nx * nx, 4000, 77);
    double s2 = 0.0;
    for (std::size_t r = 0; r < w.n_real; ++r) s2 += w.at(r, nx / 2) * w.at(r, nx / 2);
    s2 /= static_cast<double>(w.n_real);
    // substitute s = u^2 so the integrand 2u G_{2u^2}(x,x) is bounded at zero
    const int n = 20001;
    const double umax = std::sqrt(T);
    double exact = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = umax * i / (n - 1.0);
        double wq = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        double val = (i == 0) ? 2.0 / std::sqrt(8.0 * std::numbers::pi)
                              : 2.0 * u * neumann_kernel(2.0 * u * u, 0.5, 0.5);
        exact += wq * val * umax / (n - 1.0);
    }
    CHECK(s2 == doctest::Approx(exact).epsilon(0.15));
}

TEST_CASE("window decomposition recombines to machine precision") {
    HeatModel m = HeatModel::clog(1.0, 0.5, 1.0, 0.0);
    S4Report rep = s4_decomposition(m, 0.1, 0.01, 24, 50, 5);
    CHECK(rep.max_residual < 1e-10);
    CHECK(rep.mean_I2 >= 0.0);
    CHECK(rep.mean_J2 >= 0.0);
    CHECK(rep.eps > 0.0);
}

TEST_CASE("additive model has no window correction at all") {
    HeatModel m = HeatModel::additive();
    S4Report rep = s4_decomposition(m, 0.1, 0.01, 24, 50, 5);
    CHECK(rep.max_residual < 1e-10);
    CHECK(rep.mean_I2 < 1e-20);
    CHECK(rep.mean_J2 < 1e-20);
}

TEST_CASE("model validation enforces the ellipticity floor") {
    HeatModel m = HeatModel::clog(1.0, 0.5, 1.0, 0.0);
    m.validate();
    HeatModel bad = m;
    bad.sigma = [](double) { return 0.0; };
    CHECK_THROWS_AS(bad.validate(), heat_error);
}
