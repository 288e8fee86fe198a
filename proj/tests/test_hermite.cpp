#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "reglaw/grid.hpp"
#include "reglaw/hermite.hpp"
#include "reglaw/measure.hpp"

using namespace reglaw;

TEST_CASE("lowest eigenfunction is the normalized gaussian") {
    for (double t : {-2.0, -0.5, 0.0, 1.3, 3.7})
        CHECK(hermite_h(0, t) ==
              doctest::Approx(std::pow(std::numbers::pi, -0.25) *
                              std::exp(-t * t / 2.0))
                  .epsilon(1e-12));
}

TEST_CASE("batch evaluation matches single evaluation") {
    std::vector<double> v;
    for (double t : {-4.2, 0.31, 6.0}) {
        hermite_all(20, t, v);
        for (int n = 0; n <= 20; ++n)
            CHECK(v[static_cast<std::size_t>(n)] ==
                  doctest::Approx(hermite_h(n, t)).epsilon(1e-12));
    }
}

TEST_CASE("values stay finite far in the tail") {
    // naive exp(-t^2/2) seeding would underflow near t = 40
    std::vector<double> v;
    hermite_all(64, 38.0, v);
    for (double x : v) {
        CHECK(std::isfinite(x));
        CHECK(std::abs(x) < 1.0);
    }
    CHECK(std::abs(hermite_h(64, 38.0)) > 0.0);
}

TEST_CASE("eigenfunctions are orthonormal under the gauss rule") {
    GaussHermite rule = GaussHermite::build(48);
    std::vector<std::vector<double>> vals(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        hermite_all(32, rule.nodes[i], vals[i]);
    double worst = 0.0;
    for (int a = 0; a <= 32; ++a)
        for (int b = 0; b <= 32; ++b) {
            double g = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                g += rule.weights[i] * vals[i][static_cast<std::size_t>(a)] *
                     vals[i][static_cast<std::size_t>(b)];
            worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("gauss rule integrates the gaussian weight exactly") {
    GaussHermite rule = GaussHermite::build(20);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double h0 = hermite_h(0, rule.nodes[i]);
        s += rule.weights[i] * h0 * h0;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("derivative recurrence matches central differences") {
    std::vector<double> val, der, vp, vm;
    const double e = 1e-6;
    for (double t : {-1.4, 0.0, 0.7, 2.9}) {
        hermite_all_deriv(12, t, val, der);
        hermite_all(12, t + e, vp);
        hermite_all(12, t - e, vm);
        for (int n = 0; n <= 12; ++n) {
            double fd = (vp[static_cast<std::size_t>(n)] -
                         vm[static_cast<std::size_t>(n)]) /
                        (2.0 * e);
            CHECK(der[static_cast<std::size_t>(n)] ==
                  doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("cutoff pairs tile the overlap region") {
    CutoffA a;
    for (int i = 0; i <= 60; ++i) {
        double t = 0.25 + 0.75 * i / 60.0;
        CHECK(a(t) + a(4.0 * t) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(a(0.2) == 0.0);
    CHECK(a(4.3) == 0.0);
    CHECK(a.norm_l(1) > a.norm_l(0));
}

TEST_CASE("block coefficients sum to one at every mixed level") {
    CutoffA a;
    double worst = 0.0;
    for (int j = 1; j <= 1024; ++j) {
        double s = 0.0;
        for (int n = 0; n <= 8; ++n) s += a(j / std::pow(4.0, n));
        worst = std::max(worst, std::abs(s - 1.0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("plateau is one inside, zero outside, monotone between") {
    CHECK(smooth_plateau(0.5, 1.0, 2.0) == 1.0);
    CHECK(smooth_plateau(1.0, 1.0, 2.0) == 1.0);
    CHECK(smooth_plateau(2.0, 1.0, 2.0) == 0.0);
    CHECK(smooth_plateau(2.5, 1.0, 2.0) == 0.0);
    double prev = 1.0;
    for (int i = 1; i < 20; ++i) {
        double v = smooth_plateau(1.0 + i / 20.0, 1.0, 2.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("eigen residual decays at second order under refinement") {
    GridFunction coarse({-8.0}, {8.0}, {161});
    GridFunction fine({-8.0}, {8.0}, {321});
    double ratio = eigen_check({2}, coarse) / eigen_check({2}, fine);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("derivative-weighted kernel bounds stay flat across blocks") {
    DyadicBlockSet blocks = DyadicBlockSet::create(1, 4);
    std::vector<double> ratios = kernel_bound_ratio(blocks, 1, 2);
    REQUIRE(ratios.size() >= 4);
    // log2 of the normalized sup should have near-zero slope in n
    std::vector<double> lg;
    for (double r : ratios) lg.push_back(std::log2(r));
    double n = static_cast<double>(lg.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lg.size(); ++i) {
        sx += static_cast<double>(i);
        sy += lg[i];
        sxx += static_cast<double>(i) * static_cast<double>(i);
        sxy += static_cast<double>(i) * lg[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope) < 0.1);
}

TEST_CASE("block sums reconstruct a smooth function") {
    GridFunction f = GridFunction::sample1d(-6.0, 6.0, 601, [](double x) {
        return std::exp(-x * x / 2.0) * (1.0 + 0.3 * std::sin(2.0 * x));
    });
    DyadicBlockSet blocks = DyadicBlockSet::create(1, 3);
    GridFunction acc({-6.0}, {6.0}, {601});
    double prev = 1e300;
    for (int n = 0; n <= 3; ++n) {
        GridFunction g = blocks.convolve(n, f);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g[i];
        GridFunction diff = acc;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= f[i];
        double err = diff.lp_norm(2.0);
        // monotone up to the quadrature floor of the block convolutions
        CHECK(err < prev * (1.0 + 1e-9) + 1e-6);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("regularized point mass integrates to one inside the window") {
    ParticleMeasure mu(1, {0.1}, {1.0});
    GridFunction geom({-4.0}, {4.0}, {801});
    GridFunction g = regularize(mu, 0.05, geom);
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-6));
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) peak = std::max(peak, g[i]);
    // gamma_delta has variance delta, so the peak is (2 pi delta)^{-1/2}
    CHECK(peak == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * 0.05))
                      .epsilon(1e-3));
}
