#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "reglaw/dictionary.hpp"
#include "reglaw/grid.hpp"
#include "reglaw/mollify.hpp"
#include "reglaw/young.hpp"

using namespace reglaw;

TEST_CASE("kernel has unit mass and dead moments in one dimension") {
    for (int M : {2, 4}) {
        SuperKernel k = SuperKernel::build(1, M);
        const int n = 40001;
        std::vector<double> mom(static_cast<std::size_t>(M + 1), 0.0);
        for (int i = 0; i < n; ++i) {
            double y = -1.0 + 2.0 * i / (n - 1.0);
            double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            double v = k(std::vector<double>{y}) * w * 2.0 / (n - 1.0);
            double p = 1.0;
            for (int j = 0; j <= M; ++j) {
                mom[static_cast<std::size_t>(j)] += v * p;
                p *= y;
            }
        }
        CHECK(mom[0] == doctest::Approx(1.0).epsilon(1e-6));
        for (int j = 1; j <= M; ++j)
            CHECK(std::abs(mom[static_cast<std::size_t>(j)]) < 1e-6);
        CHECK(k.condition_number() > 0.0);
    }
}

TEST_CASE("kernel vanishes outside the unit ball") {
    SuperKernel k = SuperKernel::build(1, 2);
    CHECK(k.radial(1.0) == 0.0);
    CHECK(k.radial(1.5) == 0.0);
    CHECK(k(std::vector<double>{0.999}) == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("two dimensional kernel keeps unit mass") {
    SuperKernel k = SuperKernel::build(2, 2);
    const int n = 501;
    double mass = 0.0, mx = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = -1.0 + 2.0 * i / (n - 1.0);
            double y = -1.0 + 2.0 * j / (n - 1.0);
            double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) *
                       ((j == 0 || j == n - 1) ? 0.5 : 1.0);
            double v = k(std::vector<double>{x, y}) * w * 4.0 / ((n - 1.0) * (n - 1.0));
            mass += v;
            mx += v * x;
        }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(mx) < 1e-10);
}

TEST_CASE("mollification reproduces polynomials below the moment order") {
    SuperKernel kern = SuperKernel::build(1, 2);
    GridFunction f = GridFunction::sample1d(-3.0, 3.0, 1201, [](double x) {
        return 1.0 + 2.0 * x - 0.7 * x * x;
    });
    GridFunction g = mollify(f, kern, 0.25);
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
        double x = g.coord(0, i);
        if (std::abs(x) > 2.0) continue; // stay clear of the sampling box edge
        CHECK(g[static_cast<std::size_t>(i)] ==
              doctest::Approx(1.0 + 2.0 * x - 0.7 * x * x).epsilon(1e-4));
    }
}

TEST_CASE("mollification smooths the kink of the tent") {
    SuperKernel kern = SuperKernel::build(1, 2);
    GridFunction f = GridFunction::sample1d(-2.5, 2.5, 2001, [](double x) {
        return std::max(0.0, 1.0 - std::abs(x));
    });
    GridFunction g = mollify(f, kern, 0.2);
    GridFunction d2 = g.partial({2});
    double interior_sup = 0.0;
    for (int i = 0; i < static_cast<int>(d2.size()); ++i)
        if (std::abs(d2.coord(0, i)) < 2.0)
            interior_sup = std::max(interior_sup, std::abs(d2[static_cast<std::size_t>(i)]));
    CHECK(std::isfinite(interior_sup));
    CHECK(interior_sup < 100.0); // bounded by C / delta with the kernel constants
    CHECK(interior_sup > 1.0);   // the kink really contributes curvature
}

TEST_CASE("smoothing rate of the tent beats first order") {
    SuperKernel kern = SuperKernel::build(1, 2);
    TestDictionary dict = TestDictionary::standard(1);
    GridFunction tent = GridFunction::sample1d(-2.5, 2.5, 1601, [](double x) {
        return std::max(0.0, 1.0 - std::abs(x));
    });
    std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05};
    double slope = rate_smoothing(tent, kern, 1, 1, dict, deltas);
    CHECK(slope >= 1.7); // (q + k) - 0.3 with q = k = 1
}

TEST_CASE("norm blowup of the step is capped by the derivative deficit") {
    SuperKernel kern = SuperKernel::build(1, 2);
    GridFunction step = GridFunction::sample1d(-2.5, 2.5, 1601, [](double x) {
        return (x > -1.2 && x < 0.6) ? 1.0 : 0.0;
    });
    std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05};
    double slope = rate_blowup(step, kern, 2, 0, YoungFunction::power(2.0), deltas);
    CHECK(slope >= -2.3); // -(n - q) - 0.3 with n = 2, q = 0
    CHECK(slope < -0.5);  // and the step genuinely blows up
}

TEST_CASE("blowup of an already smooth function is flat") {
    SuperKernel kern = SuperKernel::build(1, 2);
    GridFunction f = GridFunction::sample1d(-3.0, 3.0, 1201, [](double x) {
        return std::exp(-x * x);
    });
    std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05};
    double slope = rate_blowup(f, kern, 1, 0, YoungFunction::power(2.0), deltas);
    CHECK(std::abs(slope) < 0.1);
}
