#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "reglaw/dictionary.hpp"
#include "reglaw/sde.hpp"

using namespace reglaw;

namespace {

SdeModel brownian() {
    SdeModel m;
    m.d = 1;
    m.nw = 1;
    m.sigma = [](double, std::span<const double>, double* out) { out[0] = 1.0; };
    m.drift = [](double, std::span<const double>, double* out) { out[0] = 0.0; };
    return m;
}

SdeModel ou() {
    SdeModel m = brownian();
    m.drift = [](double, std::span<const double> x, double* out) { out[0] = -x[0]; };
    return m;
}

} // namespace

TEST_CASE("driftless unit diffusion reproduces brownian moments") {
    EulerResult r = euler_simulate(brownian(), {0.0}, 1.0, 0.01, 50000, 5);
    double s = 0.0, s2 = 0.0;
    for (double x : r.endpoints) {
        s += x;
        s2 += x * x;
    }
    double n = static_cast<double>(r.endpoints.size());
    CHECK(std::abs(s / n) < 0.02);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.03));
    for (auto e : r.exited) CHECK(e == 0);
}

TEST_CASE("mean reversion matches the ornstein uhlenbeck closed form") {
    EulerResult r = euler_simulate(ou(), {2.0}, 1.0, 0.002, 50000, 9);
    double s = 0.0, s2 = 0.0;
    for (double x : r.endpoints) {
        s += x;
        s2 += x * x;
    }
    double n = static_cast<double>(r.endpoints.size());
    double mean = s / n, var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(0.03));
    CHECK(var == doctest::Approx(0.5 * (1.0 - std::exp(-2.0))).epsilon(0.05));
}

TEST_CASE("step and dimension preconditions are enforced") {
    CHECK_THROWS_AS(euler_simulate(brownian(), {0.0}, 1.0, 0.2, 10, 1), sde_error);
    CHECK_THROWS_AS(euler_simulate(brownian(), {0.0, 0.0}, 1.0, 0.01, 10, 1), sde_error);
    SdeModel bad;
    bad.d = 1;
    CHECK_THROWS_AS(bad.validate(), sde_error);
}

TEST_CASE("paths freeze at the exit flag once they leave the box") {
    SdeModel m = brownian();
    m.box_lo = {-0.5};
    m.box_hi = {0.5};
    EulerResult r = euler_simulate(m, {0.0}, 1.0, 0.005, 20000, 13);
    std::size_t exits = 0;
    for (std::size_t i = 0; i < r.exited.size(); ++i) {
        if (r.exited[i]) {
            ++exits;
        } else {
            CHECK(std::abs(r.endpoints[i]) < 0.5);
        }
    }
    // a unit brownian motion leaves [-0.5, 0.5] by time 1 with high probability
    CHECK(exits > r.exited.size() / 2);
    CHECK(exits < r.exited.size());
}

TEST_CASE("rough diagonal diffusion validates and stays elliptic") {
    SdeModel m = SdeModel::elliptic_clog(2, 1.0, 0.5, 1.0, {0.25, 0.25}, 3.5);
    m.validate();
    std::vector<double> sig(4);
    for (double x : {-3.0, -0.4, 0.2499, 0.25, 1.7}) {
        std::vector<double> p = {x, -x};
        m.sigma(0.5, p, sig.data());
        CHECK(sig[0] >= 0.5);
        CHECK(sig[3] >= 0.5);
        CHECK(sig[0] <= 1.5 + 1e-12);
        CHECK(sig[1] == 0.0);
        CHECK(sig[2] == 0.0);
    }
}

TEST_CASE("modulus gauge interpolates between one and slow log decay") {
    CHECK(clog_modulus_gauge(0.5, 1.0) == 1.0);
    CHECK(clog_modulus_gauge(1e-6, 1.0) ==
          doctest::Approx(std::pow(6.0 * std::log(10.0), -3.0)).epsilon(1e-12));
    CHECK(clog_modulus_gauge(0.0, 1.0) == 0.0);
}

TEST_CASE("freezing a constant diffusion couples the branches exactly") {
    FrozenResult fr = frozen_gaussian(brownian(), {0.0}, 1.0, 0.05, 20000, 3);
    CHECK(fr.degenerate == 0);
    CHECK(localized_coupled_distance(fr, {0.0}, 1.0, 1) < 1e-10);
    CHECK(fr.true_cloud.count() == fr.frozen_cloud.count());
    // mixture density near the center of mass is strictly positive
    CHECK(fr.frozen_cloud.density_at(std::vector<double>{0.0}) > 0.05);
}

TEST_CASE("coupling bound needs at least one derivative") {
    FrozenResult fr = frozen_gaussian(brownian(), {0.0}, 1.0, 0.05, 1000, 3);
    CHECK_THROWS_AS(localized_coupled_distance(fr, {0.0}, 1.0, 0), sde_error);
}

TEST_CASE("coupling bound shrinks with the window for the rough diffusion") {
    SdeModel m = SdeModel::elliptic_clog(1, 1.0, 0.5, 1.0, {0.25}, 3.5);
    FrozenResult wide = frozen_gaussian(m, {0.0}, 0.5, 0.08, 4000, 7);
    FrozenResult tight = frozen_gaussian(m, {0.0}, 0.5, 0.005, 4000, 7);
    double dw = localized_coupled_distance(wide, {0.0}, 1.0, 1);
    double dt = localized_coupled_distance(tight, {0.0}, 1.0, 1);
    CHECK(dw > 0.0);
    CHECK(dt > 0.0);
    CHECK(dt < dw);
}

TEST_CASE("coupling bound dominates the dictionary lower bound") {
    SdeModel m = SdeModel::elliptic_clog(1, 1.0, 0.5, 1.0, {0.25}, 3.5);
    FrozenResult fr = frozen_gaussian(m, {0.0}, 0.5, 0.02, 8000, 19);
    TestDictionary dict = TestDictionary::standard(1);
    double upper = localized_coupled_distance(fr, {0.0}, 1e6, 1); // plateau covers all
    double lower = dict.distance_lower(fr.true_cloud, fr.frozen_cloud, 1);
    CHECK(lower <= upper * (1.0 + 1e-9));
}

TEST_CASE("degenerate diffusion is refused at the freeze") {
    SdeModel m = brownian();
    m.sigma = [](double, std::span<const double>, double* out) { out[0] = 0.0; };
    CHECK_THROWS_AS(frozen_gaussian(m, {0.0}, 1.0, 0.05, 1000, 1), sde_error);
}

TEST_CASE("kinetic brackets step from degenerate to elliptic") {
    SdeModel m = SdeModel::kinetic();
    std::vector<double> x = {0.3, -0.2};
    CHECK(bracket_lambda(m, 0, x, 0.5) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(bracket_lambda(m, 1, x, 0.5) >= 0.9);
    CHECK_THROWS_AS(bracket_lambda(m, 2, x, 0.5), sde_error);
}

TEST_CASE("rate fit preconditions guard the localized pipeline") {
    SdeModel m = SdeModel::elliptic_clog(1, 1.0, 0.5, 1.0, {0.25}, 2.0);
    TestDictionary dict = TestDictionary::standard(1);
    // localization radius exceeding the distance to the boundary is refused
    CHECK_THROWS_AS(lemma10_rate(m, {0.0}, 5.0, 0.5, {0.02, 0.01}, 100, 1, dict),
                    sde_error);
    SdeModel lip = brownian();
    CHECK_THROWS_AS(lemma10_rate(lip, {0.0}, 0.5, 0.5, {0.02, 0.01}, 100, 1, dict),
                    sde_error);
}
