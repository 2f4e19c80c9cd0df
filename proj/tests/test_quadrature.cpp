#include "pgreen/errors.hpp"
#include "pgreen/quadrature.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace pgreen;

namespace {
constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};
}

TEST_CASE("adaptive Gauss-Kronrod on smooth and peaked integrands")
{
    VectorIntegrand f = [](double x, Eigen::Ref<VectorXc> out) {
        out(0) = std::exp(x);
        out(1) = 1.0 / (1e-4 + x * x);
        out(2) = std::exp(I * 40.0 * x);
    };
    AdaptiveSettings s;
    s.rel_tol = 1e-12;
    const IntegrationResult r = integrate_adaptive(f, -1.0, 1.0, 3, s);
    REQUIRE(r.converged);
    CHECK(std::abs(r.value(0) - (std::exp(1.0) - std::exp(-1.0))) < 1e-11);
    CHECK(std::abs(r.value(1) - 2.0 * std::atan(100.0) / 1e-2) < 1e-9);
    CHECK(std::abs(r.value(2) - 2.0 * std::sin(40.0) / 40.0) < 1e-11);
}

TEST_CASE("serial and parallel evaluation are bit-identical")
{
    VectorIntegrand f = [](double x, Eigen::Ref<VectorXc> out) { out(0) = std::exp(I * 30.0 * x) / (1.0 + x * x); };
    AdaptiveSettings s;
    s.rel_tol = 1e-12;
    s.execution = Execution::serial;
    const IntegrationResult a = integrate_adaptive(f, {-5.0, 0.0, 5.0}, 1, s);
    s.execution = Execution::parallel;
    const IntegrationResult b = integrate_adaptive(f, {-5.0, 0.0, 5.0}, 1, s);
    CHECK(a.value(0) == b.value(0));
    CHECK(a.evals == b.evals);
}

TEST_CASE("whole-line integrals")
{
    LineMap map;
    map.center = 0.3;
    map.scale = 2.0;
    for (double off : {0.0, 0.7, 123.0, 1e6}) {
        CHECK(std::abs(map.s(map.u_of(off)) - map.center - off) < 1e-9 * std::max(1.0, off));
    }
    AdaptiveSettings s;
    s.rel_tol = 1e-11;
    s.abs_tol = 1e-14;
    VectorIntegrand lorentz = [](double x, Eigen::Ref<VectorXc> out) { out(0) = 1.0 / (1.0 + x * x); };
    const IntegrationResult r = integrate_line(lorentz, map, 1, s);
    REQUIRE(r.converged);
    CHECK(std::abs(r.value(0) - pi) < 1e-10);

    // Conditionally convergent: symmetric limit of 1/(x - i) is i pi.
    LineMap centred;
    VectorIntegrand pole = [](double x, Eigen::Ref<VectorXc> out) { out(0) = 1.0 / (x - I); };
    const IntegrationResult sym = integrate_line_symmetric(pole, centred, 1, s);
    REQUIRE(sym.converged);
    CHECK(std::abs(sym.value(0) - I * pi) < 1e-9);

    // Same integral sampled only for |x| <= 1e6 and extrapolated beyond.
    int outside = 0;
    VectorIntegrand guarded = [&](double x, Eigen::Ref<VectorXc> out) {
        if (std::abs(x) > 1e6 * (1.0 + 1e-12)) {
            ++outside;
        }
        out(0) = 1.0 / (x - I);
    };
    const IntegrationResult capped = integrate_line_symmetric_capped(guarded, centred, 1, s, 1e6);
    REQUIRE(capped.converged);
    CHECK(outside == 0);
    CHECK(std::abs(capped.value(0) - I * pi) < 1e-8);
}

TEST_CASE("Gauss-Legendre and Chebyshev helpers")
{
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(8, -1.0, 2.0, x, w);
    for (int p = 0; p <= 15; ++p) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum += w[i] * std::pow(x[i], p);
        }
        const double exact = (std::pow(2.0, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
        CHECK(std::abs(sum - exact) < 1e-11 * std::max(1.0, std::abs(exact)));
    }
    const auto pts = chebyshev_points(6, 0.0, 1.0);
    REQUIRE(pts.size() == 6);
    for (double p : pts) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
    CHECK(chebyshev_weights(6).size() == 6);
}

TEST_CASE("extrapolated tail reproduces a smooth endpoint integral")
{
    VectorIntegrand g = [](double u, Eigen::Ref<VectorXc> out) { out(0) = std::cos(u) + I * u * u; };
    const IntegrationResult t = integrate_extrapolated_tail(g, 0.9, 0.05, 1, Execution::serial);
    const cplx exact = (std::sin(1.0) - std::sin(0.9)) + I * (1.0 - 0.729) / 3.0;
    // Extrapolating over twice the sampled width loses a few digits.
    CHECK(std::abs(t.value(0) - exact) < 1e-9);
    CHECK(std::abs(t.value(0) - exact) <= 10.0 * t.error + 1e-15);
}

TEST_CASE("quadrature config validation")
{
    QuadratureConfig q;
    CHECK_NOTHROW(q.validate());
    q.tau_cutoff = -1.0;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = QuadratureConfig{};
    q.double_max_evals = 5;
    CHECK_THROWS_AS(q.validate(), ConfigError);
}
