#include "pgreen/errors.hpp"
#include "pgreen/special_functions.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace pgreen;

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Stirling series for ln Gamma after shifting Re z above 15, principal branch for Re z > 0.
cplx stirling_log_gamma(cplx z)
{
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    static const double bern[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi);
    cplx zp = z;
    for (int k = 1; k <= 7; ++k) {
        s += bern[k - 1] / (2.0 * k * (2.0 * k - 1.0) * zp);
        zp *= z * z;
    }
    return s + shift;
}

// Plain power series of 2F1, for |z| well inside the unit disk.
cplx series_2f1(cplx a, cplx b, cplx c, cplx z)
{
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int n = 0; n < 2000; ++n) {
        term *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

cplx rising(cplx x, int n)
{
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) {
        p *= x + double(i);
    }
    return p;
}

} // namespace

TEST_CASE("log_gamma special values and poles")
{
    CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    CHECK(std::abs(log_gamma(2.0)) < 1e-15);
    CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(pi))) < 1e-14);
    CHECK(std::abs(log_gamma(6.0) - std::log(120.0)) < 1e-13);
    CHECK_THROWS_AS((void)log_gamma(0.0), PoleError);
    CHECK_THROWS_AS((void)log_gamma(-3.0), PoleError);
}

TEST_CASE("log_gamma agrees with an independent Stirling evaluation")
{
    for (cplx z : {cplx{0.5, 3.0}, cplx{0.1, 0.2}, cplx{2.5, -7.0}, cplx{7.0, 40.0}, cplx{30.0, 1.0}, cplx{0.5, -25.0}}) {
        CAPTURE(z);
        CHECK(std::abs(log_gamma(z) - stirling_log_gamma(z)) < 1e-12);
    }
}

TEST_CASE("log_gamma left half-plane via reflection")
{
    for (cplx z : {cplx{-2.5, 0.7}, cplx{-0.3, -1.1}}) {
        const cplx g = std::exp(log_gamma(z));
        const cplx refl = pi / (std::sin(pi * z) * std::exp(log_gamma(1.0 - z)));
        CHECK(rel(g, refl) < 1e-12);
    }
}

TEST_CASE("digamma and pochhammer")
{
    CHECK(std::abs(digamma(1.0) + 0.57721566490153286) < 1e-13);
    const cplx z{0.3, 2.0};
    CHECK(std::abs(digamma(z + 1.0) - digamma(z) - 1.0 / z) < 1e-13);
    const double h = 1e-5;
    const cplx fd = (log_gamma(z + h) - log_gamma(z - h)) / (2.0 * h);
    CHECK(std::abs(digamma(z) - fd) < 1e-8);
    CHECK(rel(pochhammer(z, 5), rising(z, 5)) < 1e-13);
    CHECK(pochhammer(z, 0) == cplx(1.0));
}

TEST_CASE("hyp2f1 constant term and logarithm closed form")
{
    CHECK(std::abs(hyp2f1({0.3, 1.0}, {-2.0, 0.5}, {1.7, 0.2}, 0.0) - 1.0) < 1e-15);
    for (cplx z : {cplx{0.3, 0.4}, cplx{-3.0, 2.0}, cplx{0.9, 0.6}, cplx{-0.95, 0.0}, cplx{5.0, -4.0}}) {
        CAPTURE(z);
        const cplx exact = -std::log(1.0 - z) / z;
        CHECK(rel(hyp2f1(1.0, 1.0, 2.0, z), exact) < 1e-12);
    }
}

TEST_CASE("hyp2f1 terminating case equals the finite sum")
{
    const double tau = 0.7;
    const cplx zeta{2.0, 1.0};
    const cplx a = -2.0;
    const cplx b = 0.5 + I * tau;
    const cplx c = -1.5 + I * tau;
    const cplx direct = 1.0 + a * b / c * zeta + a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0) * 2.0) * zeta * zeta;
    CHECK(rel(hyp2f1(a, b, c, zeta), direct) < 1e-13);
}

TEST_CASE("hyp2f1 agrees with the power series on random parameters")
{
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> r(0.0, 0.5);
    std::uniform_real_distribution<double> phase(-pi, pi);
    for (int i = 0; i < 200; ++i) {
        const cplx a{u(rng), u(rng)};
        const cplx b{u(rng), u(rng)};
        const cplx c{u(rng) + 3.0, u(rng)};
        const cplx z = std::polar(r(rng), phase(rng));
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        CAPTURE(z);
        const cplx ref = series_2f1(a, b, c, z);
        CHECK(rel(hyp2f1(a, b, c, z), ref) < 1e-12);
        CHECK(rel(hyp2f1_series(a, b, c, z), ref) < 1e-12);
    }
}

TEST_CASE("p_poly low degrees")
{
    for (cplx tau : {cplx{0.3, 0.0}, cplx{-1.2, 0.4}}) {
        for (cplx zeta : {cplx{1.5, 0.5}, cplx{-0.4, 2.0}}) {
            CHECK(std::abs(p_poly(0, tau, zeta) - 1.0) < 1e-15);
            // p_1 = -(1/2 - i tau) [1 - (1/2 + i tau) zeta / (-1/2 + i tau)]
            const cplx beta = 0.5 + I * tau;
            const cplx p1 = -(0.5 - I * tau) * (1.0 - beta * zeta / (beta - 1.0));
            CHECK(rel(p_poly(1, tau, zeta), p1) < 1e-13);
        }
    }
}

TEST_CASE("p_poly is a polynomial of degree n in tau")
{
    const cplx zeta{1.3, -0.8};
    for (int n = 0; n <= 5; ++n) {
        // The (n+1)-th finite difference of a degree-n polynomial vanishes.
        std::vector<cplx> v;
        for (int j = 0; j <= n + 1; ++j) {
            v.push_back(p_poly(n, 0.37 + 0.5 * j, zeta));
        }
        for (int order = 0; order <= n; ++order) {
            for (std::size_t j = 0; j + 1 < v.size(); ++j) {
                v[j] = v[j + 1] - v[j];
            }
            v.pop_back();
        }
        double scale = 0.0;
        for (int j = 0; j <= n + 1; ++j) {
            scale = std::max(scale, std::abs(p_poly(n, 0.37 + 0.5 * j, zeta)));
        }
        CAPTURE(n);
        CHECK(std::abs(v[0]) < 1e-11 * std::max(1.0, scale));
        const auto all = p_poly_all(5, 0.37, zeta);
        CHECK(rel(all[static_cast<std::size_t>(n)], p_poly(n, 0.37, zeta)) < 1e-13);
    }
}

TEST_CASE("rho_weight reflection form and branch")
{
    for (double tau : {0.0, 0.6, -2.3}) {
        for (cplx zeta : {cplx{-1.0, 0.0}, cplx{1.5, 0.7}, cplx{-3.0, -2.0}}) {
            const cplx expected = std::pow(-zeta, I * tau + 0.5) / (2.0 * I * std::cosh(pi * tau));
            CHECK(rel(rho_weight(tau, zeta), expected) < 1e-13);
        }
    }
    CHECK(std::abs(rho_weight(0.0, -1.0) - 1.0 / (2.0 * I)) < 1e-15);
    CHECK_THROWS_AS((void)rho_weight(0.3, 2.0), BranchError);
}

TEST_CASE("q_func matches its hypergeometric series")
{
    const cplx tau{0.4, 0.3};
    for (int n = 0; n <= 3; ++n) {
        // plus sign with |1/zeta| < 1/2
        const cplx zeta{2.5, 1.5};
        const cplx ap = 0.5 + I * tau;
        const cplx qp_ref = (n % 2 ? -1.0 : 1.0) * std::tgamma(n + 1.0) / rising(ap, n + 1) *
                            series_2f1(ap, double(n + 1), double(n) + 1.5 + I * tau, 1.0 / zeta);
        CHECK(rel(q_func(Sign::plus, n, tau, zeta), qp_ref) < 1e-12);
        // minus sign with |zeta| < 1/2
        const cplx zm{0.2, -0.3};
        const cplx am = 0.5 - I * tau;
        const cplx qm_ref = (n % 2 ? -1.0 : 1.0) * std::tgamma(n + 1.0) / rising(am, n + 1) *
                            series_2f1(am, double(n + 1), double(n) + 1.5 - I * tau, zm);
        CHECK(rel(q_func(Sign::minus, n, tau, zm), qm_ref) < 1e-12);
        const auto all = q_func_all(Sign::plus, 3, tau, zeta);
        CHECK(rel(all[static_cast<std::size_t>(n)], q_func(Sign::plus, n, tau, zeta)) < 1e-12);
    }
}

TEST_CASE("q_0 plus tends to the Gamma ratio for large zeta")
{
    const cplx tau{0.8, 0.0};
    const cplx limit = 1.0 / (0.5 + I * tau);
    CHECK(rel(q_func(Sign::plus, 0, tau, cplx{1e9, 1e9}), limit) < 1e-8);
}

TEST_CASE("continuation identity between q plus and q minus")
{
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
        for (double tau : {-1.5, -0.2, 0.0, 0.9, 2.0}) {
            for (cplx zeta : {cplx{1.6, 0.9}, cplx{-2.0, 1.0}, cplx{0.4, 0.5}, cplx{-0.3, -0.6}, cplx{3.0, -2.5},
                              cplx{0.8, -0.4}}) {
                const cplx lhs = q_func(Sign::plus, n, tau, zeta);
                const cplx rhs = std::pow(zeta, n + 1) * q_func(Sign::minus, n, tau, zeta) +
                                 2.0 * pi * I * rho_weight(tau, zeta) * p_poly(n, tau, zeta);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
            }
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("CfConfig validation")
{
    CfConfig c;
    CHECK_NOTHROW(c.validate());
    c.max_depth = 10;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = CfConfig{};
    c.rel_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
