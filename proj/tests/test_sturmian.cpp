#include "pgreen/errors.hpp"
#include "pgreen/sturmian.hpp"

#include "doctest.h"

#include <cmath>

using namespace pgreen;

namespace {
constexpr cplx I{0.0, 1.0};
}

TEST_CASE("one-dimensional operator matrices")
{
    const double k = 5.0;
    const double b = 1.3;
    const int N = 6;
    const auto hx = h_xi_matrix(k, b, N);
    const auto he = h_eta_matrix(k, b, N);
    const auto q = q_matrix(b, N);
    for (int n = 0; n < N; ++n) {
        CHECK(std::abs(hx(n, n) - (b + I * k + 2.0 * b * n)) < 1e-14);
        CHECK(std::abs(he(n, n) - (b - I * k + 2.0 * b * n)) < 1e-14);
        CHECK(std::abs(q(n, n) - (2.0 * n + 1.0) / (2.0 * b)) < 1e-14);
        if (n > 0) {
            CHECK(std::abs(hx(n, n - 1) - (b - I * k) * double(n)) < 1e-14);
            CHECK(std::abs(he(n, n - 1) - (b + I * k) * double(n)) < 1e-14);
            CHECK(std::abs(q(n, n - 1) + n / (2.0 * b)) < 1e-14);
        }
        if (n + 1 < N) {
            CHECK(std::abs(hx(n, n + 1) - (b + I * k) * double(n + 1)) < 1e-14);
            CHECK(std::abs(q(n, n + 1) + (n + 1) / (2.0 * b)) < 1e-14);
        }
        for (int m = 0; m < N; ++m) {
            if (std::abs(n - m) > 1) {
                CHECK(hx(n, m) == cplx(0.0));
            }
        }
    }
    CHECK((q.dense() - q.dense().transpose()).norm() == 0.0);
}

TEST_CASE("helium system constants")
{
    const PhysicalSystem s = PhysicalSystem::helium_benchmark(5.0);
    CHECK(s.mu13() == doctest::Approx(1.0));
    CHECK(s.mu23() == doctest::Approx(1.0));
    CHECK(s.mu12() == doctest::Approx(0.5));
    CHECK(s.t23() == doctest::Approx(-0.4));
    CHECK(s.t13() == doctest::Approx(-0.4));
    CHECK(s.t12() == doctest::Approx(0.1));
    const Channel c3 = s.channel(3);
    CHECK(c3.mu == doctest::Approx(0.5));
    CHECK(c3.t == doctest::Approx(0.1));
    CHECK_THROWS((void)s.channel(4));

    PhysicalSystem f = s;
    f.m3_infinite = false;
    f.m3 = 7294.0;
    CHECK(f.mu13() == doctest::Approx(7294.0 / 7295.0));
    f.m1 = -1.0;
    CHECK_THROWS_AS(f.validate(), ConfigError);
    BasisParams bp;
    bp.N = 0;
    CHECK_THROWS_AS(bp.validate(), ConfigError);
}

TEST_CASE("energy parameter map")
{
    const double k = 5.0;
    const double b = 1.0;
    const double t = -0.4;
    const SheetedEnergy E{cplx{12.5, 100.0}, Sheet::physical};
    const ChannelParams p = map_energy_params(E, k, b, t);
    cplx g = std::sqrt(2.0 * E.value);
    if (g.imag() < 0.0) {
        g = -g;
    }
    CHECK(std::abs(p.gamma - g) < 1e-13);
    const cplx theta = (2.0 * b + I * (g - k)) / (2.0 * b - I * (g - k));
    const cplx lambda = (2.0 * b - I * (g + k)) / (2.0 * b + I * (g + k));
    CHECK(std::abs(p.theta - theta) < 1e-13);
    CHECK(std::abs(p.lambda - lambda) < 1e-13);
    CHECK(std::abs(p.zeta - lambda / theta) < 1e-13);
    CHECK(std::abs(p.tau - k / g * (t + 0.5 * I)) < 1e-13);
    CHECK(std::abs(p.tau_eta - k / g * (t - 0.5 * I)) < 1e-13);
    CHECK(std::abs(p.mu_c - (k * k / 2.0 - E.value)) < 1e-13);

    const SheetedEnergy Eu{cplx{12.5, -3.0}, Sheet::unphysical};
    CHECK(Eu.gamma().imag() < 0.0);
    const SheetedEnergy Ep{cplx{12.5, -3.0}, Sheet::physical};
    CHECK(Ep.gamma().imag() > 0.0);
}

TEST_CASE("Kronecker product and two-dimensional operators")
{
    Eigen::MatrixXcd A(2, 2);
    A << 1.0, 2.0, 3.0, 4.0;
    Eigen::MatrixXcd B(2, 2);
    B << 0.0, I, -1.0, 2.0;
    const Eigen::MatrixXcd K = kron(A, B);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    CHECK(K(2 * i + r, 2 * j + c) == A(i, j) * B(r, c));
                }
            }
        }
    }

    const Channel ch{1.0, 5.0, -0.4};
    const double b = 1.0;
    const int N = 4;
    const Eigen::MatrixXcd h = h2d_matrix(ch, b, N);
    const Eigen::MatrixXcd hx = h_xi_matrix(ch.k, b, N).dense();
    const Eigen::MatrixXcd he = h_eta_matrix(ch.k, b, N).dense();
    const Eigen::MatrixXcd q = q_matrix(b, N).dense().cast<cplx>();
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            for (int n2 = 0; n2 < N; ++n2) {
                for (int m2 = 0; m2 < N; ++m2) {
                    const cplx expect = hx(n, n2) * double(m == m2) + he(m, m2) * double(n == n2) +
                                        2.0 * ch.k * ch.t * double(n == n2 && m == m2);
                    CHECK(std::abs(h(n * N + m, n2 * N + m2) - expect) < 1e-14);
                    const cplx qexp = q(n, n2) * double(m == m2) + q(m, m2) * double(n == n2);
                    CHECK(std::abs(q2d_matrix(b, N)(n * N + m, n2 * N + m2) - qexp) < 1e-14);
                }
            }
        }
    }
    const cplx E{12.5, 100.0};
    const Eigen::MatrixXcd R = resolvent_operator_2d(ch, b, N, E);
    CHECK((R - (h + (ch.k * ch.k / 2.0 - E) * q2d_matrix(b, N))).norm() < 1e-12);
}
