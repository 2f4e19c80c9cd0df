#include "pgreen/errors.hpp"
#include "pgreen/green.hpp"

#include "doctest.h"

#include <cmath>

using namespace pgreen;

namespace {

constexpr double k = 5.0;
constexpr double t = -0.4;

// Leading block of the inverse of a deep truncation of [h + 2kt I + mu_c Q].
Eigen::MatrixXcd truncated_inverse(Coordinate c, cplx mu_c, double b, int N, int keep)
{
    const Eigen::MatrixXcd h = c == Coordinate::xi ? h_xi_matrix(k, b, N).dense() : h_eta_matrix(k, b, N).dense();
    const Eigen::MatrixXcd M =
        h + (2.0 * k * t) * Eigen::MatrixXcd::Identity(N, N) + mu_c * q_matrix(b, N).dense().cast<cplx>();
    return M.inverse().topLeftCorner(keep, keep);
}

} // namespace

TEST_CASE("closed-form one-dimensional blocks invert the tridiagonal operators")
{
    for (double b : {1.0, 0.7}) {
        for (cplx Ev : {cplx{12.5, 100.0}, cplx{12.5, 10.0}, cplx{-3.0, 2.0}, cplx{40.0, 5.0}}) {
            const ChannelParams p = map_energy_params(SheetedEnergy{Ev, Sheet::physical}, k, b, t);
            const Eigen::MatrixXcd gx = g_block(Coordinate::xi, Sign::plus, 4, p);
            const Eigen::MatrixXcd ge = g_block(Coordinate::eta, Sign::plus, 4, p.with_tau(p.tau_eta));
            const Eigen::MatrixXcd ix = truncated_inverse(Coordinate::xi, p.mu_c, b, 600, 5);
            const Eigen::MatrixXcd ie = truncated_inverse(Coordinate::eta, p.mu_c, b, 600, 5);
            CAPTURE(Ev);
            CAPTURE(b);
            CHECK((gx - ix).cwiseAbs().maxCoeff() < 1e-8);
            CHECK((ge - ie).cwiseAbs().maxCoeff() < 1e-8);
            CHECK(std::abs(g_xi_element(Sign::plus, 3, 1, p) - gx(3, 1)) < 1e-15);
        }
    }
}

TEST_CASE("outgoing blocks are continuous across the cut onto the unphysical sheet")
{
    for (double x : {3.0, 12.5, 60.0}) {
        const double eps = 1e-9;
        const ChannelParams above = map_energy_params(SheetedEnergy{cplx{x, eps}, Sheet::physical}, k, 1.0, t);
        const ChannelParams below = map_energy_params(SheetedEnergy{cplx{x, -eps}, Sheet::unphysical}, k, 1.0, t);
        const Eigen::MatrixXcd a = g_block(Coordinate::xi, Sign::plus, 3, above);
        const Eigen::MatrixXcd c = g_block(Coordinate::xi, Sign::plus, 3, below);
        CAPTURE(x);
        CHECK((a - c).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("completeness of the one-dimensional blocks")
{
    const ChannelParams p = map_energy_params(SheetedEnergy{cplx{20.0, 5.0}, Sheet::physical}, k, 1.0, t);
    for (Coordinate c : {Coordinate::xi, Coordinate::eta}) {
        for (int n1 = 0; n1 <= 2; ++n1) {
            for (int n2 = 0; n2 <= 2; ++n2) {
                const cplx v = completeness_1d(c, Sign::plus, n1, n2, p);
                CHECK(std::abs(v - (n1 == n2 ? 0.5 : 0.0)) < 1e-6);
            }
        }
    }
}

TEST_CASE("orthogonality of p_n with respect to rho")
{
    const cplx zeta = map_energy_params(SheetedEnergy{cplx{12.5, 10.0}, Sheet::physical}, k, 1.0, t).zeta;
    double worst = 0.0;
    double worst_tail = 0.0;
    for (int n = 0; n <= 4; ++n) {
        for (int m = 0; m <= 4; ++m) {
            const OrthogonalityResult o = orthogonality_integral(n, m, zeta, 40.0);
            worst = std::max(worst, std::abs(o.value - (n == m ? 1.0 : 0.0)));
            worst_tail = std::max(worst_tail, o.tail_bound);
        }
    }
    CHECK(worst < 1e-8);
    CHECK(worst_tail < 1e-20);
    const OrthogonalityResult short_range = orthogonality_integral(2, 2, zeta, 5.0);
    CHECK(short_range.tail_bound > 1e-8);
    CHECK(std::abs(short_range.value - 1.0) > 1e-8);
    CHECK_THROWS_AS((void)orthogonality_integral(1, 1, zeta, 0.0), DomainError);
}

TEST_CASE("two-dimensional block times the truncated operator is the identity")
{
    const Channel ch{1.0, k, t};
    for (cplx Ev : {cplx{12.5, 100.0}, cplx{5.0, 20.0}}) {
        const SheetedEnergy E{Ev, Sheet::physical};
        const int N = 8;
        const Eigen::MatrixXcd A = resolvent_operator_2d(ch, 1.0, N, Ev);
        const Eigen::MatrixXcd G = green2d_square(Sign::plus, t, E, 2, k, 1.0);
        const auto labels = square_indices(2);
        double worst = 0.0;
        for (std::size_t r = 0; r < labels.size(); ++r) {
            if (labels[r].first > 1 || labels[r].second > 1) {
                continue;
            }
            for (std::size_t c = 0; c < labels.size(); ++c) {
                cplx sum = 0.0;
                for (std::size_t j = 0; j < labels.size(); ++j) {
                    sum += A(labels[r].first * N + labels[r].second, labels[j].first * N + labels[j].second) *
                           G(static_cast<int>(j), static_cast<int>(c));
                }
                worst = std::max(worst, std::abs(sum - (r == c ? 1.0 : 0.0)));
            }
        }
        CAPTURE(Ev);
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("two-dimensional block symmetries and variants")
{
    const SheetedEnergy E{cplx{12.5, 30.0}, Sheet::physical};
    const Eigen::MatrixXcd G = green2d_square(Sign::plus, t, E, 1, k, 1.0);
    const Eigen::MatrixXcd R = green2d_square_reflected(Sign::plus, t, E, 1, k, 1.0);
    CHECK((G - R).cwiseAbs().maxCoeff() < 1e-9);
    const cplx e = green2d_element(Sign::plus, t, E, {1, 0}, {0, 1}, k, 1.0);
    CHECK(std::abs(e - G(2, 1)) < 1e-12);
    const GreenBlock blk = green2d_block(Sign::plus, t, E, {{0, 0}, {1, 1}}, {{1, 0}}, k, 1.0);
    CHECK(blk.values.rows() == 2);
    CHECK(blk.values.cols() == 1);
    CHECK(std::abs(blk.values(1, 0) - G(3, 2)) < 1e-12);
}

TEST_CASE("large-energy limit of the scalar element")
{
    // E G_00 tends to -2b with a correction decaying like |E|^{-1/2}.
    for (double b : {1.0, 2.0}) {
        auto dev = [&](double y) {
            const cplx Ev{12.5, y};
            const cplx g = green2d_element(Sign::plus, t, SheetedEnergy{Ev, Sheet::physical}, {0, 0}, {0, 0}, k, b);
            return std::abs(Ev * g + 2.0 * b);
        };
        const double d6 = dev(1e6);
        const double d8 = dev(1e8);
        CAPTURE(b);
        CHECK(d8 < 5e-3);
        CHECK(d8 / d6 == doctest::Approx(0.1).epsilon(0.2));
    }
}

TEST_CASE("Green cache memoizes blocks")
{
    GreenCache cache(k, 1.0, 1, QuadratureConfig{});
    const SheetedEnergy E{cplx{12.5, 50.0}, Sheet::physical};
    const Eigen::MatrixXcd a = cache.get(Sign::plus, t, E);
    const Eigen::MatrixXcd b = cache.get(Sign::plus, t, E);
    CHECK(cache.size() == 1);
    CHECK(cache.hits() == 1);
    CHECK(a == b);
    CHECK(a == green2d_square(Sign::plus, t, E, 1, k, 1.0));
}
