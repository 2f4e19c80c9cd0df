#include "pgreen/contours.hpp"
#include "pgreen/errors.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace pgreen;

namespace {

constexpr double k = 5.0;
constexpr double t23 = -0.4;
constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

std::vector<double> grid(double a, double b, int n)
{
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        s[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    }
    return s;
}

double max_modulus(const std::vector<TracePoint>& tr)
{
    double m = 0.0;
    for (const TracePoint& p : tr) {
        m = std::max(m, std::abs(p.value));
    }
    return m;
}

} // namespace

TEST_CASE("path geometry, measure and sheets")
{
    CHECK(path_measure(PathSpec::c1(100.0)) == cplx(1.0));
    CHECK(path_measure(PathSpec::c2(100.0)) == cplx(-1.0));
    CHECK(std::abs(path_measure(PathSpec::c3(12.5)) + I) < 1e-15);

    const PathPoint p1 = path_point(PathSpec::c1(50.0), 3.0);
    CHECK(std::abs(p1.energy.value - cplx(3.0, 50.0)) < 1e-15);
    CHECK(p1.energy.sheet == Sheet::physical);
    const PathPoint p2 = path_point(PathSpec::c2(50.0), 3.0);
    CHECK(std::abs(p2.energy.value - cplx(3.0, -50.0)) < 1e-15);
    CHECK(p2.energy.sheet == Sheet::physical);

    const PathSpec c3 = PathSpec::c3(12.5);
    // s runs along exp(-i phi) = i; the path is traversed towards decreasing s.
    const PathPoint up = path_point(c3, 20.0);
    const PathPoint down = path_point(c3, -20.0);
    CHECK(std::abs(up.energy.value - cplx(12.5, 20.0)) < 1e-12);
    CHECK(up.energy.sheet == Sheet::physical);
    CHECK(std::abs(down.energy.value - cplx(12.5, -20.0)) < 1e-12);
    CHECK(down.energy.sheet == Sheet::unphysical);

    const EnergyLine l = path_line(PathSpec::c1(100.0));
    CHECK(l.closest(cplx(7.0, -3.0)) == doctest::Approx(7.0));
}

TEST_CASE("path validation")
{
    CHECK_THROWS_AS(PathSpec::c1(0.0).validate(), ConfigError);
    CHECK_THROWS_AS(PathSpec::c2(-1.0).validate(), ConfigError);
    CHECK_THROWS_AS(PathSpec::c3(-2.0).validate(), ConfigError);
    CHECK_THROWS_AS(PathSpec::c3(12.5, 0.3).validate(), ConfigError);
    CHECK_THROWS_AS(PathSpec::c3(12.5, -pi).validate(), ConfigError);
    CHECK_NOTHROW(PathSpec::c3(12.5, -1.0).validate());
}

TEST_CASE("single contour integral equals b on every path")
{
    for (double b : {1.0, 0.5}) {
        for (const PathSpec& p : {PathSpec::c1(100.0), PathSpec::c2(100.0), PathSpec::c3(12.5)}) {
            const cplx v = contour_integral_v(p, t23, {0, 0}, {0, 0}, k, b);
            CAPTURE(b);
            const std::string kind_name = to_string(p.kind);
            CAPTURE(kind_name);
            CHECK(std::abs(v - b) < 1e-6);
        }
    }
}

TEST_CASE("single contour integral is independent of the offset")
{
    const cplx a = contour_integral_v(PathSpec::c1(50.0), t23, {0, 0}, {0, 0}, k, 1.0);
    const cplx c = contour_integral_v(PathSpec::c1(500.0), t23, {0, 0}, {0, 0}, k, 1.0);
    CHECK(std::abs(a - c) < 1e-7);
}

TEST_CASE("integrand shrinks as the contour moves away from the axis")
{
    const auto s = grid(-300.0, 300.0, 601);
    const double m50 = max_modulus(integrand_trace(PathSpec::c1(50.0), t23, s, k, 1.0));
    const double m100 = max_modulus(integrand_trace(PathSpec::c1(100.0), t23, s, k, 1.0));
    const double m500 = max_modulus(integrand_trace(PathSpec::c1(500.0), t23, s, k, 1.0));
    CHECK(m50 > m100);
    CHECK(m100 > m500);
    // Large-energy behaviour: |G_0| ~ 2b/|E|, so the peak falls roughly like 1/y0.
    CHECK(m100 * 100.0 == doctest::Approx(2.0 / (2.0 * pi)).epsilon(0.1));
}

TEST_CASE("trace values match the Green block times the measure")
{
    const PathSpec p = PathSpec::c3(12.5);
    const auto tr = integrand_trace(p, t23, {-40.0, 0.5, 40.0}, k, 1.0);
    REQUIRE(tr.size() == 3);
    for (const TracePoint& pt : tr) {
        const PathPoint pp = path_point(p, pt.s);
        const cplx g = green2d_element(Sign::plus, t23, pp.energy, {0, 0}, {0, 0}, k, 1.0);
        CHECK(std::abs(pt.value - pp.measure * g / (2.0 * pi * I)) < 1e-15);
        CHECK(pt.sheet == pp.energy.sheet);
    }
    CHECK(tr.front().sheet == Sheet::unphysical);
    CHECK(tr.back().sheet == Sheet::physical);
}

TEST_CASE("trace CSV format")
{
    std::ostringstream empty;
    write_trace_csv(empty, {});
    CHECK(empty.str() == "s,Re,Im,sheet\n");

    std::ostringstream one;
    write_trace_csv(one, {TracePoint{-1.5, cplx(0.1, -2.0), Sheet::unphysical}});
    CHECK(one.str() ==
          "s,Re,Im,sheet\n-1.5000000000000000e+00,1.0000000000000001e-01,-2.0000000000000000e+00,unphysical\n");

    for (double x : {0.1, -1.0 / 3.0, 6.02214076e23, 1e-300, 0.0}) {
        CHECK(std::stod(format_sci17(x)) == x);
    }
}

TEST_CASE("interpolated Green line reproduces direct evaluation")
{
    const EnergyLine line = path_line(PathSpec::c3(12.5));
    const QuadratureConfig quad;
    const GreenLine gl(line, t23, k, 1.0, 1, quad);
    CHECK(gl.dim() == 4);
    CHECK(gl.panels() >= 8);
    double worst = 0.0;
    for (double s : {-1e4, -300.0, -12.0, -0.3, 0.0, 2.7, 45.0, 1e3, 5e6}) {
        const Eigen::MatrixXcd direct = green2d_square(Sign::plus, t23, line.at(s), 1, k, 1.0);
        const Eigen::MatrixXcd interp = gl.block(s);
        const double rel = (direct - interp).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff();
        CAPTURE(s);
        CHECK(rel < 1e-7);
        worst = std::max(worst, rel);
    }
    MESSAGE("worst relative interpolation error " << worst);
}

TEST_CASE("direct line integral agrees with the interpolated contour block")
{
    const PathSpec p = PathSpec::c1(100.0);
    const Eigen::MatrixXcd direct =
        line_integral_direct(path_line(p), path_measure(p), t23, k, 1.0, 1);
    const Eigen::MatrixXcd block = contour_integral_block(p, t23, 1, k, 1.0);
    CHECK((direct - block).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs(block(0, 0) - 1.0) < 1e-6);
    const cplx v = contour_integral_v(p, t23, {1, 0}, {0, 1}, k, 1.0);
    CHECK(std::abs(v - block(2, 1)) < 1e-6);
}
