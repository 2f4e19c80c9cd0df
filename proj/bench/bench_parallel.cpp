// Serial reference versus OpenMP kernels: wall time and bit-identity.
#include "pgreen/contours.hpp"
#include "pgreen/three_body.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace pgreen;

namespace {

struct Kernel {
    std::string name;
    std::function<Eigen::VectorXcd(const QuadratureConfig&)> run;
};

double seconds(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXcd flat(const Eigen::MatrixXcd& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Compare serial and OpenMP execution of the main kernels"};
    int threads = 0;
    std::vector<std::string> only;
    app.add_option("--threads", threads, "OpenMP threads for the parallel runs (0 keeps the runtime default)");
    app.add_option("--only", only, "Run only the named kernels");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) {
        omp_set_num_threads(threads);
    }

    const PhysicalSystem sys = PhysicalSystem::helium_benchmark(5.0);
    const Channel ch = sys.channel(1);
    const std::vector<Kernel> kernels = {
        {"green2d_square", [&](const QuadratureConfig& q) {
             return flat(green2d_square(Sign::plus, ch.t, SheetedEnergy{cplx(12.5, 30.0), Sheet::physical}, 2, ch.k,
                                        1.0, q));
         }},
        {"trace_601", [&](const QuadratureConfig& q) {
             std::vector<double> s(601);
             for (int i = 0; i < 601; ++i) {
                 s[static_cast<std::size_t>(i)] = -300.0 + i;
             }
             const auto tr = integrand_trace(PathSpec::c1(100.0), ch.t, s, ch.k, 1.0, q);
             Eigen::VectorXcd v(601);
             for (int i = 0; i < 601; ++i) {
                 v(i) = tr[static_cast<std::size_t>(i)].value;
             }
             return v;
         }},
        {"contour_block_C3", [&](const QuadratureConfig& q) {
             return flat(contour_integral_block(PathSpec::c3(12.5), ch.t, 1, ch.k, 1.0, q));
         }},
        {"green_line_C3", [&](const QuadratureConfig& q) {
             const GreenLine gl(path_line(PathSpec::c3(12.5)), ch.t, ch.k, 1.0, 1, q);
             Eigen::VectorXcd v(16);
             gl.eval(3.0, v);
             return v;
         }},
        {"i0_C3", [&](const QuadratureConfig& q) {
             const ThreeBodyGreen g(ThreeBodySetup(PathSpec::c3(12.5), sys, 1.0), 0, q);
             Eigen::VectorXcd v(1);
             v(0) = scalar_element_i0(g, q);
             return v;
         }},
    };

    std::printf("OpenMP threads: %d, processors: %d\n", omp_get_max_threads(), omp_get_num_procs());
    std::printf("%-18s %12s %12s %9s %s\n", "kernel", "serial_s", "parallel_s", "speedup", "identical");
    bool all_identical = true;
    for (const Kernel& k : kernels) {
        if (!only.empty() && std::find(only.begin(), only.end(), k.name) == only.end()) {
            continue;
        }
        QuadratureConfig serial;
        serial.execution = Execution::serial;
        QuadratureConfig parallel;
        parallel.execution = Execution::parallel;
        Eigen::VectorXcd a;
        Eigen::VectorXcd b;
        const double ts = seconds([&] { a = k.run(serial); });
        const double tp = seconds([&] { b = k.run(parallel); });
        const bool same = a.size() == b.size() && (a.array() == b.array()).all();
        all_identical = all_identical && same;
        std::printf("%-18s %12.3f %12.3f %9.2f %s\n", k.name.c_str(), ts, tp, ts / tp, same ? "yes" : "no");
        std::fflush(stdout);
    }
    return all_identical ? 0 : 1;
}
