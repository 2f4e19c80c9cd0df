#pragma once

#include "pgreen/config.hpp"
#include "pgreen/contours.hpp"
#include "pgreen/report.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pgreen {

/// Published values of the benchmark table.
namespace paper_values {
inline constexpr cplx v1_y0_50{0.99996555, -2.757e-6};
inline constexpr cplx v1_y0_100{0.99996555, 4.887e-6};
inline constexpr cplx v1_y0_500{0.99996539, 4.962e-6};
inline constexpr cplx v3{1.0000132, -1.061e-4};
inline constexpr cplx c1_w1{-0.50009660, -7.58e-5};
inline constexpr cplx c1_w2{-0.50011010, -7.72e-5};
inline constexpr cplx c1_w3{1.00013285, -1.32e-4};
inline constexpr cplx c3_w1{1.49998186, -3.66e-4};
inline constexpr cplx c3_w2{1.49996754, -3.68e-4};
inline constexpr cplx c3_w3{0.99998324, -4.26e-4};
inline constexpr cplx i0_c1{0.79996314e-9, -0.62352239e-8};
inline constexpr cplx hg00{0.99999770, -2.3034284e-5};
} // namespace paper_values

/// Every quantity of the benchmark table. Rows compare against the published
/// values for the benchmark configuration and against the exact
/// k-independent targets otherwise. Progress and timings go to `log`.
[[nodiscard]] Report cmd_table1(const RunConfig& cfg, std::ostream* log = nullptr);

/// Names accepted by VerifyOptions::suites, in execution order.
[[nodiscard]] const std::vector<std::string>& verify_suite_names();

struct VerifyOptions {
    std::vector<std::string> suites; ///< empty runs every suite
};

/// Property suites: orthogonality, completeness, dense_1d, inverse_2d,
/// half_sum, v12 and product_check.
[[nodiscard]] Report cmd_verify(const RunConfig& cfg, const VerifyOptions& opt = {}, std::ostream* log = nullptr);

struct TraceOptions {
    PathKind kind = PathKind::C1;
    std::optional<double> y0;  ///< defaults to paths.y0
    std::optional<double> t;   ///< defaults to t23
    double s_min = -300.0;
    double s_max = 300.0;
    int samples = 601;         ///< zero gives an empty trace
};

/// Integrand of the (0,0;0,0) single contour integral on a uniform grid.
[[nodiscard]] std::vector<TracePoint> cmd_trace(const RunConfig& cfg, const TraceOptions& opt);

struct Green2dQuery {
    Sign sign = Sign::plus;
    std::optional<double> t0; ///< defaults to t of the channel
    int channel = 1;          ///< supplies k (and the default t0)
    cplx energy{12.5, 100.0};
    Sheet sheet = Sheet::physical;
    IndexPair row{0, 0};
    IndexPair col{0, 0};
};

/// Single element of the two-dimensional Green matrix, reported as an info row.
[[nodiscard]] Report cmd_green2d(const RunConfig& cfg, const Green2dQuery& q);

} // namespace pgreen
