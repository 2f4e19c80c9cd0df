#pragma once

#include "pgreen/quadrature.hpp"
#include "pgreen/special_functions.hpp"
#include "pgreen/sturmian.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pgreen {

/// Pass/fail thresholds of the reported quantities.
struct Tolerances {
    double single = 5e-4;          ///< single contour integrals v
    double double_integral = 1e-3; ///< w1, w2, w3
    double i0 = 1e-6;              ///< scalar C1 x C1 element
    double aleph = 2e-3;
    double degenerate = 1e-2; ///< |1 + alpha + beta| below this flags C1
    double product_diag = 1e-3;
    double product_offdiag = 1e-4;
    double orthogonality = 1e-8;
    double completeness = 1e-6;
    double dense_1d = 1e-8;
    double inverse_2d = 1e-6;
    double half_sum = 1e-3;
    double v12 = 1e-3;
};

struct PathsConfig {
    double y0 = 100.0;                          ///< offset of C1 and C2
    std::vector<double> y0_table{50.0, 100.0, 500.0}; ///< offsets of the single-integral rows
    std::optional<double> x0;                   ///< C3 rotation point; k23^2/2 when unset
    double phi = -1.5707963267948966;           ///< C3 rotation angle
};

struct OutputConfig {
    std::string format = "json"; ///< json or csv
    std::string path = "-";      ///< "-" for standard output
};

/// Complete run configuration with the benchmark defaults.
struct RunConfig {
    PhysicalSystem sys = PhysicalSystem::helium_benchmark(5.0);
    BasisParams basis;
    PathsConfig paths;
    QuadratureConfig quad;
    CfConfig cf;
    Tolerances tol;
    OutputConfig output;

    /// Rotation point of C3.
    [[nodiscard]] double x0() const;
    /// True when the system, basis and paths are those of the published table.
    [[nodiscard]] bool is_benchmark() const;

    /// Throws ConfigError on inconsistent values.
    void validate() const;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
    /// Fields absent from `j` keep their defaults; unknown fields and type
    /// mismatches raise ConfigError naming the field.
    [[nodiscard]] static RunConfig from_json(const nlohmann::ordered_json& j);
    /// Parses a JSON text; syntax errors report line and column.
    [[nodiscard]] static RunConfig parse(const std::string& text, const std::string& source = "config");
    [[nodiscard]] static RunConfig load_file(const std::string& path);
};

} // namespace pgreen
