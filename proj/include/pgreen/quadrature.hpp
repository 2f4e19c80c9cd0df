#pragma once

#include "pgreen/special_functions.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace pgreen {

/// How quadrature nodes are evaluated. Both modes run the same arithmetic
/// and sum in the same order, so results are bit-identical.
enum class Execution { serial, parallel };

/// Tolerances and limits of the adaptive quadratures.
struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    /// Evaluation budget of each energy-line quadrature.
    int max_evals = 20000;
    /// Evaluation budget of each tau convolution.
    int tau_max_evals = 400000;
    /// Length scale of the infinite-line map for energy paths; also the
    /// half-width of the sample window used for integrand traces.
    double x_cutoff = 400.0;
    /// Truncation |tau| <= tau_cutoff of rho-weighted tau integrals, whose
    /// integrands decay like exp(-pi |tau|).
    double tau_cutoff = 40.0;
    /// Relative tolerance of the inner tau convolution.
    double tau_rel_tol = 1e-11;
    /// Largest |E| at which Green blocks are evaluated; beyond it the mapped
    /// integrands are extrapolated to the endpoint of the map.
    double energy_cap = 1e8;
    /// Relative accuracy of the piecewise Chebyshev Green-line interpolants.
    double interp_tol = 1e-10;
    /// Tolerances of the nested double energy integrals (absolute, in units
    /// where the normalized integrals are of order one).
    double double_rel_tol = 1e-7;
    double double_abs_tol = 1e-9;
    int double_max_evals = 20000;
    Execution execution = Execution::parallel;

    void validate() const;
};

using VectorXc = Eigen::VectorXcd;

/// Integrand filling `out` (pre-sized to the integral's dimension) at x.
using VectorIntegrand = std::function<void(double x, Eigen::Ref<VectorXc> out)>;

struct IntegrationResult {
    VectorXc value;
    double error = 0.0;
    int evals = 0;
    bool converged = false;
};

struct AdaptiveSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_evals = 100000;
    Execution execution = Execution::parallel;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature of a vector-valued
/// complex integrand on [a, b]. Subdivides the panel with the largest error
/// until sum(errors) <= max(abs_tol, rel_tol * |I|_inf) over all components.
/// Panels are summed left to right.
[[nodiscard]] IntegrationResult integrate_adaptive(const VectorIntegrand& f, double a, double b, int dim,
                                                   const AdaptiveSettings& s);

/// Same as integrate_adaptive but starting from the given breakpoints.
[[nodiscard]] IntegrationResult integrate_adaptive(const VectorIntegrand& f, const std::vector<double>& breaks,
                                                   int dim, const AdaptiveSettings& s);

/// Map of u in (-1, 1) onto the whole real line: s = center + scale u / (1-u^2)^2.
struct LineMap {
    double center = 0.0;
    double scale = 1.0;

    [[nodiscard]] double s(double u) const
    {
        const double w = 1.0 - u * u;
        return center + scale * u / (w * w);
    }
    [[nodiscard]] double ds(double u) const
    {
        const double w = 1.0 - u * u;
        return scale * (1.0 + 3.0 * u * u) / (w * w * w);
    }
    /// Inverse of s for a given offset s - center.
    [[nodiscard]] double u_of(double offset) const;
};

/// Integral over the whole line, f absolutely integrable.
[[nodiscard]] IntegrationResult integrate_line(const VectorIntegrand& f, const LineMap& map, int dim,
                                               const AdaptiveSettings& s);

/// Symmetric (principal-value at infinity) integral over the whole line:
/// integral over s > 0 of f(center + s) + f(center - s).
[[nodiscard]] IntegrationResult integrate_line_symmetric(const VectorIntegrand& f, const LineMap& map,
                                                         int dim, const AdaptiveSettings& s);

/// As integrate_line_symmetric, but f is only sampled for |s - center| <= max_offset.
/// The mapped integrand, bounded at u = 1, is integrated adaptively up to
/// u_cap = map.u_of(max_offset) and extrapolated polynomially on [u_cap, 1].
[[nodiscard]] IntegrationResult integrate_line_symmetric_capped(const VectorIntegrand& f, const LineMap& map,
                                                                int dim, const AdaptiveSettings& s,
                                                                double max_offset);

/// Integral over u in [0, 1) of a mapped integrand g(u) that is bounded at
/// u = 1 but only sampled for u <= ucap: adaptive on [0, ucap] plus the
/// extrapolated tail on [ucap, 1].
[[nodiscard]] IntegrationResult integrate_to_endpoint(const VectorIntegrand& g, double ucap, int dim,
                                                      const AdaptiveSettings& s);

/// Integral over [a, 1] of g given samples on [a - h, a] only: polynomial
/// extrapolation through n Chebyshev points. The error estimate compares
/// two interpolation orders.
[[nodiscard]] IntegrationResult integrate_extrapolated_tail(const VectorIntegrand& g, double a, double h, int dim,
                                                            Execution exec);

/// Barycentric weights of the Chebyshev points of the first kind.
[[nodiscard]] std::vector<double> chebyshev_points(int n, double a, double b);
[[nodiscard]] std::vector<double> chebyshev_weights(int n);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

} // namespace pgreen
