#pragma once

#include "pgreen/quadrature.hpp"
#include "pgreen/special_functions.hpp"
#include "pgreen/sturmian.hpp"

#include <Eigen/Dense>

#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

namespace pgreen {

enum class Coordinate { xi, eta };

/// Closed-form element g^{xi(+/-)}_{n1,n2}(tau; gamma) at tau = params.tau.
/// On the unphysical sheet the outgoing element is the analytic
/// continuation through q^(+) = zeta^{n+1} q^(-) + 2 pi i rho p.
[[nodiscard]] cplx g_xi_element(Sign sign, int n1, int n2, const ChannelParams& params, const CfConfig& cfg = {});

/// Closed-form element g^{eta(+/-)}_{n1,n2}(tau; gamma) at tau = params.tau.
/// It inverts the eta operator of Sommerfeld parameter t when
/// tau = (k/gamma)(t - i/2), i.e. params.with_tau(params.tau_eta).
[[nodiscard]] cplx g_eta_element(Sign sign, int n1, int n2, const ChannelParams& params, const CfConfig& cfg = {});

/// All elements 0 <= n1, n2 <= nmax of one coordinate at tau = params.tau.
[[nodiscard]] Eigen::MatrixXcd g_block(Coordinate c, Sign sign, int nmax, const ChannelParams& params,
                                       const CfConfig& cfg = {});

/// +/-(gamma / i pi) times the integral of g_{n1,n2}(tau) over real tau, the
/// gamma of `params` held fixed. Equals delta_{n1 n2} / 2.
[[nodiscard]] cplx completeness_1d(Coordinate c, Sign sign, int n1, int n2, const ChannelParams& params,
                                   const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

/// Truncated orthogonality integral
///   i zeta^{-m} ((zeta - 1)/zeta) int_{-T}^{T} dtau rho(tau) p_n(tau) p_m(tau),
/// which tends to delta_{nm} as T grows.
struct OrthogonalityResult {
    cplx value;
    double tail_bound = 0.0; ///< estimate of the neglected |tau| > T contribution
};

[[nodiscard]] OrthogonalityResult orthogonality_integral(int n, int m, cplx zeta, double cutoff,
                                                         const QuadratureConfig& quad = {});

/// Row/column label (n, m) of the two-dimensional basis: n counts xi, m eta.
using IndexPair = std::pair<int, int>;

/// Finite block of the two-dimensional Green matrix G^(+/-)(t0; E).
struct GreenBlock {
    double t0 = 0.0;
    SheetedEnergy energy;
    Sign sign = Sign::plus;
    std::vector<IndexPair> rows;
    std::vector<IndexPair> cols;
    Eigen::MatrixXcd values;
};

/// Every (n, m) with n, m <= nmax, xi index slowest.
[[nodiscard]] std::vector<IndexPair> square_indices(int nmax);

/// Two-dimensional Green matrix block as the tau convolution of the xi and
/// eta closed forms sharing one gamma:
///   G = +/-(gamma / i pi) int dtau g^xi(tau) (x) g^eta(tau0 - tau),  tau0 = (k/gamma) t0.
[[nodiscard]] GreenBlock green2d_block(Sign sign, double t0, const SheetedEnergy& E, const std::vector<IndexPair>& rows,
                                       const std::vector<IndexPair>& cols, double k, double b,
                                       const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

/// Single element of green2d_block.
[[nodiscard]] cplx green2d_element(Sign sign, double t0, const SheetedEnergy& E, IndexPair row, IndexPair col,
                                   double k, double b, const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

/// Square block over square_indices(nmax), flattened with index n * (nmax+1) + m.
[[nodiscard]] Eigen::MatrixXcd green2d_square(Sign sign, double t0, const SheetedEnergy& E, int nmax, double k,
                                              double b, const QuadratureConfig& quad = {}, const CfConfig& cfg = {});

/// Variant integrating g^xi(tau0 - tau) (x) g^eta(tau); equal to green2d_square
/// by the change of variables tau -> tau0 - tau.
[[nodiscard]] Eigen::MatrixXcd green2d_square_reflected(Sign sign, double t0, const SheetedEnergy& E, int nmax,
                                                        double k, double b, const QuadratureConfig& quad = {},
                                                        const CfConfig& cfg = {});

/// Thread-safe memo of square Green blocks keyed by every input that determines them.
class GreenCache {
public:
    GreenCache(double k, double b, int nmax, QuadratureConfig quad, CfConfig cfg = {});

    [[nodiscard]] Eigen::MatrixXcd get(Sign sign, double t0, const SheetedEnergy& E);

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t hits() const;

private:
    using Key = std::tuple<int, double, double, double, int>;
    double k_;
    double b_;
    int nmax_;
    QuadratureConfig quad_;
    CfConfig cfg_;
    mutable std::mutex mutex_;
    std::map<Key, Eigen::MatrixXcd> store_;
    std::size_t hits_ = 0;
};

} // namespace pgreen
