#pragma once

#include <complex>
#include <vector>

namespace pgreen {

using cplx = std::complex<double>;

/// Sign of the boundary condition: outgoing (+) or incoming (-) waves.
enum class Sign { plus, minus };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// Controls for continued-fraction and series evaluation.
struct CfConfig {
    int max_depth = 20000;  ///< iteration cap of a single continued fraction or series
    double tiny = 1e-300;   ///< Lentz underflow guard
    double rel_tol = 1e-15; ///< termination threshold on the relative update

    /// Throws ConfigError when the fields violate their invariants.
    void validate() const;
};

/// Principal branch of ln Gamma(z): analytic in the plane cut along the
/// negative real axis, real for real positive z.
[[nodiscard]] cplx log_gamma(cplx z);

/// Digamma function psi(z) = d/dz ln Gamma(z).
[[nodiscard]] cplx digamma(cplx z);

/// Rising factorial (x)_n, in log space once n is large enough to overflow.
[[nodiscard]] cplx pochhammer(cplx x, int n);

/// Gauss hypergeometric function 2F1(a,b;c;z) on the principal branch.
///
/// Terminating parameters are summed exactly. When a or b is a positive
/// integer the function is built as a telescoping product of Gauss
/// continued fractions, which converge in the whole cut plane; if those
/// stall the evaluation falls back to a transformed series (z -> z/(z-1) or
/// z -> 1-z, including the logarithmic cases where c-a-b is an integer).
/// Other parameter families use the power series with the same
/// transformations.
[[nodiscard]] cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const CfConfig& cfg = {});

/// Power series of 2F1 without any transformation. Test and fallback helper.
[[nodiscard]] cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z, const CfConfig& cfg = {});

/// Polynomial p_n(tau; zeta) of degree n in tau.
[[nodiscard]] cplx p_poly(int n, cplx tau, cplx zeta);

/// p_0 .. p_nmax at one (tau, zeta).
[[nodiscard]] std::vector<cplx> p_poly_all(int nmax, cplx tau, cplx zeta);

/// Function q_n^(+/-)(tau; zeta); the hypergeometric argument is 1/zeta for
/// the plus sign and zeta for the minus sign.
[[nodiscard]] cplx q_func(Sign sign, int n, cplx tau, cplx zeta, const CfConfig& cfg = {});

/// q_0 .. q_nmax sharing the continued fractions of the lower orders.
[[nodiscard]] std::vector<cplx> q_func_all(Sign sign, int nmax, cplx tau, cplx zeta,
                                           const CfConfig& cfg = {});

/// Weight rho(tau; zeta) of the p_n orthogonality, with |arg(-zeta)| < pi.
/// Throws BranchError when -zeta lies on the negative real axis.
[[nodiscard]] cplx rho_weight(cplx tau, cplx zeta);

} // namespace pgreen
