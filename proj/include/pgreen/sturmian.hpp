#pragma once

#include "pgreen/special_functions.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace pgreen {

/// Constants of one two-body channel (l, s): reduced mass, relative momentum
/// and Sommerfeld parameter t = Z_l Z_s mu / k.
struct Channel {
    double mu = 1.0;
    double k = 1.0;
    double t = 0.0;
};

/// Charges, masses and channel momenta of a three-body Coulomb system.
///
/// Channels are numbered as the parabolic coordinate pairs: channel 1 is the
/// pair (2,3), channel 2 is (1,3), channel 3 is (1,2).
struct PhysicalSystem {
    double Z1 = -1.0;
    double Z2 = -1.0;
    double Z3 = 2.0;
    double m1 = 1.0;
    double m2 = 1.0;
    double m3 = 1.0;
    bool m3_infinite = true; ///< exact infinite-mass limit, m3 is ignored when set
    double k13 = 5.0;
    double k23 = 5.0;
    double k12 = 5.0;

    /// Two electrons in the field of a bare helium nucleus, equal momenta k.
    [[nodiscard]] static PhysicalSystem helium_benchmark(double k = 5.0);

    [[nodiscard]] double mu12() const;
    [[nodiscard]] double mu13() const;
    [[nodiscard]] double mu23() const;
    [[nodiscard]] double t12() const { return Z1 * Z2 * mu12() / k12; }
    [[nodiscard]] double t13() const { return Z1 * Z3 * mu13() / k13; }
    [[nodiscard]] double t23() const { return Z2 * Z3 * mu23() / k23; }

    /// Channel j in {1, 2, 3}.
    [[nodiscard]] Channel channel(int j) const;

    void validate() const;
};

/// Sturmian basis scaling b and per-coordinate truncation N.
struct BasisParams {
    double b = 1.0;
    int N = 2;

    void validate() const;
};

enum class Sheet { physical, unphysical };

[[nodiscard]] const char* to_string(Sheet s);

/// Complex energy together with the Riemann sheet it lives on.
///
/// The momentum gamma = sqrt(2E) has Im gamma > 0 on the physical sheet and
/// Im gamma < 0 on the unphysical one. On the cut itself (E real positive)
/// the physical sheet takes gamma > 0 and the unphysical one the same root,
/// being the limit from below.
struct SheetedEnergy {
    cplx value;
    Sheet sheet = Sheet::physical;

    [[nodiscard]] cplx gamma() const;
};

/// Energy-dependent quantities of one coordinate for a given (E, k, b, t).
///
/// `tau` is the xi-coordinate argument (k/gamma)(t + i/2); `tau_eta` is the
/// argument at which the eta closed form inverts the eta operator with the
/// same t, namely (k/gamma)(t - i/2).
struct ChannelParams {
    cplx gamma;
    cplx theta;
    cplx lambda;
    cplx zeta;
    cplx tau;
    cplx tau_eta;
    cplx mu_c; ///< k^2/2 - E
    Sheet sheet = Sheet::physical;

    /// Copy with the xi argument replaced, used inside tau convolutions.
    [[nodiscard]] ChannelParams with_tau(cplx new_tau) const
    {
        ChannelParams p = *this;
        p.tau = new_tau;
        return p;
    }
};

/// Maps an energy to gamma, theta, lambda, zeta and the tau arguments.
/// Throws DegenerateError when theta or lambda hits a pole or zero.
[[nodiscard]] ChannelParams map_energy_params(const SheetedEnergy& E, double k, double b, double t);

/// Square tridiagonal matrix stored by diagonals.
template <class T>
struct Tridiagonal {
    std::vector<T> lower; ///< (n, n-1), n = 1..N-1
    std::vector<T> diag;  ///< (n, n)
    std::vector<T> upper; ///< (n, n+1), n = 0..N-2

    [[nodiscard]] int size() const { return static_cast<int>(diag.size()); }

    [[nodiscard]] T operator()(int i, int j) const
    {
        if (i == j) {
            return diag[i];
        }
        if (i == j + 1) {
            return lower[j];
        }
        if (j == i + 1) {
            return upper[i];
        }
        return T{0};
    }

    [[nodiscard]] Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> dense() const
    {
        const int n = size();
        Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> m =
            Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            m(i, i) = diag[i];
            if (i + 1 < n) {
                m(i, i + 1) = upper[i];
                m(i + 1, i) = lower[i];
            }
        }
        return m;
    }
};

/// Matrix of the xi operator in the Sturmian basis.
[[nodiscard]] Tridiagonal<cplx> h_xi_matrix(double k, double b, int N);
/// Matrix of the eta operator; the xi matrix with k -> -k.
[[nodiscard]] Tridiagonal<cplx> h_eta_matrix(double k, double b, int N);
/// Matrix of the coordinate itself (xi or eta) in the Sturmian basis.
[[nodiscard]] Tridiagonal<double> q_matrix(double b, int N);

/// Dense Kronecker product, first factor slowest.
[[nodiscard]] Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

/// Two-dimensional operator h_xi (x) I + I (x) h_eta + 2 k t I of one channel
/// on N x N basis functions, xi index slowest.
[[nodiscard]] Eigen::MatrixXcd h2d_matrix(const Channel& ch, double b, int N);

/// Q (x) I + I (x) Q, the matrix of xi + eta on the same basis.
[[nodiscard]] Eigen::MatrixXcd q2d_matrix(double b, int N);

/// Truncated resolvent matrix h2d + (k^2/2 - E) q2d, whose inverse approximates
/// the leading block of the Green matrix when N is large.
[[nodiscard]] Eigen::MatrixXcd resolvent_operator_2d(const Channel& ch, double b, int N, cplx E);

} // namespace pgreen
