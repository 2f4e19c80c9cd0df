#include "pgreen/sturmian.hpp"

#include "pgreen/errors.hpp"

#include <cmath>

namespace pgreen {

namespace {

constexpr cplx I{0.0, 1.0};

double reduced(double a, double b) { return a * b / (a + b); }

} // namespace

PhysicalSystem PhysicalSystem::helium_benchmark(double k)
{
    PhysicalSystem s;
    s.Z1 = -1.0;
    s.Z2 = -1.0;
    s.Z3 = 2.0;
    s.m1 = 1.0;
    s.m2 = 1.0;
    s.m3_infinite = true;
    s.k13 = k;
    s.k23 = k;
    s.k12 = k;
    return s;
}

double PhysicalSystem::mu12() const { return reduced(m1, m2); }
double PhysicalSystem::mu13() const { return m3_infinite ? m1 : reduced(m1, m3); }
double PhysicalSystem::mu23() const { return m3_infinite ? m2 : reduced(m2, m3); }

Channel PhysicalSystem::channel(int j) const
{
    switch (j) {
    case 1:
        return {mu23(), k23, t23()};
    case 2:
        return {mu13(), k13, t13()};
    case 3:
        return {mu12(), k12, t12()};
    default:
        throw DomainError("PhysicalSystem::channel: index must be 1, 2 or 3");
    }
}

void PhysicalSystem::validate() const
{
    if (!(m1 > 0.0) || !(m2 > 0.0) || (!m3_infinite && !(m3 > 0.0))) {
        throw ConfigError("system: masses must be positive");
    }
    if (!(k13 > 0.0) || !(k23 > 0.0) || !(k12 > 0.0)) {
        throw ConfigError("system: channel momenta must be positive");
    }
}

void BasisParams::validate() const
{
    if (!(b > 0.0)) {
        throw ConfigError("basis: b must be positive");
    }
    if (N < 1) {
        throw ConfigError("basis: N must be at least 1");
    }
}

const char* to_string(Sheet s) { return s == Sheet::physical ? "physical" : "unphysical"; }

cplx SheetedEnergy::gamma() const
{
    cplx g = std::sqrt(2.0 * value);
    if (g.imag() == 0.0) {
        // On the cut both sheets meet; take the positive momentum.
        return g.real() < 0.0 ? -g : g;
    }
    const bool upper = g.imag() > 0.0;
    if ((sheet == Sheet::physical) != upper) {
        g = -g;
    }
    return g;
}

ChannelParams map_energy_params(const SheetedEnergy& E, double k, double b, double t)
{
    if (E.value == 0.0) {
        throw DegenerateError("map_energy_params: zero energy");
    }
    ChannelParams p;
    p.sheet = E.sheet;
    p.gamma = E.gamma();
    const cplx th_num = 2.0 * b + I * (p.gamma - k);
    const cplx th_den = 2.0 * b - I * (p.gamma - k);
    const cplx la_num = 2.0 * b - I * (p.gamma + k);
    const cplx la_den = 2.0 * b + I * (p.gamma + k);
    constexpr double eps = 1e-14;
    const double scale = 2.0 * b + std::abs(p.gamma) + k;
    if (std::abs(th_num) < eps * scale || std::abs(th_den) < eps * scale ||
        std::abs(la_num) < eps * scale || std::abs(la_den) < eps * scale) {
        throw DegenerateError("map_energy_params: 2b +/- i(gamma -/+ k) vanishes");
    }
    p.theta = th_num / th_den;
    p.lambda = la_num / la_den;
    p.zeta = p.lambda / p.theta;
    p.tau = k / p.gamma * (t + 0.5 * I);
    p.tau_eta = k / p.gamma * (t - 0.5 * I);
    p.mu_c = 0.5 * k * k - E.value;
    return p;
}

Tridiagonal<cplx> h_xi_matrix(double k, double b, int N)
{
    Tridiagonal<cplx> h;
    h.diag.resize(N);
    h.lower.resize(N > 0 ? N - 1 : 0);
    h.upper.resize(N > 0 ? N - 1 : 0);
    for (int n = 0; n < N; ++n) {
        h.diag[n] = b + I * k + 2.0 * b * n;
        if (n + 1 < N) {
            h.upper[n] = (b + I * k) * static_cast<double>(n + 1);
            h.lower[n] = (b - I * k) * static_cast<double>(n + 1);
        }
    }
    return h;
}

Tridiagonal<cplx> h_eta_matrix(double k, double b, int N) { return h_xi_matrix(-k, b, N); }

Tridiagonal<double> q_matrix(double b, int N)
{
    Tridiagonal<double> q;
    q.diag.resize(N);
    q.lower.resize(N > 0 ? N - 1 : 0);
    q.upper.resize(N > 0 ? N - 1 : 0);
    for (int n = 0; n < N; ++n) {
        q.diag[n] = (2.0 * n + 1.0) / (2.0 * b);
        if (n + 1 < N) {
            q.upper[n] = -(n + 1.0) / (2.0 * b);
            q.lower[n] = -(n + 1.0) / (2.0 * b);
        }
    }
    return q;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B)
{
    Eigen::MatrixXcd C(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            C.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
    }
    return C;
}

Eigen::MatrixXcd h2d_matrix(const Channel& ch, double b, int N)
{
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(N, N);
    return kron(h_xi_matrix(ch.k, b, N).dense(), id) + kron(id, h_eta_matrix(ch.k, b, N).dense()) +
           2.0 * ch.k * ch.t * Eigen::MatrixXcd::Identity(N * N, N * N);
}

Eigen::MatrixXcd q2d_matrix(double b, int N)
{
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(N, N);
    const Eigen::MatrixXcd q = q_matrix(b, N).dense().cast<cplx>();
    return kron(q, id) + kron(id, q);
}

Eigen::MatrixXcd resolvent_operator_2d(const Channel& ch, double b, int N, cplx E)
{
    return h2d_matrix(ch, b, N) + (0.5 * ch.k * ch.k - E) * q2d_matrix(b, N);
}

} // namespace pgreen
