#include "pgreen/green.hpp"

#include "pgreen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pgreen {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

void check_zeta(const ChannelParams& p)
{
    if (std::abs(p.zeta - 1.0) < 1e-15) {
        throw DegenerateError("Green element: zeta = 1");
    }
}

// Coordinate-dependent prefactor: theta^{n1-n2} for xi, lambda^{n2-n1} for eta.
cplx shift_factor(Coordinate c, const ChannelParams& p, int n1, int n2)
{
    return c == Coordinate::xi ? std::pow(p.theta, n1 - n2) : std::pow(p.lambda, n2 - n1);
}

// Prefactor of the continuation term: theta^{n1} / lambda^{n2} for xi and
// theta^{n2} / lambda^{n1} for eta.
cplx continuation_factor(Coordinate c, const ChannelParams& p, int n1, int n2)
{
    return c == Coordinate::xi ? std::pow(p.theta, n1) / std::pow(p.lambda, n2)
                               : std::pow(p.theta, n2) / std::pow(p.lambda, n1);
}

double tau_scale(const ChannelParams&) { return 1.0; }

AdaptiveSettings tau_settings(const QuadratureConfig& quad)
{
    AdaptiveSettings s;
    s.rel_tol = quad.tau_rel_tol;
    s.abs_tol = 1e-16;
    s.max_evals = quad.tau_max_evals;
    s.execution = quad.execution;
    return s;
}

Eigen::MatrixXcd square_convolution(Sign sign, double t0, const SheetedEnergy& E, int nmax, double k, double b,
                                    const QuadratureConfig& quad, const CfConfig& cfg, bool reflected)
{
    const ChannelParams base = map_energy_params(E, k, b, 0.0);
    check_zeta(base);
    const cplx tau0 = k / base.gamma * t0;
    const int d = nmax + 1;
    const int dim = d * d * d * d;
    VectorIntegrand f = [&](double tau, Eigen::Ref<VectorXc> out) {
        const cplx tx = reflected ? tau0 - tau : cplx(tau);
        const cplx te = reflected ? cplx(tau) : tau0 - tau;
        const Eigen::MatrixXcd gx = g_block(Coordinate::xi, sign, nmax, base.with_tau(tx), cfg);
        const Eigen::MatrixXcd ge = g_block(Coordinate::eta, sign, nmax, base.with_tau(te), cfg);
        // out[(n d + m) * d^2 + (n' d + m')] = gx(n, n') ge(m, m')
        for (int n = 0; n < d; ++n) {
            for (int m = 0; m < d; ++m) {
                for (int np = 0; np < d; ++np) {
                    for (int mp = 0; mp < d; ++mp) {
                        out((n * d + m) * d * d + np * d + mp) = gx(n, np) * ge(m, mp);
                    }
                }
            }
        }
    };
    LineMap map;
    map.center = 0.5 * tau0.real();
    map.scale = tau_scale(base);
    // The convolution scales like 1/(|gamma| |E|); tie the absolute tolerance to the integrand size.
    AdaptiveSettings settings = tau_settings(quad);
    VectorXc probe(dim);
    f(map.center, probe);
    settings.abs_tol = std::max(1e-3 * quad.tau_rel_tol * probe.cwiseAbs().maxCoeff(), 1e-300);
    IntegrationResult r;
    try {
        r = integrate_line(f, map, dim, settings);
    }
    catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(e.what()) + " (green2d at E = " + std::to_string(E.value.real()) + " + " +
                               std::to_string(E.value.imag()) + "i, " + to_string(E.sheet) + ")");
    }
    if (!r.converged) {
        throw ConvergenceError("green2d: tau convolution did not converge");
    }
    const cplx pref = sign_value(sign) * base.gamma / (I * pi);
    Eigen::MatrixXcd G(d * d, d * d);
    for (int row = 0; row < d * d; ++row) {
        for (int col = 0; col < d * d; ++col) {
            G(row, col) = pref * r.value(row * d * d + col);
        }
    }
    return G;
}

} // namespace

Eigen::MatrixXcd g_block(Coordinate c, Sign sign, int nmax, const ChannelParams& params, const CfConfig& cfg)
{
    if (nmax < 0) {
        throw DomainError("g_block: negative order");
    }
    check_zeta(params);
    const int d = nmax + 1;
    const cplx tau = params.tau;
    const cplx zeta = params.zeta;
    const cplx pre = I / (2.0 * params.gamma) * ((zeta - 1.0) / zeta);
    const std::vector<cplx> p = p_poly_all(nmax, tau, zeta);
    const bool continued = sign == Sign::plus && params.sheet == Sheet::unphysical;
    const Sign q_sign = (sign == Sign::plus && !continued) ? Sign::plus : Sign::minus;
    const std::vector<cplx> q = q_func_all(q_sign, nmax, tau, zeta, cfg);
    Eigen::MatrixXcd g(d, d);
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            const int lo = std::min(n1, n2);
            const int hi = std::max(n1, n2);
            cplx qv = q[hi];
            if (q_sign == Sign::minus) {
                qv *= std::pow(zeta, hi + 1);
            }
            g(n1, n2) = pre * shift_factor(c, params, n1, n2) / std::pow(zeta, n2) * p[lo] * qv;
        }
    }
    if (continued) {
        const cplx rho = rho_weight(tau, zeta);
        const cplx cpre = -(pi / params.gamma) * ((zeta - 1.0) / zeta) * rho;
        for (int n1 = 0; n1 < d; ++n1) {
            for (int n2 = 0; n2 < d; ++n2) {
                g(n1, n2) += cpre * continuation_factor(c, params, n1, n2) * p[n1] * p[n2];
            }
        }
    }
    return g;
}

cplx g_xi_element(Sign sign, int n1, int n2, const ChannelParams& params, const CfConfig& cfg)
{
    if (n1 < 0 || n2 < 0) {
        throw DomainError("g_xi_element: negative index");
    }
    return g_block(Coordinate::xi, sign, std::max(n1, n2), params, cfg)(n1, n2);
}

cplx g_eta_element(Sign sign, int n1, int n2, const ChannelParams& params, const CfConfig& cfg)
{
    if (n1 < 0 || n2 < 0) {
        throw DomainError("g_eta_element: negative index");
    }
    return g_block(Coordinate::eta, sign, std::max(n1, n2), params, cfg)(n1, n2);
}

cplx completeness_1d(Coordinate c, Sign sign, int n1, int n2, const ChannelParams& params,
                     const QuadratureConfig& quad, const CfConfig& cfg)
{
    VectorIntegrand f = [&](double tau, Eigen::Ref<VectorXc> out) {
        out(0) = g_block(c, sign, std::max(n1, n2), params.with_tau(tau), cfg)(n1, n2);
    };
    LineMap map;
    map.center = 0.0;
    map.scale = tau_scale(params);
    const IntegrationResult r = integrate_line_symmetric(f, map, 1, tau_settings(quad));
    if (!r.converged) {
        throw ConvergenceError("completeness_1d: tau integral did not converge");
    }
    return sign_value(sign) * params.gamma / (I * pi) * r.value(0);
}

OrthogonalityResult orthogonality_integral(int n, int m, cplx zeta, double cutoff, const QuadratureConfig& quad)
{
    if (n < 0 || m < 0) {
        throw DomainError("orthogonality_integral: negative index");
    }
    if (!(cutoff > 0.0)) {
        throw DomainError("orthogonality_integral: cutoff must be positive");
    }
    const cplx pref = I * std::pow(zeta, -m) * (zeta - 1.0) / zeta;
    auto integrand = [&](double tau) {
        return pref * rho_weight(tau, zeta) * p_poly(n, tau, zeta) * p_poly(m, tau, zeta);
    };
    VectorIntegrand f = [&](double tau, Eigen::Ref<VectorXc> out) { out(0) = integrand(tau); };
    std::vector<double> breaks;
    const int pieces = std::max(2, static_cast<int>(std::ceil(cutoff / 5.0)) * 2);
    for (int i = 0; i <= pieces; ++i) {
        breaks.push_back(-cutoff + 2.0 * cutoff * i / pieces);
    }
    // Off-diagonal values vanish through cancellation, so the absolute floor
    // follows the L1 norm of the integrand.
    VectorIntegrand fabs = [&](double tau, Eigen::Ref<VectorXc> out) { out(0) = std::abs(integrand(tau)); };
    AdaptiveSettings coarse = tau_settings(quad);
    coarse.rel_tol = 1e-3;
    coarse.abs_tol = 0.0;
    const double l1 = std::abs(integrate_adaptive(fabs, breaks, 1, coarse).value(0));
    AdaptiveSettings settings = tau_settings(quad);
    settings.abs_tol = 1e-14 * std::max(l1, 1.0);
    const IntegrationResult r = integrate_adaptive(f, breaks, 1, settings);
    if (!r.converged) {
        throw ConvergenceError("orthogonality_integral: tau integral did not converge");
    }
    // The integrand decays like exp(-(pi - |arg(-zeta)|) |tau|) times a polynomial.
    const double rate = pi - std::abs(std::arg(-zeta));
    const double edge = std::abs(integrand(cutoff)) + std::abs(integrand(-cutoff));
    OrthogonalityResult out;
    out.value = r.value(0);
    out.tail_bound = edge / std::max(rate, 1e-3);
    return out;
}

std::vector<IndexPair> square_indices(int nmax)
{
    std::vector<IndexPair> out;
    for (int n = 0; n <= nmax; ++n) {
        for (int m = 0; m <= nmax; ++m) {
            out.emplace_back(n, m);
        }
    }
    return out;
}

Eigen::MatrixXcd green2d_square(Sign sign, double t0, const SheetedEnergy& E, int nmax, double k, double b,
                                const QuadratureConfig& quad, const CfConfig& cfg)
{
    return square_convolution(sign, t0, E, nmax, k, b, quad, cfg, false);
}

Eigen::MatrixXcd green2d_square_reflected(Sign sign, double t0, const SheetedEnergy& E, int nmax, double k,
                                          double b, const QuadratureConfig& quad, const CfConfig& cfg)
{
    return square_convolution(sign, t0, E, nmax, k, b, quad, cfg, true);
}

GreenBlock green2d_block(Sign sign, double t0, const SheetedEnergy& E, const std::vector<IndexPair>& rows,
                         const std::vector<IndexPair>& cols, double k, double b, const QuadratureConfig& quad,
                         const CfConfig& cfg)
{
    int nmax = 0;
    for (const auto& v : {rows, cols}) {
        for (const auto& [n, m] : v) {
            if (n < 0 || m < 0) {
                throw DomainError("green2d_block: negative index");
            }
            nmax = std::max({nmax, n, m});
        }
    }
    const Eigen::MatrixXcd full = green2d_square(sign, t0, E, nmax, k, b, quad, cfg);
    const int d = nmax + 1;
    GreenBlock blk;
    blk.t0 = t0;
    blk.energy = E;
    blk.sign = sign;
    blk.rows = rows;
    blk.cols = cols;
    blk.values.resize(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            blk.values(static_cast<int>(i), static_cast<int>(j)) =
                full(rows[i].first * d + rows[i].second, cols[j].first * d + cols[j].second);
        }
    }
    return blk;
}

cplx green2d_element(Sign sign, double t0, const SheetedEnergy& E, IndexPair row, IndexPair col, double k, double b,
                     const QuadratureConfig& quad, const CfConfig& cfg)
{
    return green2d_block(sign, t0, E, {row}, {col}, k, b, quad, cfg).values(0, 0);
}

GreenCache::GreenCache(double k, double b, int nmax, QuadratureConfig quad, CfConfig cfg)
    : k_(k), b_(b), nmax_(nmax), quad_(quad), cfg_(cfg)
{
}

Eigen::MatrixXcd GreenCache::get(Sign sign, double t0, const SheetedEnergy& E)
{
    const Key key{sign == Sign::plus ? 1 : -1, t0, E.value.real(), E.value.imag(),
                  E.sheet == Sheet::physical ? 0 : 1};
    {
        std::lock_guard lock(mutex_);
        if (auto it = store_.find(key); it != store_.end()) {
            ++hits_;
            return it->second;
        }
    }
    Eigen::MatrixXcd value = green2d_square(sign, t0, E, nmax_, k_, b_, quad_, cfg_);
    std::lock_guard lock(mutex_);
    return store_.emplace(key, std::move(value)).first->second;
}

std::size_t GreenCache::size() const
{
    std::lock_guard lock(mutex_);
    return store_.size();
}

std::size_t GreenCache::hits() const
{
    std::lock_guard lock(mutex_);
    return hits_;
}

} // namespace pgreen
