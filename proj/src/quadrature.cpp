#include "pgreen/quadrature.hpp"

#include "pgreen/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <memory>
#include <numbers>
#include <queue>

namespace pgreen {

namespace {

constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525634785, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// 10-point Gauss weights at xgk[1], xgk[3], ..., xgk[9]
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr int n_nodes = 21;

struct Panel {
    double a = 0.0;
    double b = 0.0;
    VectorXc kronrod;
    double error = 0.0;
    long id = 0;
    bool dead = false;
};

double node(double a, double b, int j)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    if (j < 10) {
        return c - h * xgk[j];
    }
    if (j == 10) {
        return c;
    }
    return c + h * xgk[20 - j];
}

// Evaluates the 21 nodes of every requested panel; node order is fixed so the
// result does not depend on the execution mode.
void evaluate_panels(const VectorIntegrand& f, std::vector<Panel>& panels, int dim, Execution exec)
{
    const int np = static_cast<int>(panels.size());
    const int total = np * n_nodes;
    Eigen::MatrixXcd values(dim, total);
    [[maybe_unused]] const bool par = exec == Execution::parallel;
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int idx = 0; idx < total; ++idx) {
        try {
            const Panel& p = panels[idx / n_nodes];
            f(node(p.a, p.b, idx % n_nodes), values.col(idx));
        }
        catch (...) {
#pragma omp critical(pgreen_quadrature_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    for (int ip = 0; ip < np; ++ip) {
        Panel& p = panels[ip];
        const double h = 0.5 * (p.b - p.a);
        VectorXc k = VectorXc::Zero(dim);
        VectorXc g = VectorXc::Zero(dim);
        for (int j = 0; j < n_nodes; ++j) {
            const int jj = j < 11 ? j : 20 - j;
            const auto col = values.col(ip * n_nodes + j);
            k += wgk[jj] * col;
            if (jj % 2 == 1) {
                g += wg[jj / 2] * col;
            }
        }
        p.kronrod = h * k;
        p.error = (h * (k - g)).cwiseAbs().maxCoeff();
        if (!std::isfinite(p.error)) {
            for (int j = 0; j < n_nodes; ++j) {
                if (!values.col(ip * n_nodes + j).allFinite()) {
                    throw ConvergenceError("quadrature: non-finite integrand value at x = " +
                                           std::to_string(node(p.a, p.b, j)));
                }
            }
            throw ConvergenceError("quadrature: non-finite panel estimate");
        }
    }
}

struct ByError {
    bool operator()(const Panel* x, const Panel* y) const
    {
        if (x->error != y->error) {
            return x->error < y->error;
        }
        return x->id > y->id;
    }
};

} // namespace

void QuadratureConfig::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(tau_rel_tol > 0.0)) {
        throw ConfigError("quadrature: tolerances must be positive");
    }
    if (!(x_cutoff > 0.0) || !(tau_cutoff > 0.0)) {
        throw ConfigError("quadrature: cutoffs must be positive");
    }
    if (!(energy_cap > 1e3)) {
        throw ConfigError("quadrature: energy_cap must exceed 1e3");
    }
    if (!(interp_tol > 0.0) || interp_tol >= 1e-3) {
        throw ConfigError("quadrature: interp_tol must lie in (0, 1e-3)");
    }
    if (!(double_rel_tol > 0.0) || !(double_abs_tol > 0.0)) {
        throw ConfigError("quadrature: double-integral tolerances must be positive");
    }
    if (max_evals < 100 || tau_max_evals < 100 || double_max_evals < 100) {
        throw ConfigError("quadrature: evaluation budgets must be at least 100");
    }
}

IntegrationResult integrate_adaptive(const VectorIntegrand& f, const std::vector<double>& breaks, int dim,
                                     const AdaptiveSettings& s)
{
    if (breaks.size() < 2) {
        throw DomainError("integrate_adaptive: need at least two breakpoints");
    }
    std::vector<std::unique_ptr<Panel>> store;
    std::priority_queue<Panel*, std::vector<Panel*>, ByError> queue;
    long next_id = 0;

    std::vector<Panel> fresh;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Panel p;
        p.a = breaks[i];
        p.b = breaks[i + 1];
        p.id = next_id++;
        fresh.push_back(std::move(p));
    }
    evaluate_panels(f, fresh, dim, s.execution);
    int evals = static_cast<int>(fresh.size()) * n_nodes;

    VectorXc total = VectorXc::Zero(dim);
    double total_err = 0.0;
    for (auto& p : fresh) {
        store.push_back(std::make_unique<Panel>(std::move(p)));
        queue.push(store.back().get());
    }

    auto recompute = [&]() {
        total.setZero();
        total_err = 0.0;
        for (const auto& p : store) {
            if (!p->dead) {
                total += p->kronrod;
                total_err += p->error;
            }
        }
    };
    recompute();

    bool converged = false;
    while (true) {
        const double tol = std::max(s.abs_tol, s.rel_tol * total.cwiseAbs().maxCoeff());
        if (total_err <= tol) {
            converged = true;
            break;
        }
        if (evals + 2 * n_nodes > s.max_evals || queue.empty()) {
            break;
        }
        Panel* worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) {
            // cannot split further; keep its error in the total
            continue;
        }
        std::vector<Panel> halves(2);
        halves[0].a = worst->a;
        halves[0].b = mid;
        halves[1].a = mid;
        halves[1].b = worst->b;
        halves[0].id = next_id++;
        halves[1].id = next_id++;
        evaluate_panels(f, halves, dim, s.execution);
        evals += 2 * n_nodes;
        total -= worst->kronrod;
        total_err -= worst->error;
        worst->dead = true;
        for (auto& h : halves) {
            total += h.kronrod;
            total_err += h.error;
            store.push_back(std::make_unique<Panel>(std::move(h)));
            queue.push(store.back().get());
        }
        if (evals % 2000 < 2 * n_nodes) {
            recompute(); // limit drift of the running sums
        }
    }

    // Deterministic final sum: panels ordered by position.
    std::vector<const Panel*> live;
    for (const auto& p : store) {
        if (!p->dead) {
            live.push_back(p.get());
        }
    }
    std::sort(live.begin(), live.end(), [](const Panel* x, const Panel* y) { return x->a < y->a; });
    IntegrationResult r;
    r.value = VectorXc::Zero(dim);
    r.error = 0.0;
    for (const Panel* p : live) {
        r.value += p->kronrod;
        r.error += p->error;
    }
    r.evals = evals;
    r.converged = converged;
    return r;
}

IntegrationResult integrate_adaptive(const VectorIntegrand& f, double a, double b, int dim,
                                     const AdaptiveSettings& s)
{
    return integrate_adaptive(f, std::vector<double>{a, b}, dim, s);
}

double LineMap::u_of(double offset) const
{
    if (offset == 0.0) {
        return 0.0;
    }
    const double target = std::abs(offset) / scale;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double w = 1.0 - mid * mid;
        if (mid / (w * w) < target) {
            lo = mid;
        }
        else {
            hi = mid;
        }
    }
    return std::copysign(0.5 * (lo + hi), offset);
}

IntegrationResult integrate_line(const VectorIntegrand& f, const LineMap& map, int dim, const AdaptiveSettings& s)
{
    VectorIntegrand g = [&](double u, Eigen::Ref<VectorXc> out) {
        f(map.s(u), out);
        out *= map.ds(u);
    };
    return integrate_adaptive(g, std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}, dim, s);
}

IntegrationResult integrate_line_symmetric(const VectorIntegrand& f, const LineMap& map, int dim,
                                           const AdaptiveSettings& s)
{
    VectorIntegrand g = [&](double u, Eigen::Ref<VectorXc> out) {
        const double off = map.s(u) - map.center;
        VectorXc tmp(out.size());
        f(map.center + off, out);
        f(map.center - off, tmp);
        out += tmp;
        out *= map.ds(u);
    };
    return integrate_adaptive(g, std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}, dim, s);
}

std::vector<double> chebyshev_points(int n, double a, double b)
{
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) {
        // ascending order
        const double c = -std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * n));
        x[j] = 0.5 * (a + b) + 0.5 * (b - a) * c;
    }
    return x;
}

std::vector<double> chebyshev_weights(int n)
{
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) {
        const double th = std::numbers::pi * (2.0 * j + 1.0) / (2.0 * n);
        // sign pattern matches the ascending ordering of chebyshev_points
        w[j] = ((n - 1 - j) % 2 == 0 ? 1.0 : -1.0) * std::sin(th);
    }
    return w;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        x[n - 1 - i] = 0.5 * (a + b) + 0.5 * (b - a) * z;
        w[n - 1 - i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
}

namespace {

// Integral over [a, 1] of the degree n-1 interpolant through n Chebyshev samples on [a-h, a].
VectorXc extrapolated_integral(const Eigen::MatrixXcd& vals, const std::vector<double>& x, double a)
{
    const int n = static_cast<int>(x.size());
    const std::vector<double> bw = chebyshev_weights(n);
    std::vector<double> gx;
    std::vector<double> gw;
    gauss_legendre(n, a, 1.0, gx, gw);
    VectorXc out = VectorXc::Zero(vals.rows());
    for (std::size_t q = 0; q < gx.size(); ++q) {
        double den = 0.0;
        VectorXc num = VectorXc::Zero(vals.rows());
        for (int j = 0; j < n; ++j) {
            const double c = bw[j] / (gx[q] - x[j]);
            den += c;
            num += c * vals.col(j);
        }
        out += gw[q] * num / den;
    }
    return out;
}

} // namespace

IntegrationResult integrate_extrapolated_tail(const VectorIntegrand& g, double a, double h, int dim, Execution exec)
{
    constexpr int n_hi = 9;
    constexpr int n_lo = 6;
    const std::vector<double> xh = chebyshev_points(n_hi, a - h, a);
    const std::vector<double> xl = chebyshev_points(n_lo, a - h, a);
    std::vector<double> all = xh;
    all.insert(all.end(), xl.begin(), xl.end());
    Eigen::MatrixXcd vals(dim, static_cast<int>(all.size()));
    [[maybe_unused]] const bool par = exec == Execution::parallel;
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int j = 0; j < static_cast<int>(all.size()); ++j) {
        try {
            g(all[j], vals.col(j));
        }
        catch (...) {
#pragma omp critical(pgreen_quadrature_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    IntegrationResult r;
    r.value = extrapolated_integral(vals.leftCols(n_hi), xh, a);
    const VectorXc lo = extrapolated_integral(vals.rightCols(n_lo), xl, a);
    r.error = (r.value - lo).cwiseAbs().maxCoeff();
    r.evals = n_hi + n_lo;
    r.converged = std::isfinite(r.error);
    return r;
}

IntegrationResult integrate_to_endpoint(const VectorIntegrand& g, double ucap, int dim, const AdaptiveSettings& s)
{
    if (!(ucap > 0.0 && ucap < 1.0)) {
        throw DomainError("integrate_to_endpoint: ucap must lie in (0, 1)");
    }
    const double h = std::min(0.5 * ucap, 16.0 * (1.0 - ucap));
    std::vector<double> breaks;
    for (double b : {0.0, 0.25, 0.5, 0.75}) {
        if (b < ucap - h) {
            breaks.push_back(b);
        }
    }
    breaks.push_back(ucap - h);
    breaks.push_back(ucap);
    IntegrationResult body = integrate_adaptive(g, breaks, dim, s);
    const IntegrationResult tail = integrate_extrapolated_tail(g, ucap, h, dim, s.execution);
    body.value += tail.value;
    body.error += tail.error;
    body.evals += tail.evals;
    const double tol = std::max(s.abs_tol, 10.0 * s.rel_tol * body.value.cwiseAbs().maxCoeff());
    body.converged = body.converged && tail.converged && tail.error <= tol;
    return body;
}

IntegrationResult integrate_line_symmetric_capped(const VectorIntegrand& f, const LineMap& map, int dim,
                                                  const AdaptiveSettings& s, double max_offset)
{
    if (!(max_offset > 0.0)) {
        throw DomainError("integrate_line_symmetric_capped: max_offset must be positive");
    }
    VectorIntegrand g = [&](double u, Eigen::Ref<VectorXc> out) {
        const double off = map.s(u) - map.center;
        VectorXc tmp(out.size());
        f(map.center + off, out);
        f(map.center - off, tmp);
        out += tmp;
        out *= map.ds(u);
    };
    return integrate_to_endpoint(g, map.u_of(max_offset), dim, s);
}

} // namespace pgreen
