#include "pgreen/contours.hpp"

#include "pgreen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <exception>
#include <ostream>

namespace pgreen {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

AdaptiveSettings outer_settings(const QuadratureConfig& quad)
{
    AdaptiveSettings s;
    s.rel_tol = quad.rel_tol;
    s.abs_tol = quad.abs_tol;
    s.max_evals = quad.max_evals;
    s.execution = quad.execution;
    return s;
}

void flatten_into(const Eigen::MatrixXcd& G, Eigen::Ref<VectorXc> out)
{
    const int D = static_cast<int>(G.rows());
    for (int r = 0; r < D; ++r) {
        for (int c = 0; c < D; ++c) {
            out(r * D + c) = G(r, c);
        }
    }
}

Eigen::MatrixXcd unflatten(const VectorXc& v, int D)
{
    Eigen::MatrixXcd M(D, D);
    for (int r = 0; r < D; ++r) {
        for (int c = 0; c < D; ++c) {
            M(r, c) = v(r * D + c);
        }
    }
    return M;
}

} // namespace

const char* to_string(PathKind k)
{
    switch (k) {
    case PathKind::C1:
        return "C1";
    case PathKind::C2:
        return "C2";
    case PathKind::C3:
        return "C3";
    }
    return "?";
}

PathSpec PathSpec::c1(double y0)
{
    PathSpec p;
    p.kind = PathKind::C1;
    p.y0 = y0;
    return p;
}

PathSpec PathSpec::c2(double y0)
{
    PathSpec p;
    p.kind = PathKind::C2;
    p.y0 = y0;
    return p;
}

PathSpec PathSpec::c3(double x0, double phi)
{
    PathSpec p;
    p.kind = PathKind::C3;
    p.x0 = x0;
    p.phi = phi;
    return p;
}

void PathSpec::validate() const
{
    if (kind != PathKind::C3 && !(y0 > 0.0)) {
        throw ConfigError("path: y0 must be positive");
    }
    if (kind == PathKind::C3) {
        if (!(x0 > 0.0)) {
            throw ConfigError("path: rotation point x0 must lie on the positive real axis");
        }
        if (!(phi > -pi && phi < 0.0)) {
            throw ConfigError("path: rotation angle must lie in (-pi, 0)");
        }
    }
}

SheetedEnergy EnergyLine::at(double s) const
{
    const cplx E = energy(s);
    const bool below = continued && E.imag() < 0.0;
    return {E, below ? Sheet::unphysical : Sheet::physical};
}

double EnergyLine::closest(cplx z) const { return std::real((z - origin) * std::conj(direction)) / std::norm(direction); }

EnergyLine path_line(const PathSpec& path)
{
    path.validate();
    EnergyLine l;
    switch (path.kind) {
    case PathKind::C1:
        l.origin = cplx(0.0, path.y0);
        break;
    case PathKind::C2:
        l.origin = cplx(0.0, -path.y0);
        break;
    case PathKind::C3:
        l.origin = cplx(path.x0, 0.0);
        l.direction = std::polar(1.0, -path.phi);
        l.continued = true;
        break;
    }
    return l;
}

cplx path_measure(const PathSpec& path)
{
    switch (path.kind) {
    case PathKind::C1:
        return 1.0;
    case PathKind::C2:
        return -1.0;
    case PathKind::C3:
        return -path_line(path).direction;
    }
    return 0.0;
}

PathPoint path_point(const PathSpec& path, double s)
{
    return {path_line(path).at(s), path_measure(path)};
}

LineMap line_map(const EnergyLine& line, const QuadratureConfig& quad)
{
    LineMap m;
    m.center = line.closest(0.0);
    const double dist = std::abs(line.energy(m.center));
    m.scale = std::max(dist, 0.25 * quad.x_cutoff) / std::abs(line.direction);
    return m;
}

double line_max_offset(const EnergyLine& line, const LineMap& map, const QuadratureConfig& quad)
{
    const double off = (quad.energy_cap - std::abs(line.energy(map.center))) / std::abs(line.direction);
    if (!(off > 10.0 * map.scale)) {
        throw ConfigError("quadrature: energy_cap too small for this path");
    }
    return off;
}

Eigen::MatrixXcd line_integral_direct(const EnergyLine& line, cplx weight, double t, double k, double b, int nmax,
                                      const QuadratureConfig& quad, const CfConfig& cfg)
{
    const int d = nmax + 1;
    const int D = d * d;
    VectorIntegrand f = [&](double s, Eigen::Ref<VectorXc> out) {
        flatten_into(green2d_square(Sign::plus, t, line.at(s), nmax, k, b, quad, cfg), out);
    };
    const LineMap map = line_map(line, quad);
    const IntegrationResult r =
        integrate_line_symmetric_capped(f, map, D * D, outer_settings(quad), line_max_offset(line, map, quad));
    if (!r.converged) {
        throw ConvergenceError("line integral did not converge (error " + std::to_string(r.error) + ")");
    }
    return unflatten(r.value * (weight / (2.0 * pi * I)), D);
}

Eigen::MatrixXcd contour_integral_block(const PathSpec& path, double t, int nmax, double k, double b,
                                        const QuadratureConfig& quad, const CfConfig& cfg)
{
    return line_integral_direct(path_line(path), path_measure(path), t, k, b, nmax, quad, cfg);
}

cplx contour_integral_v(const PathSpec& path, double t, IndexPair row, IndexPair col, double k, double b,
                        const QuadratureConfig& quad, const CfConfig& cfg)
{
    if (row.first < 0 || row.second < 0 || col.first < 0 || col.second < 0) {
        throw DomainError("contour_integral_v: negative index");
    }
    const int nmax = std::max({row.first, row.second, col.first, col.second});
    const int d = nmax + 1;
    const Eigen::MatrixXcd v = contour_integral_block(path, t, nmax, k, b, quad, cfg);
    return v(row.first * d + row.second, col.first * d + col.second);
}

// ---------------------------------------------------------------------------

GreenLine::GreenLine(EnergyLine line, double t, double k, double b, int nmax, const QuadratureConfig& quad,
                     const CfConfig& cfg)
    : line_(line), t_(t), dim_((nmax + 1) * (nmax + 1))
{
    quad.validate();
    map_ = line_map(line_, quad);
    const double dist = map_.scale * std::abs(line_.direction);
    e_ref_ = line_.energy(map_.center) + I * line_.direction / std::abs(line_.direction) * dist;
    ucap_ = map_.u_of(line_max_offset(line_, map_, quad));
    weights_ = chebyshev_weights(order_);
    cheb_unit_ = chebyshev_points(order_, -1.0, 1.0);

    const int D2 = dim_ * dim_;
    auto sample = [&](double u, Eigen::Ref<VectorXc> out) {
        const double s = map_.s(u);
        const SheetedEnergy E = line_.at(s);
        flatten_into(green2d_square(Sign::plus, t_, E, nmax, k, b, quad, cfg), out);
        out *= (E.value - e_ref_);
    };

    std::vector<std::pair<double, double>> pending;
    constexpr int initial = 8;
    for (int j = 0; j < initial; ++j) {
        pending.emplace_back(-ucap_ + 2.0 * ucap_ * j / initial, -ucap_ + 2.0 * ucap_ * (j + 1) / initial);
    }
    double scale = 0.0;
    constexpr int max_panels = 2048;
    const bool par = quad.execution == Execution::parallel;
    while (!pending.empty()) {
        const int np = static_cast<int>(pending.size());
        std::vector<Panel> fresh(np);
        for (int i = 0; i < np; ++i) {
            fresh[i].a = pending[i].first;
            fresh[i].b = pending[i].second;
            fresh[i].values.resize(D2, order_);
        }
        std::exception_ptr failure;
        const int total = np * order_;
#pragma omp parallel for schedule(dynamic) if (par)
        for (int idx = 0; idx < total; ++idx) {
            try {
                Panel& p = fresh[idx / order_];
                const int j = idx % order_;
                const double u = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * cheb_unit_[j];
                sample(u, p.values.col(j));
            }
            catch (...) {
#pragma omp critical(pgreen_greenline_failure)
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
        samples_ += total;
        for (const Panel& p : fresh) {
            scale = std::max(scale, p.values.cwiseAbs().maxCoeff());
        }
        pending.clear();
        for (Panel& p : fresh) {
            // trailing Chebyshev coefficients measure the resolution of the panel
            double tail = 0.0;
            for (int m = order_ - 3; m < order_; ++m) {
                VectorXc c = VectorXc::Zero(D2);
                for (int j = 0; j < order_; ++j) {
                    const double th = pi * (2.0 * (order_ - 1 - j) + 1.0) / (2.0 * order_);
                    c += std::cos(m * th) * p.values.col(j);
                }
                tail = std::max(tail, (2.0 / order_) * c.cwiseAbs().maxCoeff());
            }
            if (tail <= quad.interp_tol * scale || p.b - p.a < 1e-12) {
                panels_.push_back(std::move(p));
            }
            else {
                const double mid = 0.5 * (p.a + p.b);
                pending.emplace_back(p.a, mid);
                pending.emplace_back(mid, p.b);
            }
        }
        if (static_cast<int>(panels_.size() + pending.size()) > max_panels) {
            throw ConvergenceError("GreenLine: interpolant needs more than 2048 panels");
        }
    }
    std::sort(panels_.begin(), panels_.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
}

int GreenLine::locate(double u) const
{
    const auto it = std::upper_bound(panels_.begin(), panels_.end(), u,
                                     [](double v, const Panel& p) { return v < p.a; });
    const int idx = static_cast<int>(it - panels_.begin()) - 1;
    return std::clamp(idx, 0, static_cast<int>(panels_.size()) - 1);
}

void GreenLine::eval_u(double u, Eigen::Ref<VectorXc> out) const
{
    if (!(std::abs(u) < 1.0)) {
        out.setZero();
        return;
    }
    const Panel& p = panels_[locate(u)];
    const double x = (2.0 * u - p.a - p.b) / (p.b - p.a);
    double den = 0.0;
    out.setZero();
    for (int j = 0; j < order_; ++j) {
        const double diff = x - cheb_unit_[j];
        if (diff == 0.0) {
            out = p.values.col(j);
            den = 1.0;
            break;
        }
        const double c = weights_[j] / diff;
        den += c;
        out += c * p.values.col(j);
    }
    const cplx E = line_.energy(map_.s(u));
    out /= den * (E - e_ref_);
}

void GreenLine::eval(double s, Eigen::Ref<VectorXc> out) const { eval_u(map_.u_of(s - map_.center), out); }

Eigen::MatrixXcd GreenLine::block(double s) const
{
    VectorXc v(dim_ * dim_);
    eval(s, v);
    return unflatten(v, dim_);
}

// ---------------------------------------------------------------------------

std::vector<TracePoint> integrand_trace(const PathSpec& path, double t, const std::vector<double>& samples, double k,
                                        double b, const QuadratureConfig& quad, const CfConfig& cfg)
{
    const EnergyLine line = path_line(path);
    const cplx w = path_measure(path) / (2.0 * pi * I);
    std::vector<TracePoint> out(samples.size());
    std::exception_ptr failure;
    const bool par = quad.execution == Execution::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
        try {
            const SheetedEnergy E = line.at(samples[i]);
            out[i].s = samples[i];
            out[i].sheet = E.sheet;
            out[i].value = w * green2d_square(Sign::plus, t, E, 0, k, b, quad, cfg)(0, 0);
        }
        catch (...) {
#pragma omp critical(pgreen_trace_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

std::string format_sci17(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace)
{
    os << "s,Re,Im,sheet\n";
    for (const TracePoint& p : trace) {
        os << format_sci17(p.s) << ',' << format_sci17(p.value.real()) << ',' << format_sci17(p.value.imag()) << ','
           << to_string(p.sheet) << '\n';
    }
}

} // namespace pgreen
