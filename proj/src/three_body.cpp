#include "pgreen/three_body.hpp"

#include "pgreen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pgreen {

namespace {

constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

// Large-energy coefficient of E * G_0 and of E * [Q G].
double asymptotic_g0(double b) { return -2.0 * b; }
constexpr double asymptotic_qg = -2.0;

bool same_channel(const Channel& x, const Channel& y) { return x.k == y.k && x.t == y.t; }

// Raw integral over the line parameter (no measure, no 1/(2 pi i)).
Eigen::MatrixXcd raw_line_block(const EnergyLine& line, const Channel& ch, double b, int nmax,
                                const QuadratureConfig& quad, const CfConfig& cfg)
{
    return line_integral_direct(line, two_pi_i, ch.t, ch.k, b, nmax, quad, cfg);
}

// (Q2d V) over the labels with n, m <= 1, from a block with nmax = 2.
Eigen::MatrixXcd q_times_block(const Eigen::MatrixXcd& V, double b)
{
    const Eigen::MatrixXcd QV = q2d_matrix(b, 3) * V;
    Eigen::MatrixXcd out(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out(r, c) = QV((r / 2) * 3 + r % 2, (c / 2) * 3 + c % 2);
        }
    }
    return out;
}

AdaptiveSettings double_settings(const QuadratureConfig& quad, Execution exec)
{
    AdaptiveSettings s;
    s.rel_tol = quad.double_rel_tol;
    s.abs_tol = quad.double_abs_tol;
    s.max_evals = quad.double_max_evals;
    s.execution = exec;
    return s;
}

} // namespace

int MultiIndex::max_index() const { return std::max({n1, m1, n2, m2, n3, m3}); }

int MultiIndex::flatten(int N) const
{
    if (std::min({n1, m1, n2, m2, n3, m3}) < 0 || max_index() >= N) {
        throw DomainError("MultiIndex: index out of range");
    }
    return ((((n1 * N + m1) * N + n2) * N + m2) * N + n3) * N + m3;
}

MultiIndex MultiIndex::unflatten(int flat, int N)
{
    int total = 1;
    for (int i = 0; i < 6; ++i) {
        total *= N;
    }
    if (flat < 0 || flat >= total) {
        throw DomainError("MultiIndex: flat index out of range");
    }
    MultiIndex m;
    int* fields[6] = {&m.n1, &m.m1, &m.n2, &m.m2, &m.n3, &m.m3};
    for (int i = 5; i >= 0; --i) {
        *fields[i] = flat % N;
        flat /= N;
    }
    return m;
}

int MultiIndex::channel_index(int j, int N) const
{
    switch (j) {
    case 1:
        return n1 * N + m1;
    case 2:
        return n2 * N + m2;
    case 3:
        return n3 * N + m3;
    default:
        throw DomainError("MultiIndex: channel must be 1, 2 or 3");
    }
}

std::vector<MultiIndex> all_multi_indices(int N)
{
    int total = 1;
    for (int i = 0; i < 6; ++i) {
        total *= N;
    }
    std::vector<MultiIndex> out;
    out.reserve(total);
    for (int f = 0; f < total; ++f) {
        out.push_back(MultiIndex::unflatten(f, N));
    }
    return out;
}

ThreeBodySetup::ThreeBodySetup(const PathSpec& p, const PhysicalSystem& s, double b_) : path(p), sys(s), b(b_)
{
    path.validate();
    sys.validate();
    if (!(b > 0.0)) {
        throw ConfigError("basis: b must be positive");
    }
    if (path.kind == PathKind::C2) {
        throw DomainError("three-body integrals are defined for C1 x C1 and C3 x C3 only");
    }
    line1 = path_line(path);
    line2 = line1;
    measure = path_measure(path);
    a1 = sys.mu12() / sys.mu23();
    a2 = sys.mu12() / sys.mu13();
    const double K3 = 0.5 * sys.k12 * sys.k12 + a1 * 0.5 * sys.k23 * sys.k23 + a2 * 0.5 * sys.k13 * sys.k13;
    line3.origin = K3 - a1 * line1.origin - a2 * line2.origin;
    line3.direction = -line1.direction;
    line3.continued = line1.continued;
}

EnergySharing ThreeBodySetup::sharing(double s1, double s2) const
{
    return {line1.at(s1), line2.at(s2), line3.at(sigma(s1, s2))};
}

void check_path_pair(const PathSpec& p1, const PathSpec& p2)
{
    p1.validate();
    p2.validate();
    if (p1.kind != p2.kind) {
        throw DomainError("double integrals need both contours of the same kind");
    }
    if (p1.kind == PathKind::C2) {
        throw DomainError("double integrals are defined for C1 x C1 and C3 x C3 only");
    }
    if (p1.kind == PathKind::C1 && p1.y0 != p2.y0) {
        throw DomainError("C1 x C1 needs equal offsets y0");
    }
    if (p1.kind == PathKind::C3 && (p1.x0 != p2.x0 || p1.phi != p2.phi)) {
        throw DomainError("C3 x C3 needs equal rotation points and angles");
    }
}

double log_ratio_kernel(double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("log_ratio_kernel: beta must be positive");
    }
    VectorIntegrand f = [beta](double x, Eigen::Ref<VectorXc> out) {
        out(0) = x == 0.0 ? 2.0 * beta : std::log(std::abs((1.0 + beta * x) / (1.0 - beta * x))) / x;
    };
    std::vector<double> breaks{0.0, 1.0};
    if (beta > 1.0) {
        breaks = {0.0, 1.0 / beta, 1.0};
    }
    AdaptiveSettings s;
    s.rel_tol = 1e-13;
    s.abs_tol = 1e-15;
    s.max_evals = 200000;
    s.execution = Execution::serial;
    const IntegrationResult r = integrate_adaptive(f, breaks, 1, s);
    if (!r.converged) {
        throw ConvergenceError("log_ratio_kernel did not converge");
    }
    return 2.0 * r.value(0).real();
}

WIntegrals w_integrals(const PathSpec& path1, const PathSpec& path2, const PhysicalSystem& sys, double b,
                       const QuadratureConfig& quad, const CfConfig& cfg)
{
    check_path_pair(path1, path2);
    const ThreeBodySetup st(path1, sys, b);
    const Channel c1 = sys.channel(1);
    const Channel c2 = sys.channel(2);
    const Channel c3 = sys.channel(3);
    WIntegrals w;
    w.V1 = raw_line_block(st.line1, c1, b, 0, quad, cfg)(0, 0);
    w.V2 = same_channel(c1, c2) ? w.V1 : raw_line_block(st.line2, c2, b, 0, quad, cfg)(0, 0);
    w.J3 = raw_line_block(st.line3, c3, b, 0, quad, cfg)(0, 0);
    const cplx e = st.line1.direction;
    const cplx d3 = st.line3.direction;
    const double A = asymptotic_g0(b);
    const cplx m2 = st.measure * st.measure / (two_pi_i * two_pi_i);
    w.square_term1 = st.a1 * m2 * (A / e) * (A / (d3 * st.a1)) * log_ratio_kernel(st.a2 / st.a1);
    w.square_term2 = st.a2 * m2 * (A / e) * (A / (d3 * st.a2)) * log_ratio_kernel(st.a1 / st.a2);
    w.w1 = m2 * w.V2 * w.J3 + w.square_term1;
    w.w2 = m2 * w.V1 * w.J3 + w.square_term2;
    w.w3 = m2 * w.V1 * w.V2;
    return w;
}

Aleph normalization_aleph(cplx w1, cplx w2, cplx w3, double threshold)
{
    if (std::abs(w3) < 1e-12) {
        throw DegenerateError("normalization: w3 is zero");
    }
    Aleph a;
    a.alpha = w1 / w3;
    a.beta = w2 / w3;
    a.denominator = 1.0 + a.alpha + a.beta;
    a.degenerate = std::abs(a.denominator) < threshold;
    if (!a.degenerate) {
        a.value = 4.0 / a.denominator;
    }
    return a;
}

ThreeBodyGreen::ThreeBodyGreen(const ThreeBodySetup& setup, int nmax, const QuadratureConfig& quad,
                               const CfConfig& cfg)
    : setup_(setup), nmax_(nmax)
{
    if (nmax < 0) {
        throw DomainError("ThreeBodyGreen: negative order");
    }
    const Channel c1 = setup_.sys.channel(1);
    const Channel c2 = setup_.sys.channel(2);
    const Channel c3 = setup_.sys.channel(3);
    g1_ = std::make_unique<GreenLine>(setup_.line1, c1.t, c1.k, setup_.b, nmax, quad, cfg);
    if (!same_channel(c1, c2)) {
        g2_ = std::make_unique<GreenLine>(setup_.line2, c2.t, c2.k, setup_.b, nmax, quad, cfg);
    }
    g3_ = std::make_unique<GreenLine>(setup_.line3, c3.t, c3.k, setup_.b, nmax, quad, cfg);
}

const GreenLine& ThreeBodyGreen::line(int j) const
{
    switch (j) {
    case 1:
        return *g1_;
    case 2:
        return g2_ ? *g2_ : *g1_;
    case 3:
        return *g3_;
    default:
        throw DomainError("ThreeBodyGreen: channel must be 1, 2 or 3");
    }
}

VectorXc ThreeBodyGreen::double_integral(const Kernel& kernel, int dim, const QuadratureConfig& quad,
                                         cplx factor) const
{
    const GreenLine& L1 = line(1);
    const GreenLine& L2 = line(2);
    const GreenLine& L3 = line(3);
    const int D2 = L1.dim() * L1.dim();
    const LineMap& m1 = L1.map();
    const LineMap& m2 = L2.map();
    const LineMap& m3 = L3.map();
    const double c3 = m3.center;
    constexpr double edge = 1e-14;

    VectorIntegrand outer = [&](double u2, Eigen::Ref<VectorXc> out) {
        out.setZero();
        if (1.0 - std::abs(u2) < edge) {
            return;
        }
        const double s2 = m2.s(u2);
        const double ds2 = m2.ds(u2);
        VectorXc g2(D2);
        L2.eval_u(u2, g2);
        // The inner integrand peaks near s1 = c1 (channel 1) and near the s1
        // where sigma is closest to c3 (channel 3). When the peaks are far
        // apart the far one is integrated in the channel-3 map variable.
        const double s1star = (c3 - setup_.a2 * s2) / setup_.a1;
        const double width = m1.scale + m3.scale / setup_.a1;
        const bool split = std::abs(s1star - m1.center) > 4.0 * width;
        double ua0 = -1.0;
        double ua1 = 1.0;
        double ub0 = 0.0;
        double ub1 = 0.0;
        if (split) {
            const double mid = 0.5 * (s1star + m1.center);
            const double umid = m1.u_of(mid - m1.center);
            const double vmid = m3.u_of(setup_.sigma(mid, s2) - c3);
            if (s1star > m1.center) {
                ua1 = umid;
                ub0 = vmid;
                ub1 = 1.0;
            }
            else {
                ua0 = umid;
                ub0 = -1.0;
                ub1 = vmid;
            }
        }
        VectorXc g1(D2);
        VectorXc g3(D2);
        VectorIntegrand inner = [&, g1, g3](double x, Eigen::Ref<VectorXc> o) mutable {
            o.setZero();
            if (x <= 1.0) {
                const double u1 = ua0 + x * (ua1 - ua0);
                if (1.0 - std::abs(u1) < edge) {
                    return;
                }
                L1.eval_u(u1, g1);
                L3.eval(setup_.sigma(m1.s(u1), s2), g3);
                kernel(g1, g2, g3, o);
                o *= m1.ds(u1) * (ua1 - ua0);
            }
            else {
                const double u3 = ub0 + (x - 1.0) * (ub1 - ub0);
                if (1.0 - std::abs(u3) < edge) {
                    return;
                }
                const double sig = m3.s(u3);
                L1.eval((sig - setup_.a2 * s2) / setup_.a1, g1);
                L3.eval_u(u3, g3);
                kernel(g1, g2, g3, o);
                o *= m3.ds(u3) * (ub1 - ub0) / setup_.a1;
            }
        };
        std::vector<double> breaks{0.0, 1.0};
        auto add_break = [&](double x) {
            if (x > 1e-9 && x < 2.0 - 1e-9 && std::abs(x - 1.0) > 1e-9) {
                breaks.push_back(x);
            }
        };
        add_break((0.0 - ua0) / (ua1 - ua0));
        if (split) {
            breaks.push_back(2.0);
            add_break(1.0 + (0.0 - ub0) / (ub1 - ub0));
        }
        else {
            add_break((m1.u_of(s1star - m1.center) - ua0) / (ua1 - ua0));
        }
        std::sort(breaks.begin(), breaks.end());
        AdaptiveSettings in = double_settings(quad, Execution::serial);
        in.rel_tol *= 1e-2;
        in.abs_tol *= 1e-2;
        const IntegrationResult r = integrate_adaptive(inner, breaks, dim, in);
        if (!r.converged) {
            throw ConvergenceError("double integral: inner quadrature did not converge at s2 = " +
                                   std::to_string(s2));
        }
        out = r.value * ds2;
    };
    const IntegrationResult r =
        integrate_adaptive(outer, std::vector<double>{-1.0, 0.0, 1.0}, dim, double_settings(quad, quad.execution));
    if (!r.converged) {
        throw ConvergenceError("double integral: outer quadrature did not converge (error " + format_sci17(r.error) +
                               " after " + std::to_string(r.evals) + " nodes)");
    }
    last_evals_ = r.evals;
    const cplx m = setup_.measure;
    return r.value * (factor * m * m / (two_pi_i * two_pi_i));
}

Eigen::MatrixXcd green6d_block(const ThreeBodyGreen& green, const std::vector<MultiIndex>& rows,
                               const std::vector<MultiIndex>& cols, cplx aleph, const QuadratureConfig& quad)
{
    if (rows.empty() || cols.empty()) {
        throw DomainError("green6d_block: empty index list");
    }
    const int d = green.nmax() + 1;
    const int D = d * d;
    for (const auto& v : {rows, cols}) {
        for (const MultiIndex& m : v) {
            if (m.max_index() >= d || std::min({m.n1, m.m1, m.n2, m.m2, m.n3, m.m3}) < 0) {
                throw DomainError("green6d_block: index exceeds the interpolated order");
            }
        }
    }
    const int R = static_cast<int>(rows.size());
    const int C = static_cast<int>(cols.size());
    struct Pos {
        int e1, e2, e3;
    };
    std::vector<Pos> pos(R * C);
    for (int r = 0; r < R; ++r) {
        for (int c = 0; c < C; ++c) {
            pos[r * C + c] = {rows[r].channel_index(1, d) * D + cols[c].channel_index(1, d),
                              rows[r].channel_index(2, d) * D + cols[c].channel_index(2, d),
                              rows[r].channel_index(3, d) * D + cols[c].channel_index(3, d)};
        }
    }
    ThreeBodyGreen::Kernel kernel = [&](const VectorXc& g1, const VectorXc& g2, const VectorXc& g3,
                                        Eigen::Ref<VectorXc> out) {
        for (std::size_t i = 0; i < pos.size(); ++i) {
            out(static_cast<Eigen::Index>(i)) = g1(pos[i].e1) * g2(pos[i].e2) * g3(pos[i].e3);
        }
    };
    const PhysicalSystem& sys = green.setup().sys;
    const VectorXc v = green.double_integral(kernel, R * C, quad, aleph / (sys.mu23() * sys.mu13()));
    Eigen::MatrixXcd out(R, C);
    for (int r = 0; r < R; ++r) {
        for (int c = 0; c < C; ++c) {
            out(r, c) = v(r * C + c);
        }
    }
    return out;
}

Eigen::MatrixXcd green6d_block(const PathSpec& path1, const PathSpec& path2, const std::vector<MultiIndex>& rows,
                               const std::vector<MultiIndex>& cols, const PhysicalSystem& sys, double b, cplx aleph,
                               const QuadratureConfig& quad, const CfConfig& cfg)
{
    check_path_pair(path1, path2);
    int nmax = 0;
    for (const auto& v : {rows, cols}) {
        for (const MultiIndex& m : v) {
            nmax = std::max(nmax, m.max_index());
        }
    }
    const ThreeBodyGreen green(ThreeBodySetup(path1, sys, b), nmax, quad, cfg);
    return green6d_block(green, rows, cols, aleph, quad);
}

cplx scalar_element_i0(const ThreeBodyGreen& green, const QuadratureConfig& quad)
{
    ThreeBodyGreen::Kernel kernel = [](const VectorXc& g1, const VectorXc& g2, const VectorXc& g3,
                                       Eigen::Ref<VectorXc> out) { out(0) = g1(0) * g2(0) * g3(0); };
    return green.double_integral(kernel, 1, quad)(0);
}

namespace {

Eigen::SparseMatrix<cplx, Eigen::RowMajor> to_sparse(const Eigen::MatrixXcd& m)
{
    return m.sparseView(1.0, 0.0).cast<cplx>();
}

Eigen::SparseMatrix<cplx, Eigen::RowMajor> sparse_kron(const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& A,
                                                       const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& B)
{
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(A.nonZeros() * B.nonZeros()));
    for (int i = 0; i < A.outerSize(); ++i) {
        for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator a(A, i); a; ++a) {
            for (int j = 0; j < B.outerSize(); ++j) {
                for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator bb(B, j); bb; ++bb) {
                    trip.emplace_back(static_cast<int>(a.row() * B.rows() + bb.row()),
                                      static_cast<int>(a.col() * B.cols() + bb.col()), a.value() * bb.value());
                }
            }
        }
    }
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> C(A.rows() * B.rows(), A.cols() * B.cols());
    C.setFromTriplets(trip.begin(), trip.end());
    return C;
}

} // namespace

Eigen::SparseMatrix<cplx, Eigen::RowMajor> assemble_h6(const PhysicalSystem& sys, double b, int N)
{
    if (N < 1) {
        throw DomainError("assemble_h6: N must be positive");
    }
    sys.validate();
    const auto Q = to_sparse(q2d_matrix(b, N));
    const auto h1 = to_sparse(h2d_matrix(sys.channel(1), b, N));
    const auto h2 = to_sparse(h2d_matrix(sys.channel(2), b, N));
    const auto h3 = to_sparse(h2d_matrix(sys.channel(3), b, N));
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> h = sparse_kron(sparse_kron(h1, Q), Q) * (sys.mu13() * sys.mu12());
    h += sparse_kron(sparse_kron(Q, h2), Q) * (sys.mu23() * sys.mu12());
    h += sparse_kron(sparse_kron(Q, Q), h3) * (sys.mu23() * sys.mu13());
    h.prune(cplx(0.0), 0.0);
    return h;
}

ProductCheck product_check(const ThreeBodyGreen& green, int N, cplx aleph, const QuadratureConfig& quad)
{
    if (N < 2) {
        throw DomainError("product check needs N >= 2");
    }
    if (green.nmax() < N - 1) {
        throw DomainError("product check: interpolated order below N - 1");
    }
    const PhysicalSystem& sys = green.setup().sys;
    const auto h = assemble_h6(sys, green.setup().b, N);
    const int d = green.nmax() + 1;
    const int D = d * d;
    const std::vector<MultiIndex> labels = all_multi_indices(N);
    struct Term {
        cplx h;
        MultiIndex row;
    };
    std::vector<Term> terms;
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(h, 0); it; ++it) {
        terms.push_back({it.value(), labels[static_cast<std::size_t>(it.col())]});
    }
    const int C = static_cast<int>(labels.size());
    ThreeBodyGreen::Kernel kernel = [&](const VectorXc& g1, const VectorXc& g2, const VectorXc& g3,
                                        Eigen::Ref<VectorXc> out) {
        out.setZero();
        for (const Term& t : terms) {
            const int r1 = t.row.channel_index(1, d) * D;
            const int r2 = t.row.channel_index(2, d) * D;
            const int r3 = t.row.channel_index(3, d) * D;
            for (int c = 0; c < C; ++c) {
                const MultiIndex& col = labels[c];
                out(c) += t.h * g1(r1 + col.channel_index(1, d)) * g2(r2 + col.channel_index(2, d)) *
                          g3(r3 + col.channel_index(3, d));
            }
        }
    };
    ProductCheck pc;
    pc.aleph = aleph;
    pc.row = green.double_integral(kernel, C, quad, aleph / (sys.mu23() * sys.mu13()));
    pc.diag = pc.row(0);
    pc.max_offdiag = pc.row.tail(C - 1).cwiseAbs().maxCoeff();
    return pc;
}

WMatrices w_matrices(const ThreeBodySetup& st, const QuadratureConfig& quad, const CfConfig& cfg)
{
    const Channel c1 = st.sys.channel(1);
    const Channel c2 = st.sys.channel(2);
    const Channel c3 = st.sys.channel(3);
    const Eigen::MatrixXcd M1 = q_times_block(raw_line_block(st.line1, c1, st.b, 2, quad, cfg), st.b);
    const Eigen::MatrixXcd M2 =
        same_channel(c1, c2) ? M1 : q_times_block(raw_line_block(st.line2, c2, st.b, 2, quad, cfg), st.b);
    const Eigen::MatrixXcd M3 = q_times_block(raw_line_block(st.line3, c3, st.b, 2, quad, cfg), st.b);
    const cplx m2 = st.measure * st.measure / (two_pi_i * two_pi_i);
    const cplx e = st.line1.direction;
    const cplx d3 = st.line3.direction;
    const double A2 = asymptotic_qg * asymptotic_qg;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(16, 16);
    WMatrices w;
    w.W3 = m2 * kron(M1, M2);
    w.W1 = m2 * (kron(M2, M3) + (A2 / (e * d3)) * log_ratio_kernel(st.a2 / st.a1) * id);
    w.W2 = m2 * (kron(M1, M3) + (A2 / (e * d3)) * log_ratio_kernel(st.a1 / st.a2) * id);
    return w;
}

} // namespace pgreen
