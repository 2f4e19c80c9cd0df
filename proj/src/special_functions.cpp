#include "pgreen/special_functions.hpp"

#include "pgreen/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace pgreen {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<double, 10> stirling_coeffs = {
    1.0 / 12.0,        -1.0 / 360.0,     1.0 / 1260.0,  -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0,  -3617.0 / 122400.0,
    43867.0 / 244188.0, -174611.0 / 125400.0};

// B_{2k} / (2k), k = 1..10
constexpr std::array<double, 10> digamma_coeffs = {
    1.0 / 12.0,     -1.0 / 120.0,     1.0 / 252.0,      -1.0 / 240.0,       1.0 / 132.0,
    -691.0 / 32760.0, 1.0 / 12.0,    -3617.0 / 8160.0, 43867.0 / 14364.0, -174611.0 / 6600.0};

constexpr double asymptotic_radius = 15.0;

bool is_nonpositive_integer(cplx z, int* n = nullptr)
{
    if (z.imag() != 0.0 || z.real() > 0.0) {
        return false;
    }
    const double r = std::round(z.real());
    if (r != z.real()) {
        return false;
    }
    if (n != nullptr) {
        *n = static_cast<int>(-r);
    }
    return true;
}

bool is_positive_integer(cplx z, int* n = nullptr)
{
    if (z.imag() != 0.0 || z.real() < 1.0) {
        return false;
    }
    const double r = std::round(z.real());
    if (r != z.real() || r > 1e6) {
        return false;
    }
    if (n != nullptr) {
        *n = static_cast<int>(r);
    }
    return true;
}

bool is_integer(cplx z, int* n)
{
    if (z.imag() != 0.0) {
        return false;
    }
    const double r = std::round(z.real());
    if (std::abs(z.real() - r) > 1e-14 * std::max(1.0, std::abs(r)) || std::abs(r) > 1e6) {
        return false;
    }
    *n = static_cast<int>(r);
    return true;
}

cplx terminating_sum(int n, cplx b, cplx c, cplx z)
{
    // 2F1(-n, b; c; z)
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int j = 0; j < n; ++j) {
        term *= (static_cast<double>(j - n) * (b + static_cast<double>(j))) /
                ((c + static_cast<double>(j)) * static_cast<double>(j + 1)) * z;
        sum += term;
    }
    return sum;
}

// F(a'+1, b; c+1; z) / F(a', b; c; z) by Gauss's continued fraction, modified Lentz.
// Returns false if the fraction stalls or hits max_depth.
bool gauss_ratio(cplx ap, cplx b, cplx c, cplx z, const CfConfig& cfg, cplx& ratio)
{
    double f_tiny = cfg.tiny;
    cplx f = 1.0;
    cplx C = f;
    cplx D = 0.0;
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;
    const int warmup = 50 + static_cast<int>(2.0 * (std::abs(ap) + std::abs(b) + std::abs(c)));
    for (int j = 1; j <= cfg.max_depth; ++j) {
        cplx k;
        if (j % 2 == 1) {
            const double i = (j - 1) / 2;
            k = (ap - c - i) * (b + i) / ((c + 2.0 * i) * (c + 2.0 * i + 1.0));
        }
        else {
            const double i = (j - 2) / 2;
            k = (b - c - i - 1.0) * (ap + i + 1.0) / ((c + 2.0 * i + 1.0) * (c + 2.0 * i + 2.0));
        }
        const cplx aj = k * z;
        D = 1.0 + aj * D;
        if (std::abs(D) < f_tiny) {
            D = f_tiny;
        }
        C = 1.0 + aj / C;
        if (std::abs(C) < f_tiny) {
            C = f_tiny;
        }
        D = 1.0 / D;
        const cplx delta = C * D;
        f *= delta;
        const double change = std::abs(delta - 1.0);
        if (!std::isfinite(change)) {
            return false;
        }
        if (change < cfg.rel_tol) {
            ratio = 1.0 / f;
            return true;
        }
        if (change < best) {
            best = change;
            since_best = 0;
        }
        else if (j > warmup && ++since_best >= 20) {
            return false;
        }
    }
    return false;
}

// 2F1(m, b; c; z) for positive integer m as a telescoping product of Gauss ratios.
bool gauss_cf_chain(int m, cplx b, cplx c, cplx z, const CfConfig& cfg, cplx& value)
{
    cplx prod = 1.0;
    for (int j = 0; j < m; ++j) {
        cplx r;
        if (!gauss_ratio(static_cast<double>(j), b, c - static_cast<double>(m - j), z, cfg, r)) {
            return false;
        }
        prod *= r;
    }
    value = prod;
    return true;
}

// 1/Gamma(x), zero at the poles.
cplx rgamma(cplx x)
{
    if (is_nonpositive_integer(x)) {
        return 0.0;
    }
    return std::exp(-log_gamma(x));
}

// Expansion about z = 1 when c - a - b = m is a non-negative integer
// (logarithmic case).
cplx one_minus_z_log_case(cplx a, cplx b, int m, cplx z, const CfConfig& cfg)
{
    const cplx c = a + b + static_cast<double>(m);
    const cplx w = 1.0 - z;
    const cplx logw = std::log(w);
    cplx finite = 0.0;
    if (m > 0) {
        // Gamma(m) Gamma(c) / (Gamma(a+m) Gamma(b+m)) sum_{n<m} (a)_n (b)_n / (n! (1-m)_n) w^n
        const cplx pref = std::exp(log_gamma(static_cast<double>(m)) + log_gamma(c)) *
                          rgamma(a + static_cast<double>(m)) * rgamma(b + static_cast<double>(m));
        cplx term = 1.0;
        cplx sum = 1.0;
        for (int n = 0; n < m - 1; ++n) {
            term *= (a + static_cast<double>(n)) * (b + static_cast<double>(n)) /
                    (static_cast<double>(n + 1) * static_cast<double>(n + 1 - m)) * w;
            sum += term;
        }
        finite = pref * sum;
    }
    // -(z-1)^m Gamma(c)/(Gamma(a)Gamma(b)) sum_n (a+m)_n (b+m)_n / (n! (n+m)!) w^n
    //   [ln w - psi(n+1) - psi(n+m+1) + psi(a+m+n) + psi(b+m+n)]
    const cplx am = a + static_cast<double>(m);
    const cplx bm = b + static_cast<double>(m);
    cplx psi_n1 = digamma(1.0);
    cplx psi_nm1 = digamma(static_cast<double>(m + 1));
    cplx psi_a = digamma(am);
    cplx psi_b = digamma(bm);
    cplx coef = 1.0 / std::exp(log_gamma(static_cast<double>(m + 1)));
    cplx sum = 0.0;
    int n = 0;
    for (; n < cfg.max_depth; ++n) {
        const cplx t = coef * (logw - psi_n1 - psi_nm1 + psi_a + psi_b);
        sum += t;
        if (n > 2 && std::abs(t) <= cfg.rel_tol * std::abs(sum) && std::abs(coef) <= cfg.rel_tol * std::abs(sum)) {
            break;
        }
        const double nd = n;
        coef *= (am + nd) * (bm + nd) / ((nd + 1.0) * (nd + 1.0 + m)) * w;
        psi_n1 += 1.0 / (nd + 1.0);
        psi_nm1 += 1.0 / (nd + 1.0 + m);
        psi_a += 1.0 / (am + nd);
        psi_b += 1.0 / (bm + nd);
    }
    if (n == cfg.max_depth) {
        throw ConvergenceError("hyp2f1: logarithmic expansion about z=1 did not converge");
    }
    const cplx pref = cplx(m % 2 == 0 ? 1.0 : -1.0) * std::exp(log_gamma(c)) * rgamma(a) * rgamma(b);
    // (z-1)^m = (-1)^m w^m
    return finite - pref * std::pow(w, m) * sum;
}

cplx one_minus_z_generic(cplx a, cplx b, cplx c, cplx z, const CfConfig& cfg)
{
    const cplx w = 1.0 - z;
    const cplx s = c - a - b;
    const cplx t1 = std::exp(log_gamma(c) + log_gamma(s)) * rgamma(c - a) * rgamma(c - b);
    const cplx t2 = std::exp(log_gamma(c) + log_gamma(-s)) * rgamma(a) * rgamma(b);
    cplx out = 0.0;
    if (t1 != 0.0) {
        out += t1 * hyp2f1_series(a, b, 1.0 - s, w, cfg);
    }
    if (t2 != 0.0) {
        out += t2 * std::pow(w, s) * hyp2f1_series(c - a, c - b, s + 1.0, w, cfg);
    }
    return out;
}

// Series-based evaluation choosing the transformation with the smallest argument.
cplx transformed_series(cplx a, cplx b, cplx c, cplx z, const CfConfig& cfg)
{
    const double r_direct = std::abs(z);
    const double r_pfaff = std::abs(z / (z - 1.0));
    const double r_one = std::abs(1.0 - z);
    const double best = std::min({r_direct, r_pfaff, r_one});
    if (best > 0.9) {
        throw DomainError("hyp2f1: no convergent transformation for z = " + std::to_string(z.real()) +
                          (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i");
    }
    if (best == r_direct) {
        return hyp2f1_series(a, b, c, z, cfg);
    }
    if (best == r_pfaff) {
        // Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1)); choose the variant with a terminating
        // or smaller parameter when available.
        return std::pow(1.0 - z, -a) * hyp2f1_series(a, c - b, c, z / (z - 1.0), cfg);
    }
    int m = 0;
    if (is_integer(c - a - b, &m)) {
        if (m >= 0) {
            return one_minus_z_log_case(a, b, m, z, cfg);
        }
        // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a, c-b; c; z) turns m into -m.
        return std::pow(1.0 - z, c - a - b) * one_minus_z_log_case(c - a, c - b, -m, z, cfg);
    }
    return one_minus_z_generic(a, b, c, z, cfg);
}

} // namespace

void CfConfig::validate() const
{
    if (max_depth < 50) {
        throw ConfigError("CfConfig.max_depth must be >= 50");
    }
    if (!(tiny > 0.0)) {
        throw ConfigError("CfConfig.tiny must be positive");
    }
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw ConfigError("CfConfig.rel_tol must lie in (0, 1)");
    }
}

cplx log_gamma(cplx z)
{
    if (is_nonpositive_integer(z)) {
        throw PoleError("log_gamma: pole at non-positive integer " + std::to_string(z.real()));
    }
    cplx shift = 0.0;
    if (std::abs(z) < asymptotic_radius || z.real() < 0.0) {
        // Recurrence Gamma(z) = Gamma(z+n) / (z (z+1) ... (z+n-1)); summing the
        // principal logs one factor at a time keeps the analytic branch.
        const int n = static_cast<int>(std::ceil(asymptotic_radius - z.real()));
        for (int j = 0; j < n; ++j) {
            shift += std::log(z + static_cast<double>(j));
        }
        z += static_cast<double>(n);
    }
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx p = inv;
    for (double coeff : stirling_coeffs) {
        series += coeff * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift;
}

cplx digamma(cplx z)
{
    if (is_nonpositive_integer(z)) {
        throw PoleError("digamma: pole at non-positive integer");
    }
    cplx shift = 0.0;
    if (std::abs(z) < asymptotic_radius || z.real() < 0.0) {
        const int n = static_cast<int>(std::ceil(asymptotic_radius - z.real()));
        for (int j = 0; j < n; ++j) {
            shift += 1.0 / (z + static_cast<double>(j));
        }
        z += static_cast<double>(n);
    }
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx p = inv2;
    for (double coeff : digamma_coeffs) {
        series += coeff * p;
        p *= inv2;
    }
    return std::log(z) - 0.5 * inv - series - shift;
}

cplx pochhammer(cplx x, int n)
{
    if (n <= 20) {
        cplx prod = 1.0;
        for (int j = 0; j < n; ++j) {
            prod *= x + static_cast<double>(j);
        }
        return prod;
    }
    int m = 0;
    if (is_nonpositive_integer(x, &m) || is_nonpositive_integer(x + static_cast<double>(n))) {
        cplx prod = 1.0;
        for (int j = 0; j < n; ++j) {
            prod *= x + static_cast<double>(j);
        }
        return prod;
    }
    return std::exp(log_gamma(x + static_cast<double>(n)) - log_gamma(x));
}

cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z, const CfConfig& cfg)
{
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int j = 0; j < cfg.max_depth; ++j) {
        const double jd = j;
        term *= (a + jd) * (b + jd) / ((c + jd) * (jd + 1.0)) * z;
        sum += term;
        if (term == 0.0) {
            return sum;
        }
        if (std::abs(term) <= 0.25 * cfg.rel_tol * std::abs(sum) && j > 2) {
            return sum;
        }
    }
    throw ConvergenceError("hyp2f1: power series did not converge");
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const CfConfig& cfg)
{
    if (is_nonpositive_integer(c)) {
        throw PoleError("hyp2f1: c is a non-positive integer");
    }
    if (z == 0.0) {
        return 1.0;
    }
    int n = 0;
    if (is_nonpositive_integer(a, &n)) {
        return terminating_sum(n, b, c, z);
    }
    if (is_nonpositive_integer(b, &n)) {
        return terminating_sum(n, a, c, z);
    }
    if (std::abs(1.0 - z) < 1e-12) {
        if ((c - a - b).real() <= 0.0) {
            throw DomainError("hyp2f1: z too close to 1 with Re(c-a-b) <= 0");
        }
        return std::exp(log_gamma(c) + log_gamma(c - a - b)) * rgamma(c - a) * rgamma(c - b);
    }
    if (z.imag() == 0.0 && z.real() > 1.0) {
        throw BranchError("hyp2f1: z on the branch cut [1, inf)");
    }
    int m = 0;
    const bool a_int = is_positive_integer(a, &m);
    if (a_int || is_positive_integer(b, &m)) {
        const cplx other = a_int ? b : a;
        cplx value;
        if (gauss_cf_chain(m, other, c, z, cfg, value)) {
            return value;
        }
        return transformed_series(a, b, c, z, cfg);
    }
    return transformed_series(a, b, c, z, cfg);
}

std::vector<cplx> p_poly_all(int nmax, cplx tau, cplx zeta)
{
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(nmax) + 1);
    const cplx b = 0.5 + I * tau;
    for (int n = 0; n <= nmax; ++n) {
        // (-1)^n (1/2 - i tau)_n / n!
        cplx pref;
        if (n <= 20) {
            pref = 1.0;
            for (int j = 0; j < n; ++j) {
                pref *= -(0.5 - I * tau + static_cast<double>(j)) / static_cast<double>(j + 1);
            }
        }
        else {
            pref = (n % 2 == 0 ? 1.0 : -1.0) *
                   std::exp(log_gamma(n + 0.5 - I * tau) - log_gamma(0.5 - I * tau) -
                            std::lgamma(static_cast<double>(n) + 1.0));
        }
        out.push_back(pref * terminating_sum(n, b, b - static_cast<double>(n), zeta));
    }
    return out;
}

cplx p_poly(int n, cplx tau, cplx zeta)
{
    if (n < 0) {
        throw DomainError("p_poly: negative order");
    }
    return p_poly_all(n, tau, zeta).back();
}

std::vector<cplx> q_func_all(Sign sign, int nmax, cplx tau, cplx zeta, const CfConfig& cfg)
{
    const double s = sign_value(sign);
    const cplx a = 0.5 + s * I * tau;
    const cplx z = sign == Sign::plus ? 1.0 / zeta : zeta;
    if (is_nonpositive_integer(a)) {
        throw PoleError("q_func: Gamma(1/2 +/- i tau) at a pole");
    }
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(nmax) + 1);
    // 2F1(n+1, a; a+n+1; z) = prod_{j=0}^{n} F(j+1, a; a+j+1; z) / F(j, a; a+j; z)
    cplx chain = 1.0;
    bool cf_ok = true;
    cplx pref = 1.0; // (-1)^n n! / (a)_{n+1}
    for (int n = 0; n <= nmax; ++n) {
        const double nd = n;
        if (n == 0) {
            pref = 1.0 / a;
        }
        else {
            pref *= -nd / (a + nd);
        }
        cplx f;
        if (cf_ok) {
            cplx r;
            if (gauss_ratio(nd, a, a + nd, z, cfg, r)) {
                chain *= r;
                f = chain;
            }
            else {
                cf_ok = false;
            }
        }
        if (!cf_ok) {
            f = hyp2f1(a, nd + 1.0, a + nd + 1.0, z, cfg);
        }
        if (n > 20) {
            // keep the prefactor accurate for large orders
            pref = (n % 2 == 0 ? 1.0 : -1.0) *
                   std::exp(std::lgamma(nd + 1.0) + log_gamma(a) - log_gamma(a + nd + 1.0));
        }
        out.push_back(pref * f);
    }
    return out;
}

cplx q_func(Sign sign, int n, cplx tau, cplx zeta, const CfConfig& cfg)
{
    if (n < 0) {
        throw DomainError("q_func: negative order");
    }
    return q_func_all(sign, n, tau, zeta, cfg).back();
}

cplx rho_weight(cplx tau, cplx zeta)
{
    const cplx mz = -zeta;
    if (mz.imag() == 0.0 && mz.real() <= 0.0) {
        throw BranchError("rho_weight: arg(-zeta) = +/-pi");
    }
    // Gamma(1/2 + i tau) Gamma(1/2 - i tau) = pi / cosh(pi tau), taken in log space.
    cplx w = pi * tau;
    if (w.real() < 0.0) {
        w = -w;
    }
    const cplx log_cosh = w + std::log(1.0 + std::exp(-2.0 * w)) - std::log(2.0);
    const cplx log_rho = std::log(pi) - log_cosh + (I * tau + 0.5) * std::log(mz) - std::log(2.0 * pi) -
                         I * (pi / 2.0);
    return std::exp(log_rho);
}

} // namespace pgreen
