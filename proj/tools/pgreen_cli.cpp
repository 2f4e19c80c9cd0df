#include "pgreen/commands.hpp"
#include "pgreen/config.hpp"
#include "pgreen/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace pgreen;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

struct Overrides {
    std::optional<double> k, b, y0, x0, phi;
    std::optional<int> N;
    bool serial = false;
    std::optional<std::string> output, format;
    std::optional<double> rel_tol, abs_tol, x_cutoff, tau_cutoff, tau_rel_tol, energy_cap, interp_tol;
    std::optional<double> double_rel_tol, double_abs_tol;
    std::optional<int> max_evals, tau_max_evals, double_max_evals;
    std::optional<double> tol_single, tol_double, tol_i0, tol_aleph, tol_degenerate, tol_product_diag,
        tol_product_offdiag, tol_orthogonality, tol_completeness, tol_dense_1d, tol_inverse_2d, tol_half_sum, tol_v12;
};

template <class T>
void set_if(const std::optional<T>& v, T& target)
{
    if (v) {
        target = *v;
    }
}

RunConfig resolve(const std::string& config_path, const Overrides& o)
{
    RunConfig c = config_path.empty() ? RunConfig{} : RunConfig::load_file(config_path);
    if (o.k) {
        c.sys.k12 = c.sys.k13 = c.sys.k23 = *o.k;
    }
    set_if(o.b, c.basis.b);
    set_if(o.N, c.basis.N);
    set_if(o.y0, c.paths.y0);
    if (o.x0) {
        c.paths.x0 = *o.x0;
    }
    set_if(o.phi, c.paths.phi);
    if (o.serial) {
        c.quad.execution = Execution::serial;
    }
    set_if(o.output, c.output.path);
    set_if(o.format, c.output.format);
    set_if(o.rel_tol, c.quad.rel_tol);
    set_if(o.abs_tol, c.quad.abs_tol);
    set_if(o.max_evals, c.quad.max_evals);
    set_if(o.tau_max_evals, c.quad.tau_max_evals);
    set_if(o.x_cutoff, c.quad.x_cutoff);
    set_if(o.tau_cutoff, c.quad.tau_cutoff);
    set_if(o.tau_rel_tol, c.quad.tau_rel_tol);
    set_if(o.energy_cap, c.quad.energy_cap);
    set_if(o.interp_tol, c.quad.interp_tol);
    set_if(o.double_rel_tol, c.quad.double_rel_tol);
    set_if(o.double_abs_tol, c.quad.double_abs_tol);
    set_if(o.double_max_evals, c.quad.double_max_evals);
    set_if(o.tol_single, c.tol.single);
    set_if(o.tol_double, c.tol.double_integral);
    set_if(o.tol_i0, c.tol.i0);
    set_if(o.tol_aleph, c.tol.aleph);
    set_if(o.tol_degenerate, c.tol.degenerate);
    set_if(o.tol_product_diag, c.tol.product_diag);
    set_if(o.tol_product_offdiag, c.tol.product_offdiag);
    set_if(o.tol_orthogonality, c.tol.orthogonality);
    set_if(o.tol_completeness, c.tol.completeness);
    set_if(o.tol_dense_1d, c.tol.dense_1d);
    set_if(o.tol_inverse_2d, c.tol.inverse_2d);
    set_if(o.tol_half_sum, c.tol.half_sum);
    set_if(o.tol_v12, c.tol.v12);
    c.validate();
    return c;
}

IndexPair parse_pair(const std::string& s, const std::string& name)
{
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) {
            throw std::invalid_argument(s);
        }
        std::size_t p1 = 0;
        std::size_t p2 = 0;
        const int a = std::stoi(s.substr(0, comma), &p1);
        const int b = std::stoi(s.substr(comma + 1), &p2);
        if (p1 != comma || p2 != s.size() - comma - 1) {
            throw std::invalid_argument(s);
        }
        return {a, b};
    } catch (const std::logic_error&) {
        throw ConfigError(name + ": expected two integers 'n,m', got '" + s + "'");
    }
}

/// Writes through `fn` to the configured destination.
template <class F>
void emit(const RunConfig& c, F&& fn)
{
    if (c.output.path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(c.output.path, std::ios::binary);
    if (!out) {
        throw ConfigError("output.path: cannot open '" + c.output.path + "' for writing");
    }
    fn(out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parabolic Sturmian Green functions of the three-body Coulomb problem"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    bool quiet = false;
    Overrides o;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_flag("--quiet", quiet, "Suppress progress output on stderr");
    app.add_option("--k", o.k, "Common channel momentum k12 = k13 = k23");
    app.add_option("--b", o.b, "Sturmian scaling parameter");
    app.add_option("--N", o.N, "Basis functions per coordinate");
    app.add_option("--y0", o.y0, "Offset of C1 and C2");
    app.add_option("--x0", o.x0, "Rotation point of C3");
    app.add_option("--phi", o.phi, "Rotation angle of C3");
    app.add_flag("--serial", o.serial, "Evaluate quadrature nodes serially");
    app.add_option("--output", o.output, "Output file, '-' for stdout");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

    auto* q = app.add_option_group("quadrature");
    q->add_option("--rel-tol", o.rel_tol, "Relative tolerance of energy-line quadratures");
    q->add_option("--abs-tol", o.abs_tol, "Absolute tolerance of energy-line quadratures");
    q->add_option("--max-evals", o.max_evals, "Evaluation budget of each energy-line quadrature");
    q->add_option("--tau-max-evals", o.tau_max_evals, "Evaluation budget of each tau convolution");
    q->add_option("--x-cutoff", o.x_cutoff, "Length scale of the energy-line map");
    q->add_option("--tau-cutoff", o.tau_cutoff, "Truncation |tau| <= T of rho-weighted tau integrals");
    q->add_option("--tau-rel-tol", o.tau_rel_tol, "Relative tolerance of the tau convolution");
    q->add_option("--energy-cap", o.energy_cap, "Largest |E| sampled; beyond it integrands are extrapolated");
    q->add_option("--interp-tol", o.interp_tol, "Relative accuracy of the Green-line interpolants");
    q->add_option("--double-rel-tol", o.double_rel_tol, "Relative tolerance of the double energy integrals");
    q->add_option("--double-abs-tol", o.double_abs_tol, "Absolute tolerance of the double energy integrals");
    q->add_option("--double-max-evals", o.double_max_evals, "Evaluation budget of each double-integral quadrature");

    auto* t = app.add_option_group("tolerances");
    t->add_option("--tol-single", o.tol_single, "Single contour integrals v");
    t->add_option("--tol-double", o.tol_double, "Double integrals w1, w2, w3");
    t->add_option("--tol-i0", o.tol_i0, "Bound on |I0| on C1");
    t->add_option("--tol-aleph", o.tol_aleph, "Normalization constant on C3");
    t->add_option("--tol-degenerate", o.tol_degenerate, "|1 + alpha + beta| below this flags a degenerate pair");
    t->add_option("--tol-product-diag", o.tol_product_diag, "[hG]_00 against 1");
    t->add_option("--tol-product-offdiag", o.tol_product_offdiag, "Bound on the off-diagonal [hG] entries");
    t->add_option("--tol-orthogonality", o.tol_orthogonality, "Orthogonality suite");
    t->add_option("--tol-completeness", o.tol_completeness, "Completeness suite");
    t->add_option("--tol-dense-1d", o.tol_dense_1d, "Closed-form versus truncated 1D inverse");
    t->add_option("--tol-inverse-2d", o.tol_inverse_2d, "2D block times the truncated operator");
    t->add_option("--tol-half-sum", o.tol_half_sum, "C3 blocks against the C1/C2 half sum");
    t->add_option("--tol-v12", o.tol_v12, "Channel-3 single integral identity");

    auto* table1 = app.add_subcommand("table1", "Benchmark table of single and double contour integrals");

    auto* verify = app.add_subcommand("verify", "Property suites");
    std::vector<std::string> suites;
    verify->add_option("--suite", suites, "Run only these suites (repeatable)")
        ->check(CLI::IsMember(verify_suite_names()));

    auto* trace = app.add_subcommand("trace", "Integrand of the single contour integral as CSV");
    std::string trace_path = "c1";
    TraceOptions topt;
    trace->add_option("--path", trace_path, "Contour")->check(CLI::IsMember({"c1", "c2", "c3"}));
    trace->add_option("--trace-y0", topt.y0, "Offset of the traced C1 or C2 (default paths.y0)");
    trace->add_option("--t", topt.t, "Sommerfeld parameter (default t23)");
    trace->add_option("--smin", topt.s_min, "First sample");
    trace->add_option("--smax", topt.s_max, "Last sample");
    trace->add_option("--samples", topt.samples, "Number of samples (0 gives a header-only CSV)");

    auto* green2d = app.add_subcommand("green2d", "Single element of the two-dimensional Green matrix");
    Green2dQuery gq;
    std::string sign = "+";
    std::string sheet = "physical";
    std::string row = "0,0";
    std::string col = "0,0";
    double re = gq.energy.real();
    double im = gq.energy.imag();
    green2d->add_option("--sign", sign, "Boundary condition")->check(CLI::IsMember({"+", "-", "plus", "minus"}));
    green2d->add_option("--t0", gq.t0, "Sommerfeld parameter (default t of the channel)");
    green2d->add_option("--channel", gq.channel, "Channel supplying k")->check(CLI::Range(1, 3));
    green2d->add_option("--re", re, "Real part of the energy");
    green2d->add_option("--im", im, "Imaginary part of the energy");
    green2d->add_option("--sheet", sheet, "Riemann sheet")->check(CLI::IsMember({"physical", "unphysical"}));
    green2d->add_option("--row", row, "Row label n,m");
    green2d->add_option("--col", col, "Column label n,m");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    std::ostream* log = quiet ? nullptr : &std::cerr;
    try {
        const RunConfig cfg = resolve(config_path, o);
        if (table1->parsed()) {
            if (log) {
                *log << "table1\n";
            }
            const Report rep = cmd_table1(cfg, log);
            emit(cfg, [&](std::ostream& os) { rep.write(os, cfg.output.format); });
            return rep.ok() ? exit_ok : exit_numerical;
        }
        if (verify->parsed()) {
            if (log) {
                *log << "verify\n";
            }
            VerifyOptions vopt;
            vopt.suites = suites;
            const Report rep = cmd_verify(cfg, vopt, log);
            emit(cfg, [&](std::ostream& os) { rep.write(os, cfg.output.format); });
            return rep.ok() ? exit_ok : exit_numerical;
        }
        if (trace->parsed()) {
            topt.kind = trace_path == "c1" ? PathKind::C1 : trace_path == "c2" ? PathKind::C2 : PathKind::C3;
            const auto points = cmd_trace(cfg, topt);
            emit(cfg, [&](std::ostream& os) { write_trace_csv(os, points); });
            return exit_ok;
        }
        if (green2d->parsed()) {
            gq.sign = sign == "+" || sign == "plus" ? Sign::plus : Sign::minus;
            gq.sheet = sheet == "physical" ? Sheet::physical : Sheet::unphysical;
            gq.energy = cplx{re, im};
            gq.row = parse_pair(row, "--row");
            gq.col = parse_pair(col, "--col");
            const Report rep = cmd_green2d(cfg, gq);
            emit(cfg, [&](std::ostream& os) { rep.write(os, cfg.output.format); });
            return rep.ok() ? exit_ok : exit_numerical;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_config;
}
