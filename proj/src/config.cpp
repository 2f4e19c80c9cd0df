#include "pgreen/config.hpp"

#include "pgreen/errors.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace pgreen {

using json = nlohmann::ordered_json;

namespace {

/// Setter for one named field; `path` is the dotted name used in diagnostics.
using Setter = std::function<void(const json& value, const std::string& path)>;

double as_double(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        throw ConfigError("config field '" + path + "': expected a number, got " + v.type_name());
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError("config field '" + path + "': value is not finite");
    }
    return x;
}

int as_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) {
        throw ConfigError("config field '" + path + "': expected an integer, got " + v.type_name());
    }
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) {
        throw ConfigError("config field '" + path + "': integer out of range");
    }
    return static_cast<int>(x);
}

std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string()) {
        throw ConfigError("config field '" + path + "': expected a string, got " + v.type_name());
    }
    return v.get<std::string>();
}

void apply_section(const json& obj, const std::string& section, const std::map<std::string, Setter>& fields)
{
    if (!obj.is_object()) {
        throw ConfigError("config field '" + section + "': expected an object, got " + obj.type_name());
    }
    for (const auto& [key, value] : obj.items()) {
        const std::string path = section + "." + key;
        const auto it = fields.find(key);
        if (it == fields.end()) {
            throw ConfigError("config field '" + path + "': unknown field");
        }
        it->second(value, path);
    }
}

Setter real(double& target)
{
    return [&target](const json& v, const std::string& p) { target = as_double(v, p); };
}

Setter integer(int& target)
{
    return [&target](const json& v, const std::string& p) { target = as_int(v, p); };
}

Setter text(std::string& target)
{
    return [&target](const json& v, const std::string& p) { target = as_string(v, p); };
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

std::pair<int, int> line_column(const std::string& text, std::size_t byte)
{
    int line = 1;
    int col = 1;
    const std::size_t end = std::min(byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

double RunConfig::x0() const
{
    return paths.x0 ? *paths.x0 : 0.5 * sys.k23 * sys.k23;
}

bool RunConfig::is_benchmark() const
{
    const PhysicalSystem ref = PhysicalSystem::helium_benchmark(5.0);
    const bool system_ok = near(sys.Z1, ref.Z1) && near(sys.Z2, ref.Z2) && near(sys.Z3, ref.Z3) &&
                           near(sys.m1, ref.m1) && near(sys.m2, ref.m2) && sys.m3_infinite &&
                           near(sys.k12, ref.k12) && near(sys.k13, ref.k13) && near(sys.k23, ref.k23);
    const bool table_ok = paths.y0_table.size() == 3 && near(paths.y0_table[0], 50.0) &&
                          near(paths.y0_table[1], 100.0) && near(paths.y0_table[2], 500.0);
    return system_ok && table_ok && near(basis.b, 1.0) && near(paths.y0, 100.0) && near(x0(), 12.5) &&
           near(paths.phi, -std::numbers::pi / 2.0);
}

void RunConfig::validate() const
{
    sys.validate();
    basis.validate();
    quad.validate();
    cf.validate();
    if (!(paths.y0 > 0.0)) {
        throw ConfigError("paths.y0 must be positive");
    }
    for (double y : paths.y0_table) {
        if (!(y > 0.0)) {
            throw ConfigError("paths.y0_table entries must be positive");
        }
    }
    if (!(x0() > 0.0)) {
        throw ConfigError("paths.x0 must be positive");
    }
    if (!std::isfinite(paths.phi) || std::abs(paths.phi) >= std::numbers::pi) {
        throw ConfigError("paths.phi must lie in (-pi, pi)");
    }
    const double tols[] = {tol.single,        tol.double_integral, tol.i0,           tol.aleph,
                           tol.degenerate,    tol.product_diag,    tol.product_offdiag, tol.orthogonality,
                           tol.completeness,  tol.dense_1d,        tol.inverse_2d,   tol.half_sum,
                           tol.v12};
    for (double t : tols) {
        if (!(t > 0.0)) {
            throw ConfigError("tolerances: every tolerance must be positive");
        }
    }
    if (output.format != "json" && output.format != "csv") {
        throw ConfigError("output.format must be 'json' or 'csv'");
    }
    if (output.path.empty()) {
        throw ConfigError("output.path must not be empty");
    }
}

json RunConfig::to_json() const
{
    json j;
    j["system"] = {{"Z1", sys.Z1},
                   {"Z2", sys.Z2},
                   {"Z3", sys.Z3},
                   {"m1", sys.m1},
                   {"m2", sys.m2},
                   {"m3", sys.m3_infinite ? json("infinite") : json(sys.m3)},
                   {"k12", sys.k12},
                   {"k13", sys.k13},
                   {"k23", sys.k23}};
    j["basis"] = {{"b", basis.b}, {"N", basis.N}};
    j["paths"] = {{"y0", paths.y0}, {"y0_table", paths.y0_table}, {"x0", x0()}, {"phi", paths.phi}};
    j["quadrature"] = {{"rel_tol", quad.rel_tol},
                       {"abs_tol", quad.abs_tol},
                       {"max_evals", quad.max_evals},
                       {"tau_max_evals", quad.tau_max_evals},
                       {"x_cutoff", quad.x_cutoff},
                       {"tau_cutoff", quad.tau_cutoff},
                       {"tau_rel_tol", quad.tau_rel_tol},
                       {"energy_cap", quad.energy_cap},
                       {"interp_tol", quad.interp_tol},
                       {"double_rel_tol", quad.double_rel_tol},
                       {"double_abs_tol", quad.double_abs_tol},
                       {"double_max_evals", quad.double_max_evals},
                       {"execution", quad.execution == Execution::serial ? "serial" : "parallel"}};
    j["continued_fraction"] = {{"max_depth", cf.max_depth}, {"tiny", cf.tiny}, {"rel_tol", cf.rel_tol}};
    j["tolerances"] = {{"single", tol.single},
                       {"double_integral", tol.double_integral},
                       {"i0", tol.i0},
                       {"aleph", tol.aleph},
                       {"degenerate", tol.degenerate},
                       {"product_diag", tol.product_diag},
                       {"product_offdiag", tol.product_offdiag},
                       {"orthogonality", tol.orthogonality},
                       {"completeness", tol.completeness},
                       {"dense_1d", tol.dense_1d},
                       {"inverse_2d", tol.inverse_2d},
                       {"half_sum", tol.half_sum},
                       {"v12", tol.v12}};
    j["output"] = {{"format", output.format}, {"path", output.path}};
    return j;
}

RunConfig RunConfig::from_json(const json& j)
{
    RunConfig c;
    if (!j.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    std::map<std::string, Setter> system{
        {"Z1", real(c.sys.Z1)},
        {"Z2", real(c.sys.Z2)},
        {"Z3", real(c.sys.Z3)},
        {"m1", real(c.sys.m1)},
        {"m2", real(c.sys.m2)},
        {"m3",
         [&c](const json& v, const std::string& p) {
             if (v.is_null() || (v.is_string() && v.get<std::string>() == "infinite")) {
                 c.sys.m3_infinite = true;
                 return;
             }
             if (v.is_string()) {
                 throw ConfigError("config field '" + p + "': expected a number or \"infinite\"");
             }
             c.sys.m3 = as_double(v, p);
             c.sys.m3_infinite = false;
         }},
        {"k12", real(c.sys.k12)},
        {"k13", real(c.sys.k13)},
        {"k23", real(c.sys.k23)},
    };
    std::map<std::string, Setter> basis{{"b", real(c.basis.b)}, {"N", integer(c.basis.N)}};
    std::map<std::string, Setter> paths{
        {"y0", real(c.paths.y0)},
        {"y0_table",
         [&c](const json& v, const std::string& p) {
             if (!v.is_array()) {
                 throw ConfigError("config field '" + p + "': expected an array, got " + v.type_name());
             }
             c.paths.y0_table.clear();
             for (std::size_t i = 0; i < v.size(); ++i) {
                 c.paths.y0_table.push_back(as_double(v[i], p + "[" + std::to_string(i) + "]"));
             }
         }},
        {"x0",
         [&c](const json& v, const std::string& p) {
             if (v.is_null()) {
                 c.paths.x0.reset();
             } else {
                 c.paths.x0 = as_double(v, p);
             }
         }},
        {"phi", real(c.paths.phi)},
    };
    std::map<std::string, Setter> quadrature{
        {"rel_tol", real(c.quad.rel_tol)},
        {"abs_tol", real(c.quad.abs_tol)},
        {"max_evals", integer(c.quad.max_evals)},
        {"tau_max_evals", integer(c.quad.tau_max_evals)},
        {"x_cutoff", real(c.quad.x_cutoff)},
        {"tau_cutoff", real(c.quad.tau_cutoff)},
        {"tau_rel_tol", real(c.quad.tau_rel_tol)},
        {"energy_cap", real(c.quad.energy_cap)},
        {"interp_tol", real(c.quad.interp_tol)},
        {"double_rel_tol", real(c.quad.double_rel_tol)},
        {"double_abs_tol", real(c.quad.double_abs_tol)},
        {"double_max_evals", integer(c.quad.double_max_evals)},
        {"execution",
         [&c](const json& v, const std::string& p) {
             const std::string s = as_string(v, p);
             if (s == "serial") {
                 c.quad.execution = Execution::serial;
             } else if (s == "parallel") {
                 c.quad.execution = Execution::parallel;
             } else {
                 throw ConfigError("config field '" + p + "': expected \"serial\" or \"parallel\"");
             }
         }},
    };
    std::map<std::string, Setter> cfrac{
        {"max_depth", integer(c.cf.max_depth)}, {"tiny", real(c.cf.tiny)}, {"rel_tol", real(c.cf.rel_tol)}};
    std::map<std::string, Setter> tolerances{
        {"single", real(c.tol.single)},
        {"double_integral", real(c.tol.double_integral)},
        {"i0", real(c.tol.i0)},
        {"aleph", real(c.tol.aleph)},
        {"degenerate", real(c.tol.degenerate)},
        {"product_diag", real(c.tol.product_diag)},
        {"product_offdiag", real(c.tol.product_offdiag)},
        {"orthogonality", real(c.tol.orthogonality)},
        {"completeness", real(c.tol.completeness)},
        {"dense_1d", real(c.tol.dense_1d)},
        {"inverse_2d", real(c.tol.inverse_2d)},
        {"half_sum", real(c.tol.half_sum)},
        {"v12", real(c.tol.v12)},
    };
    std::map<std::string, Setter> output{{"format", text(c.output.format)}, {"path", text(c.output.path)}};

    // A common momentum k applies first so that explicit k12/k13/k23 override it.
    if (j.contains("system") && j["system"].is_object() && j["system"].contains("k")) {
        const double k = as_double(j["system"]["k"], "system.k");
        c.sys.k12 = c.sys.k13 = c.sys.k23 = k;
    }
    system["k"] = [](const json&, const std::string&) {};

    const std::map<std::string, std::map<std::string, Setter>*> sections{
        {"system", &system},         {"basis", &basis},           {"paths", &paths},
        {"quadrature", &quadrature}, {"continued_fraction", &cfrac}, {"tolerances", &tolerances},
        {"output", &output},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = sections.find(key);
        if (it == sections.end()) {
            throw ConfigError("config field '" + key + "': unknown section");
        }
        apply_section(value, key, *it->second);
    }
    c.validate();
    return c;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& source)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        std::string what = e.what();
        const auto colon = what.find(": ");
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": parse error: " + (colon == std::string::npos ? what : what.substr(colon + 2)));
    }
    try {
        return from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
}

RunConfig RunConfig::load_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

} // namespace pgreen
