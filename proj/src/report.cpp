#include "pgreen/report.hpp"

#include "pgreen/contours.hpp"
#include "pgreen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pgreen {

using json = nlohmann::ordered_json;

namespace {

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

} // namespace

const char* to_string(RowStatus s)
{
    switch (s) {
    case RowStatus::pass:
        return "pass";
    case RowStatus::fail:
        return "fail";
    case RowStatus::skipped:
        return "skipped";
    case RowStatus::info:
        return "info";
    }
    return "info";
}

Row compare_row(std::string quantity, cplx computed, cplx reference, double tol)
{
    Row r;
    r.quantity = std::move(quantity);
    r.computed = computed;
    r.reference = reference;
    r.abs_dev = std::max(std::abs(computed.real() - reference.real()), std::abs(computed.imag() - reference.imag()));
    r.tolerance = tol;
    r.status = std::isfinite(r.abs_dev) && r.abs_dev <= tol ? RowStatus::pass : RowStatus::fail;
    return r;
}

Row bound_row(std::string quantity, cplx computed, double tol)
{
    Row r;
    r.quantity = std::move(quantity);
    r.computed = computed;
    r.reference = cplx{0.0, 0.0};
    r.abs_dev = std::abs(computed);
    r.tolerance = tol;
    r.status = std::isfinite(r.abs_dev) && r.abs_dev < tol ? RowStatus::pass : RowStatus::fail;
    r.note = "modulus bound";
    return r;
}

Row skipped_row(std::string quantity, std::string reason)
{
    Row r;
    r.quantity = std::move(quantity);
    r.computed = cplx{std::nan(""), std::nan("")};
    r.abs_dev = std::nan("");
    r.status = RowStatus::skipped;
    r.note = std::move(reason);
    return r;
}

Row info_row(std::string quantity, cplx computed, std::string note)
{
    Row r;
    r.quantity = std::move(quantity);
    r.computed = computed;
    r.abs_dev = std::nan("");
    r.status = RowStatus::info;
    r.note = std::move(note);
    return r;
}

int Report::passed() const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.status == RowStatus::pass; }));
}

int Report::failed() const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.status == RowStatus::fail; }));
}

int Report::skipped() const
{
    return static_cast<int>(
        std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.status == RowStatus::skipped; }));
}

json Report::to_json() const
{
    json rj = json::array();
    for (const Row& r : rows) {
        json j;
        j["quantity"] = r.quantity;
        j["computed"] = r.status == RowStatus::skipped ? json(nullptr) : complex_json(r.computed);
        j["reference"] = r.reference ? complex_json(*r.reference) : json(nullptr);
        j["abs_dev"] = std::isfinite(r.abs_dev) ? json(r.abs_dev) : json(nullptr);
        j["tolerance"] = r.reference ? json(r.tolerance) : json(nullptr);
        if (r.status == RowStatus::pass || r.status == RowStatus::fail) {
            j["pass"] = r.status == RowStatus::pass;
        } else {
            j["pass"] = nullptr;
        }
        j["status"] = to_string(r.status);
        j["paper"] = r.paper ? complex_json(*r.paper) : json(nullptr);
        j["note"] = r.note;
        rj.push_back(std::move(j));
    }
    json out;
    out["command"] = command;
    out["config"] = config;
    out["reference_mode"] = reference_mode;
    out["rows"] = std::move(rj);
    out["summary"] = {{"total", static_cast<int>(rows.size())},
                      {"passed", passed()},
                      {"failed", failed()},
                      {"skipped", skipped()}};
    out["status"] = ok() ? "pass" : "fail";
    return out;
}

void Report::write_csv(std::ostream& os) const
{
    os << "quantity,status,computed_re,computed_im,reference_re,reference_im,abs_dev,tolerance,note\n";
    for (const Row& r : rows) {
        os << csv_field(r.quantity) << ',' << to_string(r.status) << ',';
        if (r.status == RowStatus::skipped) {
            os << ",,";
        } else {
            os << format_sci17(r.computed.real()) << ',' << format_sci17(r.computed.imag()) << ',';
        }
        if (r.reference) {
            os << format_sci17(r.reference->real()) << ',' << format_sci17(r.reference->imag()) << ','
               << format_sci17(r.abs_dev) << ',' << format_sci17(r.tolerance);
        } else {
            os << ",,,";
        }
        os << ',' << csv_field(r.note) << '\n';
    }
}

void Report::write(std::ostream& os, const std::string& format) const
{
    if (format == "json") {
        os << to_json().dump(2) << '\n';
    } else if (format == "csv") {
        write_csv(os);
    } else {
        throw ConfigError("output.format must be 'json' or 'csv'");
    }
}

} // namespace pgreen
