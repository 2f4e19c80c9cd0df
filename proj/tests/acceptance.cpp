// Acceptance criteria of the benchmark, one PASS/FAIL line each.
#include "pgreen/commands.hpp"
#include "pgreen/errors.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace pgreen;

namespace {

double dev(cplx a, cplx b) { return std::max(std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag())); }

struct Table {
    std::map<std::string, Row> rows;

    const Row& at(const std::string& q) const
    {
        const auto it = rows.find(q);
        if (it == rows.end()) {
            throw Error("report has no row " + q);
        }
        return it->second;
    }
    cplx value(const std::string& q) const
    {
        const Row& r = at(q);
        if (r.status == RowStatus::skipped || r.note.rfind("error:", 0) == 0) {
            throw Error("row " + q + " was not computed: " + r.note);
        }
        return r.computed;
    }
};

Table index(const Report& rep)
{
    Table t;
    for (const Row& r : rep.rows) {
        t.rows.emplace(r.quantity, r);
    }
    return t;
}

int failures = 0;

void criterion(int id, const std::string& what, const std::function<std::string()>& check)
{
    std::string detail;
    bool ok = false;
    try {
        detail = check();
        ok = detail.rfind("FAIL", 0) != 0;
    }
    catch (const std::exception& e) {
        detail = std::string("FAIL exception: ") + e.what();
    }
    if (!ok) {
        ++failures;
    }
    std::printf("%s criterion %d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string verdict(bool ok, const std::string& msg) { return (ok ? "" : "FAIL ") + msg; }

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

} // namespace

int main()
{
    const RunConfig cfg;
    const Report first = cmd_table1(cfg);
    const Table t = index(first);

    criterion(1, "single contour integrals v within 5e-4 of the published values", [&] {
        const double d = std::max({dev(t.value("v1_y0_50"), paper_values::v1_y0_50),
                                   dev(t.value("v1_y0_100"), paper_values::v1_y0_100),
                                   dev(t.value("v1_y0_500"), paper_values::v1_y0_500),
                                   dev(t.value("v3"), paper_values::v3)});
        return verdict(d <= 5e-4, "max deviation " + sci(d));
    });

    criterion(2, "C1 w values within 1e-3 and |I0| < 1e-6", [&] {
        const double d = std::max({dev(t.value("w1_C1"), paper_values::c1_w1), dev(t.value("w2_C1"), paper_values::c1_w2),
                                   dev(t.value("w3_C1"), paper_values::c1_w3)});
        const double i0 = std::abs(t.value("I0_C1"));
        return verdict(d <= 1e-3 && i0 < 1e-6, "max w deviation " + sci(d) + ", |I0| " + sci(i0));
    });

    criterion(3, "C3 w values within 1e-3, aleph within 2e-3 of 1, C1 flagged degenerate", [&] {
        const double d = std::max({dev(t.value("w1_C3"), paper_values::c3_w1), dev(t.value("w2_C3"), paper_values::c3_w2),
                                   dev(t.value("w3_C3"), paper_values::c3_w3)});
        const double da = dev(t.value("aleph_C3"), 1.0);
        const Row& deg = t.at("C1_degenerate");
        const bool flagged = deg.status == RowStatus::pass && std::abs(deg.computed) < cfg.tol.degenerate;
        return verdict(d <= 1e-3 && da <= 2e-3 && flagged, "max w deviation " + sci(d) + ", aleph deviation " +
                                                               sci(da) + ", |1+alpha+beta| on C1 " +
                                                               sci(std::abs(deg.computed)));
    });

    criterion(4, "[hG]_00 within 1e-3 of 1 and off-diagonal entries below 1e-4", [&] {
        const double d = dev(t.value("hG00_C3"), 1.0);
        const double off = std::abs(t.value("hG_max_offdiag_C3"));
        return verdict(d <= 1e-3 && off < 1e-4, "diagonal deviation " + sci(d) + ", max off-diagonal " + sci(off));
    });

    criterion(5, "property suites", [&] {
        const Report v = cmd_verify(cfg);
        std::string failed;
        for (const Row& r : v.rows) {
            if (r.status == RowStatus::fail) {
                failed += " " + r.quantity;
            }
        }
        return verdict(v.ok() && v.passed() > 0, std::to_string(v.passed()) + " passed, " +
                                                     std::to_string(v.failed()) + " failed, " +
                                                     std::to_string(v.skipped()) + " skipped" + failed);
    });

    criterion(6, "repeated table1 reports are byte-identical", [&] {
        const Report second = cmd_table1(cfg);
        std::ostringstream a;
        std::ostringstream b;
        first.write(a, "json");
        second.write(b, "json");
        std::ostringstream ca;
        std::ostringstream cb;
        first.write(ca, "csv");
        second.write(cb, "csv");
        const bool same = a.str() == b.str() && ca.str() == cb.str();
        return verdict(same, std::to_string(a.str().size()) + " JSON bytes, " + std::to_string(ca.str().size()) +
                                 " CSV bytes");
    });

    std::printf("%s: %d of 6 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
