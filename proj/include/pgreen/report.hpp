#pragma once

#include "pgreen/special_functions.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pgreen {

enum class RowStatus { pass, fail, skipped, info };

[[nodiscard]] const char* to_string(RowStatus s);

/// One compared quantity of a report.
struct Row {
    std::string quantity;
    cplx computed;
    std::optional<cplx> reference; ///< empty when nothing is compared
    std::optional<cplx> paper;     ///< published value, when one exists and applies
    double abs_dev = 0.0;          ///< max(|d Re|, |d Im|), or the modulus for bounds
    double tolerance = 0.0;
    RowStatus status = RowStatus::info;
    std::string note;
};

/// Row passing when max(|Re(c - r)|, |Im(c - r)|) <= tol.
[[nodiscard]] Row compare_row(std::string quantity, cplx computed, cplx reference, double tol);
/// Row passing when |computed| < tol; the reference is zero.
[[nodiscard]] Row bound_row(std::string quantity, cplx computed, double tol);
[[nodiscard]] Row skipped_row(std::string quantity, std::string reason);
[[nodiscard]] Row info_row(std::string quantity, cplx computed, std::string note = {});

struct Report {
    std::string command;
    nlohmann::ordered_json config;
    std::string reference_mode; ///< "paper", "targets" or "none"
    std::vector<Row> rows;

    [[nodiscard]] int passed() const;
    [[nodiscard]] int failed() const;
    [[nodiscard]] int skipped() const;
    [[nodiscard]] bool ok() const { return failed() == 0; }

    [[nodiscard]] nlohmann::ordered_json to_json() const;
    /// Header quantity,status,computed_re,computed_im,reference_re,reference_im,abs_dev,tolerance,note.
    void write_csv(std::ostream& os) const;
    /// Writes in `format` ("json" or "csv").
    void write(std::ostream& os, const std::string& format) const;
};

} // namespace pgreen
