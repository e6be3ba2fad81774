#pragma once

// CSV tables (comma separated, '.' decimal point, UTF-8, RFC-4180 quoting)
// for every experiment output, plus readers used by the report command.

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcj/constellation.hpp"
#include "bcj/experiments.hpp"

namespace bcj {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range when absent.
    std::size_t column(std::string_view name) const;
};

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::istream& in);

namespace csv_header {
inline const std::vector<std::string> sweep{"kind",  "draw_id",    "p",          "m",      "delta",   "q",
                                            "a",     "gamma",      "ser_trials", "ser_errors",
                                            "ser_rate", "ser_stderr", "i_vy1",   "i_vy1_se", "i_vy2",
                                            "i_vy2_se", "bound"};
inline const std::vector<std::string> ser{"p", "m", "delta", "draw_id", "trials", "errors", "rate", "stderr"};
inline const std::vector<std::string> leakage{"p",        "m",     "delta",    "draw_id", "i_vy1",
                                              "i_vy1_se", "i_vy2", "i_vy2_se", "bound"};
inline const std::vector<std::string> dmin{"draw_id", "m", "q", "dmin", "slope"};
inline const std::vector<std::string> compare{"kind",       "dof_slope",        "dof_slope_se", "leakage_slope",
                                              "leakage_slope_se", "legit_slope", "legit_slope_se", "n_rows"};
inline const std::vector<std::string> report{"kind", "metric", "slope", "slope_se", "intercept", "n_points"};
}  // namespace csv_header

CsvTable sweep_table(std::span<const SweepRow> rows);
CsvTable ser_table(std::span<const SweepRow> rows);
CsvTable eve_u_table(std::span<const SweepRow> rows);
CsvTable leakage_table(std::span<const SweepRow> rows);
CsvTable dmin_table(const DminStudy& study);
CsvTable compare_table(std::span<const SchemeComparison> comparisons);

/// Rebuilds sweep rows from a sweep table. Columns that are empty stay unset.
std::vector<SweepRow> sweep_rows_from_table(const CsvTable& table);

/// Slope summaries (bound, leakage, legit rate) per scheme kind present in the rows.
CsvTable report_table(std::span<const SweepRow> rows, FitOptions options = {});

}  // namespace bcj
