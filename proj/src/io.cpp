#include "bcj/io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <string>

namespace bcj {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("csv: missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

void append_field(std::string& out, const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        append_field(out, fields[i]);
    }
    out += '\n';
}

std::string str(std::int64_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }
std::string str(double v) { return format_double(v); }

double to_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("csv: not a number: '" + s + "'");
    return v;
}

std::int64_t to_int(const std::string& s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("csv: not an integer: '" + s + "'");
    return v;
}

}  // namespace

std::string to_csv(const CsvTable& table) {
    std::string out;
    append_record(out, table.header);
    for (const auto& r : table.rows) {
        if (r.size() != table.header.size()) throw std::logic_error("csv: row width differs from header");
        append_record(out, r);
    }
    return out;
}

CsvTable parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, any = false;
    char c = 0;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (any) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    if (records.empty()) throw std::invalid_argument("csv: empty input");
    CsvTable t;
    t.header = std::move(records.front());
    t.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    for (const auto& r : t.rows)
        if (r.size() != t.header.size()) throw std::invalid_argument("csv: ragged row");
    return t;
}

CsvTable sweep_table(std::span<const SweepRow> rows) {
    CsvTable t{csv_header::sweep, {}};
    for (const auto& r : rows) {
        std::vector<std::string> f{std::string(to_string(r.kind)), str(r.draw_id), str(r.p), str(r.m),
                                   str(r.delta), str(r.q), str(r.a), str(r.gamma)};
        if (r.ser) {
            f.insert(f.end(), {str(r.ser->trials), str(r.ser->errors), str(r.ser->rate), str(r.ser->std_error)});
        } else {
            f.insert(f.end(), 4, "");
        }
        if (r.i_vy1 && r.i_vy2 && r.bound) {
            f.insert(f.end(), {str(r.i_vy1->value), str(r.i_vy1->std_error), str(r.i_vy2->value),
                               str(r.i_vy2->std_error), str(*r.bound)});
        } else {
            f.insert(f.end(), 5, "");
        }
        t.rows.push_back(std::move(f));
    }
    return t;
}

CsvTable ser_table(std::span<const SweepRow> rows) {
    CsvTable t{csv_header::ser, {}};
    for (const auto& r : rows) {
        if (!r.ser) throw std::invalid_argument("ser_table: row without SER estimate");
        t.rows.push_back({str(r.p), str(r.m), str(r.delta), str(r.draw_id), str(r.ser->trials), str(r.ser->errors),
                          str(r.ser->rate), str(r.ser->std_error)});
    }
    return t;
}

CsvTable eve_u_table(std::span<const SweepRow> rows) {
    CsvTable t{csv_header::ser, {}};
    for (const auto& r : rows) {
        if (!r.eve_u) throw std::invalid_argument("eve_u_table: row without U-decoding estimate");
        t.rows.push_back({str(r.p), str(r.m), str(r.delta), str(r.draw_id), str(r.eve_u->trials),
                          str(r.eve_u->errors), str(r.eve_u->rate), str(r.eve_u->std_error)});
    }
    return t;
}

CsvTable leakage_table(std::span<const SweepRow> rows) {
    CsvTable t{csv_header::leakage, {}};
    for (const auto& r : rows) {
        if (!r.i_vy1 || !r.i_vy2 || !r.bound) throw std::invalid_argument("leakage_table: row without rate terms");
        t.rows.push_back({str(r.p), str(r.m), str(r.delta), str(r.draw_id), str(r.i_vy1->value),
                          str(r.i_vy1->std_error), str(r.i_vy2->value), str(r.i_vy2->std_error), str(*r.bound)});
    }
    return t;
}

CsvTable dmin_table(const DminStudy& study) {
    CsvTable t{csv_header::dmin, {}};
    for (const auto& r : study.rows) t.rows.push_back({str(r.draw_id), str(r.m), str(r.q), str(r.dmin), str(r.slope)});
    return t;
}

CsvTable compare_table(std::span<const SchemeComparison> comparisons) {
    CsvTable t{csv_header::compare, {}};
    for (const auto& c : comparisons)
        t.rows.push_back({std::string(to_string(c.kind)), str(c.dof.pooled.slope), str(c.dof.pooled.slope_se),
                          str(c.leakage.pooled.slope), str(c.leakage.pooled.slope_se), str(c.legit.pooled.slope),
                          str(c.legit.pooled.slope_se), str(static_cast<std::int64_t>(c.rows.size()))});
    return t;
}

std::vector<SweepRow> sweep_rows_from_table(const CsvTable& table) {
    const auto col = [&](std::string_view name) { return table.column(name); };
    const std::size_t c_kind = col("kind"), c_draw = col("draw_id"), c_p = col("p"), c_m = col("m"),
                      c_delta = col("delta"), c_q = col("q"), c_a = col("a"), c_gamma = col("gamma"),
                      c_trials = col("ser_trials"), c_errors = col("ser_errors"), c_vy1 = col("i_vy1"),
                      c_vy1se = col("i_vy1_se"), c_vy2 = col("i_vy2"), c_vy2se = col("i_vy2_se"),
                      c_bound = col("bound");
    std::vector<SweepRow> rows;
    for (const auto& f : table.rows) {
        SweepRow r;
        r.kind = scheme_kind_from_string(f[c_kind]);
        r.draw_id = static_cast<int>(to_int(f[c_draw]));
        r.p = to_double(f[c_p]);
        r.m = static_cast<int>(to_int(f[c_m]));
        r.delta = to_double(f[c_delta]);
        r.q = static_cast<int>(to_int(f[c_q]));
        r.a = to_double(f[c_a]);
        r.gamma = to_double(f[c_gamma]);
        if (!f[c_trials].empty()) r.ser = ErrorEstimate::from_counts(to_int(f[c_trials]), to_int(f[c_errors]));
        if (!f[c_bound].empty()) {
            MiEstimate y1, y2;
            y1.value = to_double(f[c_vy1]);
            y1.std_error = to_double(f[c_vy1se]);
            y2.value = to_double(f[c_vy2]);
            y2.std_error = to_double(f[c_vy2se]);
            r.i_vy1 = y1;
            r.i_vy2 = y2;
            r.bound = to_double(f[c_bound]);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

CsvTable report_table(std::span<const SweepRow> rows, FitOptions options) {
    std::map<std::string, std::vector<SweepRow>> by_kind;
    for (const auto& r : rows) by_kind[std::string(to_string(r.kind))].push_back(r);
    CsvTable t{csv_header::report, {}};
    for (const auto& [kind, kr] : by_kind) {
        if (!kr.front().bound) continue;
        const std::pair<const char*, SweepColumn> metrics[] = {
            {"bound", SweepColumn::Bound}, {"i_vy2", SweepColumn::Leakage}, {"i_vy1", SweepColumn::LegitRate}};
        for (const auto& [name, column] : metrics) {
            const LineFit fit = fit_column(kr, column, options).pooled;
            t.rows.push_back({kind, name, str(fit.slope), str(fit.slope_se), str(fit.intercept),
                              str(static_cast<std::int64_t>(fit.n))});
        }
    }
    return t;
}

}  // namespace bcj
