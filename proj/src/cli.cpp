#include "bcj/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bcj/errors.hpp"
#include "bcj/experiments.hpp"
#include "bcj/io.hpp"

namespace bcj::cli {

namespace fs = std::filesystem;

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"command", c.command},
                       {"kind", c.kind},
                       {"m", c.m},
                       {"delta", c.delta},
                       {"p", c.p_grid},
                       {"q", c.q_grid},
                       {"draws", c.draws},
                       {"seed", c.seed},
                       {"samples", c.samples},
                       {"max_trials", c.max_trials},
                       {"min_errors", c.min_errors},
                       {"method", c.method},
                       {"lattice_cap", c.lattice_cap},
                       {"mc_cap", c.mc_cap},
                       {"quadrature_cap", c.quadrature_cap},
                       {"skip_lowest", c.skip_lowest},
                       {"sigma1", c.sigma1},
                       {"sigma2", c.sigma2},
                       {"out", c.out},
                       {"inputs", c.inputs}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
    c.command = j.value("command", c.command);
    c.kind = j.value("kind", c.kind);
    c.m = j.value("m", c.m);
    c.delta = j.value("delta", c.delta);
    c.p_grid = j.value("p", c.p_grid);
    c.q_grid = j.value("q", c.q_grid);
    c.draws = j.value("draws", c.draws);
    c.seed = j.value("seed", c.seed);
    c.samples = j.value("samples", c.samples);
    c.max_trials = j.value("max_trials", c.max_trials);
    c.min_errors = j.value("min_errors", c.min_errors);
    c.method = j.value("method", c.method);
    c.lattice_cap = j.value("lattice_cap", c.lattice_cap);
    c.mc_cap = j.value("mc_cap", c.mc_cap);
    c.quadrature_cap = j.value("quadrature_cap", c.quadrature_cap);
    c.skip_lowest = j.value("skip_lowest", c.skip_lowest);
    c.sigma1 = j.value("sigma1", c.sigma1);
    c.sigma2 = j.value("sigma2", c.sigma2);
    c.out = j.value("out", c.out);
    c.inputs = j.value("inputs", c.inputs);
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw CLI::ValidationError("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_power_list(const std::string& text) {
    std::vector<double> grid;
    for (const auto& part : split(text, ',')) grid.push_back(parse_double(part));
    if (grid.empty()) throw CLI::ValidationError("empty power list");
    return grid;
}

std::vector<double> parse_power_range(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw CLI::ValidationError("--p-range expects start,stop,points_per_decade");
    const double start = parse_double(parts[0]), stop = parse_double(parts[1]);
    const double ppd = parse_double(parts[2]);
    if (!(start > 0.0) || !(stop >= start) || !(ppd >= 1.0) || ppd != std::floor(ppd))
        throw CLI::ValidationError("--p-range needs 0 < start <= stop and an integer points_per_decade >= 1");
    const double e0 = std::log10(start), e1 = std::log10(stop);
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double e = e0 + k / ppd;
        if (e > e1 + 1e-9) break;
        grid.push_back(std::pow(10.0, e));
    }
    return grid;
}

namespace {

SweepSpec sweep_spec(const RunConfig& c) {
    SweepSpec s;
    s.kind = scheme_kind_from_string(c.kind);
    s.m = c.m;
    s.delta = c.delta;
    s.p_grid = c.p_grid;
    s.n_draws = c.draws;
    s.seed = c.seed;
    s.workers = c.workers;
    s.ser_budget.max_trials = c.max_trials;
    s.ser_budget.min_errors = c.min_errors;
    s.mi_budget.n_samples = c.samples;
    s.mi_budget.mc_cap = c.mc_cap;
    s.mi_budget.quadrature_cap = c.quadrature_cap;
    s.mi_budget.workers = c.workers;
    if (c.method == "auto") s.mi_budget.method = EntropyMethod::Auto;
    else if (c.method == "mc") s.mi_budget.method = EntropyMethod::MonteCarlo;
    else if (c.method == "quadrature") s.mi_budget.method = EntropyMethod::Quadrature;
    else throw CLI::ValidationError("--method must be auto, mc or quadrature");
    s.lattice_cap = c.lattice_cap;
    s.sigma1 = c.sigma1;
    s.sigma2 = c.sigma2;
    return s;
}

fs::path output_path(const RunConfig& c) {
    if (!c.out.empty()) return c.out;
    const char* dir = std::getenv("BCJ_OUT_DIR");
    return fs::path(dir ? dir : ".") / (c.command + ".csv");
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
    return p.parent_path() / (p.stem().string() + suffix);
}

void write_file(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
    f << contents;
    if (!f) throw std::ios_base::failure("write failed for '" + path.string() + "'");
}

void write_manifest(const RunConfig& c, const fs::path& csv, const std::vector<fs::path>& outputs,
                    const std::vector<std::string>& warnings) {
    nlohmann::json j = c;
    j["version"] = kVersion;
    j["gamma_rule"] = "max_admissible";
    j["q_rule"] = "max(1, floor(P^((1-delta)/(2(M+1+delta)))))";
    std::vector<std::string> names;
    for (const auto& o : outputs) names.push_back(o.filename().string());
    j["outputs"] = names;
    j["warnings"] = warnings;
    write_file(sibling(csv, ".manifest.json"), j.dump(2) + "\n");
}

void require_m(const RunConfig& c) {
    if (c.m < 1) throw CLI::ValidationError("--m", "--m is required (helper count >= 1)");
}

void require_grid(const RunConfig& c) {
    if (c.p_grid.empty()) throw CLI::ValidationError("--p", "a power grid (--p or --p-range) is required");
}

void print_fit(std::ostream& out, const std::string& label, const LineFit& fit) {
    out << label << " slope " << format_double(fit.slope) << " (se " << format_double(fit.slope_se) << ", n "
        << fit.n << ")\n";
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_m(c);
    require_grid(c);
    SweepSpec spec = sweep_spec(c);
    spec.with_ser = spec.kind != SchemeKind::GaussianJam;
    const SweepResult res = sweep_power(spec);
    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    const fs::path path = output_path(c);
    write_file(path, to_csv(sweep_table(res.rows)));
    write_manifest(c, path, {path}, res.warnings);
    if (res.p_grid.size() >= 3) print_fit(out, "bound vs 0.5 log2 P:", fit_dof(res.rows, {c.skip_lowest}).pooled);
    out << "wrote " << res.rows.size() << " rows to " << path.string() << "\n";
    return kOk;
}

int cmd_ser(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_m(c);
    require_grid(c);
    SweepSpec spec = sweep_spec(c);
    spec.with_rate = false;
    const SweepResult res = sweep_power(spec);
    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    const fs::path path = output_path(c);
    write_file(path, to_csv(ser_table(res.rows)));
    write_manifest(c, path, {path}, res.warnings);
    const auto med = median_by_p(res.rows, res.p_grid, [](const SweepRow& r) { return r.ser->rate; });
    for (std::size_t i = 0; i < med.size(); ++i)
        out << "P=" << format_double(res.p_grid[i]) << " median SER " << format_double(med[i]) << "\n";
    return kOk;
}

int cmd_leakage(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_m(c);
    require_grid(c);
    SweepSpec spec = sweep_spec(c);
    spec.with_ser = false;
    spec.with_eve_u = spec.kind != SchemeKind::GaussianJam;
    const SweepResult res = sweep_power(spec);
    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    const fs::path path = output_path(c);
    std::vector<fs::path> outputs{path};
    write_file(path, to_csv(leakage_table(res.rows)));
    if (spec.with_eve_u) {
        outputs.push_back(sibling(path, "_eve_u.csv"));
        write_file(outputs.back(), to_csv(eve_u_table(res.rows)));
    }
    write_manifest(c, path, outputs, res.warnings);
    if (res.p_grid.size() >= 3) print_fit(out, "I(V;Y2) vs 0.5 log2 P:", leakage_slope(res.rows, {c.skip_lowest}).pooled);
    out << "leakage coefficient (M+2)delta/(M+1+delta): " << format_double(leakage_coefficient(c.m, c.delta)) << "\n";
    return kOk;
}

int cmd_dmin(const RunConfig& c, std::ostream& out, std::ostream&) {
    require_m(c);
    const DminStudy study = fit_dmin_exponent(c.m, c.q_grid, c.draws, c.seed, c.lattice_cap);
    const fs::path path = output_path(c);
    write_file(path, to_csv(dmin_table(study)));
    write_manifest(c, path, {path}, {});
    out << "median slope " << format_double(study.median_slope) << ", min slope " << format_double(study.min_slope)
        << ", redraws " << study.redraws << "\n";
    return kOk;
}

int cmd_compare(const RunConfig& c, std::ostream& out, std::ostream&) {
    require_m(c);
    require_grid(c);
    if (c.p_grid.empty()) throw std::invalid_argument("compare: empty power grid");
    const auto cmp = compare_schemes(sweep_spec(c), {c.skip_lowest});
    const fs::path path = output_path(c);
    write_file(path, to_csv(compare_table(cmp)));
    std::vector<SweepRow> rows;
    for (const auto& k : cmp) rows.insert(rows.end(), k.rows.begin(), k.rows.end());
    const fs::path rows_path = sibling(path, "_rows.csv");
    write_file(rows_path, to_csv(sweep_table(rows)));
    write_manifest(c, path, {path, rows_path}, {});
    for (const auto& k : cmp) print_fit(out, std::string(to_string(k.kind)) + " bound:", k.dof.pooled);
    return kOk;
}

int cmd_report(const RunConfig& c, std::ostream& out, std::ostream&) {
    if (c.inputs.empty()) throw CLI::ValidationError("--in", "report needs at least one --in CSV");
    std::vector<SweepRow> rows;
    for (const auto& in : c.inputs) {
        std::ifstream f(in, std::ios::binary);
        if (!f) throw std::ios_base::failure("cannot open '" + in + "'");
        const auto part = sweep_rows_from_table(parse_csv(f));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const CsvTable table = report_table(rows, {c.skip_lowest});
    const fs::path path = output_path(c);
    write_file(path, to_csv(table));
    write_manifest(c, path, {path}, {});
    out << to_csv(table);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Blind cooperative jamming simulator for the Gaussian wiretap channel with helpers", "bcj"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunConfig flags;
    std::string config_path, p_list, p_range, q_list;
    struct Bound {
        CLI::Option* opt;
        std::function<void(RunConfig&)> apply;
    };
    std::vector<Bound> bound;

    auto add_common = [&](CLI::App* sub, bool grid) {
        sub->add_option("--config", config_path, "JSON config or manifest; flags override its values");
        auto bind = [&](CLI::Option* o, std::function<void(RunConfig&)> f) { bound.push_back({o, std::move(f)}); };
        bind(sub->add_option("--m", flags.m, "number of helpers M (required)"), [&](RunConfig& r) { r.m = flags.m; });
        bind(sub->add_option("--seed", flags.seed, "root RNG seed"), [&](RunConfig& r) { r.seed = flags.seed; });
        bind(sub->add_option("--draws", flags.draws, "number of channel draws"),
             [&](RunConfig& r) { r.draws = flags.draws; });
        bind(sub->add_option("--workers", flags.workers, "worker threads (results do not depend on it)"),
             [&](RunConfig& r) { r.workers = flags.workers; });
        bind(sub->add_option("--out", flags.out, "output CSV path (default $BCJ_OUT_DIR/<command>.csv)"),
             [&](RunConfig& r) { r.out = flags.out; });
        bind(sub->add_option("--lattice-cap", flags.lattice_cap, "receiver lattice enumeration cap"),
             [&](RunConfig& r) { r.lattice_cap = flags.lattice_cap; });
        if (!grid) return;
        bind(sub->add_option("--kind", flags.kind, "scheme: blind, csi_aligned, gaussian_jam"),
             [&](RunConfig& r) { r.kind = flags.kind; });
        bind(sub->add_option("--delta", flags.delta, "schedule parameter delta in (0, 0.5)"),
             [&](RunConfig& r) { r.delta = flags.delta; });
        auto* p = sub->add_option("--p", p_list, "comma-separated powers, e.g. 1e2,1e3,1e4");
        auto* pr = sub->add_option("--p-range", p_range, "start,stop,points_per_decade");
        p->excludes(pr);
        bind(p, [&](RunConfig& r) { r.p_grid = parse_power_list(p_list); });
        bind(pr, [&](RunConfig& r) { r.p_grid = parse_power_range(p_range); });
        bind(sub->add_option("--samples", flags.samples, "Monte Carlo samples per entropy"),
             [&](RunConfig& r) { r.samples = flags.samples; });
        bind(sub->add_option("--max-trials", flags.max_trials, "trial cap per error-rate estimate"),
             [&](RunConfig& r) { r.max_trials = flags.max_trials; });
        bind(sub->add_option("--min-errors", flags.min_errors, "stop once this many errors were seen"),
             [&](RunConfig& r) { r.min_errors = flags.min_errors; });
        bind(sub->add_option("--method", flags.method, "entropy method: auto, mc, quadrature"),
             [&](RunConfig& r) { r.method = flags.method; });
        bind(sub->add_option("--mc-cap", flags.mc_cap, "component cap for Monte Carlo entropies"),
             [&](RunConfig& r) { r.mc_cap = flags.mc_cap; });
        bind(sub->add_option("--quadrature-cap", flags.quadrature_cap, "component cap for quadrature"),
             [&](RunConfig& r) { r.quadrature_cap = flags.quadrature_cap; });
        bind(sub->add_option("--skip-lowest", flags.skip_lowest, "exclude the lowest grid powers from slope fits"),
             [&](RunConfig& r) { r.skip_lowest = flags.skip_lowest; });
        bind(sub->add_option("--sigma1", flags.sigma1, "legitimate receiver noise deviation"),
             [&](RunConfig& r) { r.sigma1 = flags.sigma1; });
        bind(sub->add_option("--sigma2", flags.sigma2, "eavesdropper noise deviation"),
             [&](RunConfig& r) { r.sigma2 = flags.sigma2; });
    };

    auto* sweep = app.add_subcommand("sweep", "power sweep: SER and rate bound per (draw, P)");
    auto* ser = app.add_subcommand("ser", "legitimate block error rate per (draw, P)");
    auto* leakage = app.add_subcommand("leakage", "I(V;Y1), I(V;Y2) and eavesdropper U-decoding per (draw, P)");
    auto* dmin = app.add_subcommand("dmin", "minimum-distance exponent study");
    auto* compare = app.add_subcommand("compare", "d.o.f. slopes of blind, CSI-aligned and Gaussian jamming");
    auto* report = app.add_subcommand("report", "fold sweep CSVs into slope summaries");
    for (auto* sub : {sweep, ser, leakage, compare}) add_common(sub, true);
    add_common(dmin, false);
    auto* qopt = dmin->add_option("--q", q_list, "comma-separated increasing Q grid");
    bound.push_back({qopt, [&](RunConfig& r) {
                         r.q_grid.clear();
                         for (const auto& s : split(q_list, ',')) r.q_grid.push_back(std::stoi(s));
                     }});
    report->add_option("--config", config_path, "JSON config or manifest");
    auto* in_opt = report->add_option("--in", flags.inputs, "sweep CSV files")->expected(1, -1);
    bound.push_back({in_opt, [&](RunConfig& r) { r.inputs = flags.inputs; }});
    auto* rout = report->add_option("--out", flags.out, "output CSV path");
    bound.push_back({rout, [&](RunConfig& r) { r.out = flags.out; }});
    auto* rskip = report->add_option("--skip-lowest", flags.skip_lowest, "exclude the lowest grid powers");
    bound.push_back({rskip, [&](RunConfig& r) { r.skip_lowest = flags.skip_lowest; }});

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::ios_base::failure("cannot open config '" + config_path + "'");
            cfg = nlohmann::json::parse(f).get<RunConfig>();
        }
        for (const auto& b : bound)
            if (b.opt->count() > 0) b.apply(cfg);
        cfg.workers = std::max(1, flags.workers);
        cfg.command = chosen->get_name();

        if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
        if (cfg.command == "ser") return cmd_ser(cfg, out, err);
        if (cfg.command == "leakage") return cmd_leakage(cfg, out, err);
        if (cfg.command == "dmin") return cmd_dmin(cfg, out, err);
        if (cfg.command == "compare") return cmd_compare(cfg, out, err);
        return cmd_report(cfg, out, err);
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << "\n" << chosen->help();
        return kUsage;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const DegenerateGains& e) {
        err << "degenerate channel: " << e.what() << "\n";
        return kDegenerate;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace bcj::cli
