#include "bcj/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "bcj/errors.hpp"
#include "bcj/parallel.hpp"
#include "bcj/rng.hpp"

namespace bcj {

ChannelRealization draw_channel(const SweepSpec& spec, int draw_id) {
    // Redraw (deterministically) the rare realizations sitting next to a degenerate set.
    for (std::uint64_t attempt = 0;; ++attempt) {
        auto ch = sample_channel(spec.m, derive_seed(spec.seed, "channel", {static_cast<std::uint64_t>(draw_id), attempt}),
                                 spec.gains);
        ch.sigma1 = spec.sigma1;
        ch.sigma2 = spec.sigma2;
        if (degeneracy_margin(ch) > 1e-6 || attempt == 100) return ch;
    }
}

SchemeConfig make_scheme(SchemeKind kind, int m, double p, double delta, const ChannelRealization& ch,
                         std::uint64_t alpha_seed) {
    switch (kind) {
        case SchemeKind::Blind: return make_blind_scheme(m, p, delta, ch.h, default_c_bar(ch), alpha_seed);
        case SchemeKind::CsiAligned: return make_csi_scheme(m, p, delta, ch.h, ch.g, alpha_seed);
        case SchemeKind::GaussianJam:
            return make_gaussian_jam_scheme(m, p, delta, ch.h, default_c_bar(ch), alpha_seed);
    }
    throw std::invalid_argument("make_scheme: unknown kind");
}

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.size() < 3) throw std::invalid_argument("power grid needs at least 3 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw std::invalid_argument("power grid values must be > 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("power grid must be strictly ascending");
    }
}

std::size_t saturating_pow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
        r *= base;
    }
    return r;
}

// Returns an empty string when P fits every cap, otherwise the reason.
std::string cap_violation(const SweepSpec& spec, double p) {
    const int q = schedule_q(p, spec.m, spec.delta);
    const int jam = spec.kind == SchemeKind::Blind ? spec.m + 1 : spec.m;
    if ((spec.with_ser || spec.with_eve_u) && spec.kind != SchemeKind::GaussianJam) {
        const std::size_t n = receiver_lattice_size(spec.m, q, jam);
        if (n > spec.lattice_cap)
            return "receiver lattice of " + std::to_string(n) + " points exceeds cap " +
                   std::to_string(spec.lattice_cap);
    }
    if (spec.with_rate) {
        const int streams = spec.kind == SchemeKind::GaussianJam ? spec.m : spec.m + jam;
        const std::size_t n = saturating_pow(2 * static_cast<std::size_t>(q) + 1, streams);
        const std::size_t cap = spec.mi_budget.method == EntropyMethod::Quadrature ? spec.mi_budget.quadrature_cap
                                                                                   : spec.mi_budget.mc_cap;
        if (n > cap)
            return "eavesdropper mixture of " + std::to_string(n) + " components exceeds cap " + std::to_string(cap);
    }
    return {};
}

}  // namespace

SweepResult sweep_power(const SweepSpec& spec) {
    check_grid(spec.p_grid);
    if (spec.n_draws < 1) throw std::invalid_argument("sweep_power: need at least one channel draw");
    if (spec.with_ser && spec.kind == SchemeKind::GaussianJam)
        throw std::invalid_argument("sweep_power: SER is defined for Blind and CsiAligned only");
    if (spec.with_eve_u && spec.kind == SchemeKind::GaussianJam)
        throw std::invalid_argument("sweep_power: eavesdropper U-decoding needs a lattice jamming scheme");

    SweepResult result;
    for (double p : spec.p_grid) {
        const std::string why = cap_violation(spec, p);
        if (!why.empty()) {
            result.warnings.push_back("grid truncated before P=" + std::to_string(p) + ": " + why);
            break;
        }
        result.p_grid.push_back(p);
    }
    if (result.p_grid.empty()) throw CapExceeded("sweep_power: no grid point fits the caps", 0, 0);

    std::vector<ChannelRealization> channels;
    for (int d = 0; d < spec.n_draws; ++d) channels.push_back(draw_channel(spec, d));

    const std::size_t n_p = result.p_grid.size();
    result.rows.resize(static_cast<std::size_t>(spec.n_draws) * n_p);
    parallel_for(result.rows.size(), spec.workers, [&](std::size_t cell) {
        const int d = static_cast<int>(cell / n_p);
        const std::size_t pi = cell % n_p;
        const auto& ch = channels[static_cast<std::size_t>(d)];
        const double p = result.p_grid[pi];
        const auto ud = static_cast<std::uint64_t>(d);
        const SchemeConfig cfg = make_scheme(spec.kind, spec.m, p, spec.delta, ch, derive_seed(spec.seed, "alpha", {ud}));
        const std::uint64_t cell_seed = derive_seed(spec.seed, "cell", {ud, pi});

        SweepRow row;
        row.kind = spec.kind;
        row.draw_id = d;
        row.p = p;
        row.m = spec.m;
        row.delta = spec.delta;
        row.q = cfg.q;
        row.a = cfg.a;
        row.gamma = cfg.gamma;
        if (spec.with_ser) row.ser = estimate_ser(cfg, ch, spec.ser_budget, derive_seed(cell_seed, "ser")).block;
        if (spec.with_eve_u)
            row.eve_u = estimate_eve_u_error(cfg, ch, spec.ser_budget, derive_seed(cell_seed, "eve_u"));
        if (spec.with_rate) {
            EntropyBudget mi = spec.mi_budget;
            mi.workers = 1;
            const RateBound rb = rate_lower_bound(cfg, ch, mi, derive_seed(cell_seed, "rate"));
            row.i_vy1 = rb.i_v_y1;
            row.i_vy2 = rb.i_v_y2;
            row.bound = rb.bound;
        }
        result.rows[cell] = std::move(row);
    });
    return result;
}

bool schedule_consistent(const SweepRow& row) {
    const int q = schedule_q(row.p, row.m, row.delta);
    const double a = row.gamma * std::sqrt(row.p) / q;
    return q == row.q && std::abs(a - row.a) <= 1e-12 * std::max(1.0, std::abs(a));
}

namespace {

std::optional<double> column_value(const SweepRow& row, SweepColumn column) {
    switch (column) {
        case SweepColumn::Bound: return row.bound;
        case SweepColumn::Leakage: return row.i_vy2 ? std::optional(row.i_vy2->value) : std::nullopt;
        case SweepColumn::LegitRate: return row.i_vy1 ? std::optional(row.i_vy1->value) : std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

DofFit fit_column(std::span<const SweepRow> rows, SweepColumn column, FitOptions options) {
    std::vector<double> powers;
    for (const auto& r : rows) powers.push_back(r.p);
    std::sort(powers.begin(), powers.end());
    powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
    if (options.skip_lowest < 0 || static_cast<std::size_t>(options.skip_lowest) > powers.size())
        throw std::invalid_argument("fit: skip_lowest out of range");
    powers.erase(powers.begin(), powers.begin() + options.skip_lowest);
    if (powers.size() < 3) throw std::invalid_argument("fit: need at least 3 distinct powers (degenerate grid)");
    const double p_floor = powers.front();

    std::vector<double> xs, ys;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_draw;
    for (const auto& r : rows) {
        if (r.p < p_floor) continue;
        const auto v = column_value(r, column);
        if (!v) throw std::invalid_argument("fit: row lacks the requested column");
        const double x = 0.5 * std::log2(r.p);
        xs.push_back(x);
        ys.push_back(*v);
        by_draw[r.draw_id].first.push_back(x);
        by_draw[r.draw_id].second.push_back(*v);
    }
    DofFit fit;
    fit.pooled = fit_line(xs, ys);
    for (const auto& [draw, xy] : by_draw) {
        if (xy.first.size() < 3) continue;
        fit.per_draw.emplace_back(draw, fit_line(xy.first, xy.second));
    }
    return fit;
}

double finite_delta_dof(int m, double delta) { return (m - (2.0 * m + 2.0) * delta) / (m + 1.0 + delta); }

double leakage_coefficient(int m, double delta) { return (m + 2.0) * delta / (m + 1.0 + delta); }

std::vector<double> median_by_p(std::span<const SweepRow> rows, std::span<const double> p_grid,
                                double (*value)(const SweepRow&)) {
    std::vector<double> medians;
    for (double p : p_grid) {
        std::vector<double> vals;
        for (const auto& r : rows)
            if (r.p == p) vals.push_back(value(r));
        if (vals.empty()) throw std::invalid_argument("median_by_p: no rows at a grid power");
        std::sort(vals.begin(), vals.end());
        const std::size_t n = vals.size();
        medians.push_back(n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]));
    }
    return medians;
}

std::vector<SchemeComparison> compare_schemes(const SweepSpec& base, FitOptions options) {
    if (base.p_grid.empty()) throw std::invalid_argument("compare_schemes: empty power grid");
    std::vector<SchemeComparison> out;
    for (SchemeKind kind : {SchemeKind::Blind, SchemeKind::CsiAligned, SchemeKind::GaussianJam}) {
        SweepSpec spec = base;
        spec.kind = kind;
        spec.with_ser = false;
        spec.with_eve_u = false;
        spec.with_rate = true;
        SweepResult res = sweep_power(spec);
        SchemeComparison cmp;
        cmp.kind = kind;
        cmp.dof = fit_column(res.rows, SweepColumn::Bound, options);
        cmp.leakage = fit_column(res.rows, SweepColumn::Leakage, options);
        cmp.legit = fit_column(res.rows, SweepColumn::LegitRate, options);
        cmp.rows = std::move(res.rows);
        out.push_back(std::move(cmp));
    }
    return out;
}

}  // namespace bcj
