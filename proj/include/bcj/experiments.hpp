#pragma once

// Power sweeps under the Q / a / gamma schedule and the slope fits that turn
// finite-P rates into degrees-of-freedom estimates.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcj/channel.hpp"
#include "bcj/constellation.hpp"
#include "bcj/infometrics.hpp"
#include "bcj/receiver.hpp"
#include "bcj/schemes.hpp"

namespace bcj {

struct SweepSpec {
    SchemeKind kind = SchemeKind::Blind;
    int m = 1;
    double delta = 0.05;
    std::vector<double> p_grid;
    int n_draws = 10;
    std::uint64_t seed = 1;
    int workers = 1;

    bool with_ser = true;
    bool with_rate = true;
    bool with_eve_u = false;
    TrialBudget ser_budget{};
    EntropyBudget mi_budget{};
    std::size_t lattice_cap = kDefaultLatticeCap;

    MagnitudeRange gains{};
    double sigma1 = 1.0;
    double sigma2 = 1.0;
};

struct SweepRow {
    SchemeKind kind = SchemeKind::Blind;
    int draw_id = 0;
    double p = 0.0;
    int m = 1;
    double delta = 0.0;
    int q = 1;
    double a = 0.0;
    double gamma = 0.0;
    std::optional<ErrorEstimate> ser;
    std::optional<ErrorEstimate> eve_u;
    std::optional<MiEstimate> i_vy1;
    std::optional<MiEstimate> i_vy2;
    std::optional<double> bound;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by (draw_id, p)
    std::vector<std::string> warnings;
    std::vector<double> p_grid;  // grid actually run (possibly truncated)
};

/// Channel realization used for a draw; shared by every scheme kind at the same root seed.
ChannelRealization draw_channel(const SweepSpec& spec, int draw_id);

/// Builds the transmit configuration of `kind` for one channel draw.
SchemeConfig make_scheme(SchemeKind kind, int m, double p, double delta, const ChannelRealization& ch,
                         std::uint64_t alpha_seed);

SweepResult sweep_power(const SweepSpec& spec);

/// True when q and a equal the schedule recomputed from (p, m, delta, gamma).
bool schedule_consistent(const SweepRow& row);

enum class SweepColumn { Bound, Leakage, LegitRate };

struct FitOptions {
    int skip_lowest = 0;  // drop this many of the lowest-P grid points before fitting
};

struct DofFit {
    LineFit pooled;
    std::vector<std::pair<int, LineFit>> per_draw;
};

/// Least squares of a column against 0.5 log2 P, pooled and per draw.
DofFit fit_column(std::span<const SweepRow> rows, SweepColumn column, FitOptions options = {});

inline DofFit fit_dof(std::span<const SweepRow> rows, FitOptions options = {}) {
    return fit_column(rows, SweepColumn::Bound, options);
}
inline DofFit leakage_slope(std::span<const SweepRow> rows, FitOptions options = {}) {
    return fit_column(rows, SweepColumn::Leakage, options);
}

/// (M - (2M+2) delta) / (M+1+delta).
double finite_delta_dof(int m, double delta);
/// (M+2) delta / (M+1+delta).
double leakage_coefficient(int m, double delta);

/// Median of a per-row quantity at each grid power, in grid order.
std::vector<double> median_by_p(std::span<const SweepRow> rows, std::span<const double> p_grid,
                                double (*value)(const SweepRow&));

struct SchemeComparison {
    SchemeKind kind = SchemeKind::Blind;
    DofFit dof;
    DofFit leakage;
    DofFit legit;
    std::vector<SweepRow> rows;
};

/// Rate sweeps for Blind, CsiAligned and GaussianJam on identical channel draws.
std::vector<SchemeComparison> compare_schemes(const SweepSpec& base, FitOptions options = {});

}  // namespace bcj
