#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bcj/experiments.hpp"
#include "bcj/io.hpp"
#include "bcj/rng.hpp"

namespace {

using namespace bcj;

SweepSpec small_spec() {
    SweepSpec s;
    s.m = 1;
    s.delta = 0.1;
    s.p_grid = {1e2, 1e3, 1e4};
    s.n_draws = 5;
    s.seed = 3;
    s.ser_budget.max_trials = 20'000;
    s.mi_budget.n_samples = 20'000;
    return s;
}

// Rows whose bound follows intercept + slope * 0.5 log2 P plus optional noise.
std::vector<SweepRow> planted_rows(double slope, double intercept, int draws, double noise, std::uint64_t seed) {
    std::vector<SweepRow> rows;
    Stream rng(seed, "planted");
    for (int d = 0; d < draws; ++d)
        for (double p : {1e2, 1e3, 1e4, 1e5}) {
            SweepRow r;
            r.draw_id = d;
            r.p = p;
            r.bound = intercept + slope * 0.5 * std::log2(p) + noise * rng.normal();
            rows.push_back(r);
        }
    return rows;
}

TEST(Sweep, OneRowPerDrawAndPower) {
    const auto res = sweep_power(small_spec());
    ASSERT_EQ(res.rows.size(), 15u);
    EXPECT_TRUE(res.warnings.empty());
    const int expected_q[] = {2, 4, 7};
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& r = res.rows[i];
        EXPECT_EQ(r.draw_id, static_cast<int>(i / 3));
        EXPECT_EQ(r.q, expected_q[i % 3]);
        EXPECT_TRUE(schedule_consistent(r));
        ASSERT_TRUE(r.ser && r.i_vy1 && r.i_vy2 && r.bound);
        EXPECT_GE(*r.bound, 0.0);
    }
}

TEST(Sweep, DeterministicAndWorkerIndependent) {
    auto spec = small_spec();
    spec.n_draws = 2;
    const auto a = to_csv(sweep_table(sweep_power(spec).rows));
    EXPECT_EQ(a, to_csv(sweep_table(sweep_power(spec).rows)));
    spec.workers = 3;
    EXPECT_EQ(a, to_csv(sweep_table(sweep_power(spec).rows)));
    spec.seed = 4;
    EXPECT_NE(a, to_csv(sweep_table(sweep_power(spec).rows)));
}

TEST(Sweep, ChannelsSharedAcrossSchemes) {
    auto spec = small_spec();
    const auto blind = draw_channel(spec, 2);
    spec.kind = SchemeKind::GaussianJam;
    EXPECT_EQ(draw_channel(spec, 2), blind);
    EXPECT_NE(draw_channel(spec, 3), blind);
    EXPECT_GT(degeneracy_margin(blind), 1e-6);
}

TEST(Sweep, ScheduleInconsistencyDetected) {
    auto row = sweep_power([] {
                   auto s = small_spec();
                   s.n_draws = 1;
                   s.with_ser = false;
                   s.with_rate = false;
                   return s;
               }())
                   .rows.front();
    EXPECT_TRUE(schedule_consistent(row));
    row.q += 1;
    EXPECT_FALSE(schedule_consistent(row));
}

TEST(Sweep, TruncatesGridAtLatticeCap) {
    auto spec = small_spec();
    spec.p_grid = {1e1, 1e2, 1e3, 1e4, 1e5};
    spec.with_rate = false;
    spec.n_draws = 1;
    spec.lattice_cap = 200;
    const auto res = sweep_power(spec);
    EXPECT_EQ(res.p_grid, (std::vector<double>{1e1, 1e2, 1e3}));
    ASSERT_EQ(res.warnings.size(), 1u);
    EXPECT_EQ(res.rows.size(), 3u);
}

TEST(Sweep, RejectsBadGridsAndKinds) {
    auto spec = small_spec();
    spec.p_grid = {};
    EXPECT_THROW(sweep_power(spec), std::invalid_argument);
    spec.p_grid = {1e2, 1e3};
    EXPECT_THROW(sweep_power(spec), std::invalid_argument);
    spec.p_grid = {1e2, 1e4, 1e3};
    EXPECT_THROW(sweep_power(spec), std::invalid_argument);
    spec = small_spec();
    spec.kind = SchemeKind::GaussianJam;
    EXPECT_THROW(sweep_power(spec), std::invalid_argument);
}

TEST(Sweep, BlindMedianBoundIncreasesWithPower) {
    auto spec = small_spec();
    spec.p_grid = {1e2, 1e3, 1e4, 1e5};
    spec.with_ser = false;
    spec.n_draws = 5;
    spec.seed = 1;
    const auto res = sweep_power(spec);
    const auto med = median_by_p(res.rows, res.p_grid, [](const SweepRow& r) { return *r.bound; });
    for (std::size_t i = 1; i < med.size(); ++i) EXPECT_GT(med[i], med[i - 1]) << i;
}

TEST(DofFit, RecoversPlantedSlope) {
    const auto rows = planted_rows(0.4, 1.0, 3, 0.0, 0);
    const auto fit = fit_dof(rows);
    EXPECT_NEAR(fit.pooled.slope, 0.4, 1e-12);
    EXPECT_NEAR(fit.pooled.intercept, 1.0, 1e-12);
    ASSERT_EQ(fit.per_draw.size(), 3u);
    for (const auto& [d, f] : fit.per_draw) EXPECT_NEAR(f.slope, 0.4, 1e-12);
}

TEST(DofFit, AffineInvariance) {
    const auto base = fit_dof(planted_rows(0.3, 0.0, 4, 0.05, 1)).pooled;
    auto shifted = planted_rows(0.3, 0.0, 4, 0.05, 1);
    for (auto& r : shifted) *r.bound = 2.0 * *r.bound + 5.0;
    const auto fit = fit_dof(shifted).pooled;
    EXPECT_NEAR(fit.slope, 2.0 * base.slope, 1e-10);
    EXPECT_NEAR(fit.slope_se, 2.0 * base.slope_se, 1e-10);
}

TEST(DofFit, StandardErrorShrinksWithDraws) {
    const auto few = fit_dof(planted_rows(0.4, 0.5, 5, 0.2, 2)).pooled;
    const auto many = fit_dof(planted_rows(0.4, 0.5, 20, 0.2, 2)).pooled;
    EXPECT_LT(many.slope_se, few.slope_se);
    EXPECT_NEAR(many.slope, 0.4, 4.0 * many.slope_se);
}

TEST(DofFit, SkipLowestDropsGridPoints) {
    auto rows = planted_rows(0.5, 0.0, 2, 0.0, 0);
    for (auto& r : rows)
        if (r.p == 1e2) *r.bound = 100.0;
    EXPECT_NEAR(fit_dof(rows, {1}).pooled.slope, 0.5, 1e-12);
    EXPECT_EQ(fit_dof(rows, {1}).pooled.n, 6u);
    EXPECT_THROW(fit_dof(rows, {2}), std::invalid_argument);
    EXPECT_THROW(leakage_slope(rows), std::invalid_argument);
}

TEST(DofFit, FiniteDeltaTargets) {
    EXPECT_NEAR(finite_delta_dof(1, 0.05), 0.8 / 2.05, 1e-15);
    EXPECT_NEAR(leakage_coefficient(1, 0.05), 0.15 / 2.05, 1e-15);
    EXPECT_NEAR(finite_delta_dof(2, 0.0), 2.0 / 3.0, 1e-15);
    EXPECT_EQ(leakage_coefficient(3, 0.0), 0.0);
}

TEST(MedianByP, OddAndEvenCounts) {
    auto rows = planted_rows(0.0, 0.0, 4, 0.0, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) *rows[i].bound = static_cast<double>(rows[i].draw_id);
    const std::vector<double> grid{1e2, 1e3};
    const auto med = median_by_p(rows, grid, [](const SweepRow& r) { return *r.bound; });
    EXPECT_EQ(med, (std::vector<double>{1.5, 1.5}));
    const std::vector<double> missing{7.0};
    EXPECT_THROW(median_by_p(rows, missing, [](const SweepRow& r) { return *r.bound; }), std::invalid_argument);
}

TEST(Compare, AllKindsOnSameDraws) {
    auto spec = small_spec();
    spec.n_draws = 2;
    spec.p_grid = {1e2, 1e3, 1e4};
    const auto cmp = compare_schemes(spec);
    ASSERT_EQ(cmp.size(), 3u);
    EXPECT_EQ(cmp[0].kind, SchemeKind::Blind);
    EXPECT_EQ(cmp[1].kind, SchemeKind::CsiAligned);
    EXPECT_EQ(cmp[2].kind, SchemeKind::GaussianJam);
    for (const auto& c : cmp) {
        EXPECT_EQ(c.rows.size(), 6u);
        EXPECT_EQ(c.dof.pooled.n, 6u);
    }
}

}  // namespace
