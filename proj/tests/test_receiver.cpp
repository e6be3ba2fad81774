#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bcj/channel.hpp"
#include "bcj/receiver.hpp"
#include "bcj/rng.hpp"
#include "bcj/schemes.hpp"

namespace {

using namespace bcj;

struct Setup {
    ChannelRealization ch;
    SchemeConfig cfg;
};

Setup blind_setup(int m, double p, std::uint64_t seed, double sigma = 1.0) {
    Setup s;
    s.ch = sample_channel(m, seed);
    s.ch.sigma1 = s.ch.sigma2 = sigma;
    s.cfg = make_blind_scheme(m, p, 0.1, s.ch.h, default_c_bar(s.ch), seed);
    return s;
}

// Exhaustive minimum-distance search over every (v, s) pair.
std::vector<int> brute_force_v(double y, const SchemeConfig& cfg, double h1, std::size_t jam_streams) {
    const int q = cfg.q;
    const auto m = static_cast<std::size_t>(cfg.m);
    const int s_range = static_cast<int>(jam_streams) * q;
    std::vector<int> v(m, -q), best;
    double best_dist = std::numeric_limits<double>::infinity();
    while (true) {
        double base = 0.0;
        for (std::size_t k = 0; k < m; ++k) base += h1 * cfg.alphas[k] * v[k];
        for (int s = -s_range; s <= s_range; ++s) {
            const double d = std::abs(y - cfg.a * (base + s));
            if (d < best_dist) {
                best_dist = d;
                best = v;
            }
        }
        std::size_t k = 0;
        while (k < m && v[k] == q) v[k++] = -q;
        if (k == m) break;
        ++v[k];
    }
    return best;
}

TEST(LegitDecoder, ExactAndPerturbedPoints) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto s = blind_setup(1 + static_cast<int>(seed % 2), 1e3, seed);
        const auto lat = legit_lattice(s.cfg, s.ch.h);
        ASSERT_FALSE(lat.collision());
        const double d = min_distance(lat);
        Stream rng(seed, "perturb");
        for (int t = 0; t < 2000; ++t) {
            const auto [v, u] = sample_symbols(s.cfg, rng);
            const auto block = encode(s.cfg, s.ch.h, v, u);
            const double y = legit_output(s.ch, block.x, 0.0);
            ASSERT_EQ(decode_legit(y, lat), v);
            const double shift = rng.uniform(-0.49, 0.49) * d;
            ASSERT_EQ(decode_legit(y + shift, lat), v);
        }
    }
}

TEST(LegitDecoder, MatchesExhaustiveSearch) {
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        auto s = blind_setup(2, 1e4, seed);
        const auto lat = legit_lattice(s.cfg, s.ch.h);
        const auto jam = static_cast<std::size_t>(s.cfg.jam_streams());
        Stream rng(seed, "queries");
        const double span = s.cfg.a * s.cfg.q * 8.0;
        for (int t = 0; t < 300; ++t) {
            const double y = rng.uniform(-span, span);
            ASSERT_EQ(decode_legit(y, lat), brute_force_v(y, s.cfg, s.ch.h[0], jam)) << y;
        }
    }
}

TEST(Ser, ZeroNoiseGivesZeroErrors) {
    auto s = blind_setup(1, 1e3, 3, 0.0);
    TrialBudget budget;
    budget.max_trials = 20'000;
    const auto r = estimate_ser(s.cfg, s.ch, budget, 1);
    EXPECT_EQ(r.block.errors, 0);
    EXPECT_GE(r.block.trials, 20'000);
    ASSERT_EQ(r.per_stream.size(), 1u);
    EXPECT_EQ(r.per_stream[0].errors, 0);
}

TEST(Ser, IndependentOfWorkerCount) {
    auto s = blind_setup(2, 1e3, 5);
    TrialBudget budget;
    budget.max_trials = 100'000;
    const auto a = estimate_ser(s.cfg, s.ch, budget, 9, 1);
    const auto b = estimate_ser(s.cfg, s.ch, budget, 9, 3);
    EXPECT_EQ(a.block, b.block);
    EXPECT_EQ(a.per_stream, b.per_stream);
    EXPECT_NE(a.block, estimate_ser(s.cfg, s.ch, budget, 10, 1).block);
}

TEST(Ser, StopsAfterRoundOnceErrorsSeen) {
    auto s = blind_setup(1, 1e3, 2, 50.0);
    TrialBudget budget;
    const auto r = estimate_ser(s.cfg, s.ch, budget, 0);
    EXPECT_EQ(r.block.trials, budget.chunk_size * budget.round_chunks);
    EXPECT_GE(r.block.errors, budget.min_errors);
}

TEST(Ser, BelowNearestNeighbourBound) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto s = blind_setup(1, 1e3, seed);
        const auto lat = legit_lattice(s.cfg, s.ch.h);
        const double d = min_distance(lat);
        for (double ratio : {3.0, 4.0, 5.0}) {
            s.ch.sigma1 = d / ratio;
            TrialBudget budget;
            budget.min_errors = 1'000'000;
            budget.max_trials = 200'000;
            const auto r = estimate_ser(s.cfg, s.ch, budget, seed);
            // Leaving the Voronoi cell needs |N| > d/2 on one side: 2 Q(d / 2 sigma) <= exp(-d^2 / 8 sigma^2).
            const double bound = std::exp(-ratio * ratio / 8.0);
            EXPECT_LE(r.block.rate, bound + 3.0 * r.block.std_error) << seed << " " << ratio;
        }
    }
}

TEST(Ser, RejectsGaussianJam) {
    const auto ch = sample_channel(1, 0);
    const auto cfg = make_gaussian_jam_scheme(1, 1e3, 0.1, ch.h, default_c_bar(ch), 0);
    EXPECT_THROW(estimate_ser(cfg, ch, TrialBudget{}, 0), std::invalid_argument);
}

TEST(EveDecoder, RecoversJammingAtZeroNoise) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const int m = 1 + static_cast<int>(seed % 3);
        auto ch = sample_channel(m, seed);
        for (const auto& cfg :
             {make_blind_scheme(m, 1e3, 0.1, ch.h, default_c_bar(ch), seed), make_csi_scheme(m, 1e3, 0.1, ch.h, ch.g, seed)}) {
            Stream rng(seed, "eve");
            for (int t = 0; t < 500; ++t) {
                const auto [v, u] = sample_symbols(cfg, rng);
                const auto block = encode(cfg, ch.h, v, u);
                ASSERT_EQ(eve_decode_u_given_v(eve_output(ch, block.x, 0.0), v, cfg, ch), u);
            }
        }
    }
}

TEST(EveDecoder, ShiftedConditioningAlmostAlwaysFails) {
    auto s = blind_setup(1, 1e5, 4, 1.0);
    TrialBudget budget;
    budget.max_trials = 50'000;
    const auto right = estimate_eve_u_error(s.cfg, s.ch, budget, 2, 1, EveConditioning::True);
    const auto wrong = estimate_eve_u_error(s.cfg, s.ch, budget, 2, 1, EveConditioning::Shifted);
    EXPECT_LT(right.rate, wrong.rate);
    EXPECT_GT(wrong.rate, 0.9);
}

TEST(ErrorEstimate, BinomialStandardError) {
    const auto e = ErrorEstimate::from_counts(400, 100);
    EXPECT_DOUBLE_EQ(e.rate, 0.25);
    EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(0.25 * 0.75 / 400.0));
    EXPECT_EQ(ErrorEstimate::from_counts(0, 0).rate, 0.0);
}

}  // namespace
