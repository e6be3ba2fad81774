#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "bcj/channel.hpp"
#include "bcj/errors.hpp"
#include "bcj/infometrics.hpp"
#include "bcj/rng.hpp"
#include "bcj/schemes.hpp"

namespace {

using namespace bcj;

double mixture_pdf(double y, const std::vector<double>& means, const std::vector<double>& weights, double sigma) {
    double f = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) {
        const double z = (y - means[i]) / sigma;
        f += weights[i] * std::exp(-0.5 * z * z);
    }
    return f / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

template <class F>
double simpson(F&& f, double lo, double hi, int intervals) {
    const double step = (hi - lo) / intervals;
    double s = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * step);
    return s * step / 3.0;
}

// Composite Simpson integration of -f log2 f on a fine uniform grid.
double simpson_entropy(const std::vector<double>& means, const std::vector<double>& weights, double sigma) {
    const auto [lo_it, hi_it] = std::minmax_element(means.begin(), means.end());
    const double lo = *lo_it - 14.0 * sigma, hi = *hi_it + 14.0 * sigma;
    const int n = 2 * static_cast<int>((hi - lo) / sigma * 200.0);
    return simpson(
        [&](double y) {
            const double f = mixture_pdf(y, means, weights, sigma);
            return f > 0.0 ? -f * std::log2(f) : 0.0;
        },
        lo, hi, n);
}

EntropyBudget quadrature() {
    EntropyBudget b;
    b.method = EntropyMethod::Quadrature;
    return b;
}

EntropyBudget monte_carlo(std::int64_t n = 200'000) {
    EntropyBudget b;
    b.method = EntropyMethod::MonteCarlo;
    b.n_samples = n;
    return b;
}

MixtureSpec random_mixture(std::size_t k, std::uint64_t seed) {
    Stream rng(seed, "mixture");
    std::vector<double> means(k), weights(k);
    for (auto& m : means) m = rng.uniform(-20.0, 20.0);
    for (auto& w : weights) w = rng.uniform(0.1, 1.0);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) w /= total;
    return {means, weights, rng.uniform(0.3, 3.0)};
}

TEST(MixtureEntropy, SingleGaussianClosedForm) {
    EXPECT_NEAR(gaussian_entropy_bits(1.0), 2.0471, 1e-4);
    const auto spec = MixtureSpec::uniform({3.0}, 1.0);
    for (auto method : {EntropyMethod::Quadrature, EntropyMethod::MonteCarlo}) {
        EntropyBudget b;
        b.method = method;
        EXPECT_NEAR(mixture_entropy(spec, b, 0).value, 2.0471, 1e-3);
    }
    EXPECT_NEAR(gaussian_entropy_bits(4.0), gaussian_entropy_bits(1.0) + 2.0, 1e-12);
}

TEST(MixtureEntropy, WellSeparatedPairMatchesSimpson) {
    const auto spec = MixtureSpec::uniform({-10.0, 10.0}, 1.0);
    const double oracle = simpson_entropy(spec.means, spec.weights, 1.0);
    EXPECT_NEAR(oracle, 1.0 + gaussian_entropy_bits(1.0), 1e-9);
    EXPECT_NEAR(mixture_entropy(spec, quadrature(), 0).value, oracle, 1e-6);
}

TEST(MixtureEntropy, QuadratureMatchesSimpsonOnOverlappingMixtures) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto spec = random_mixture(8, seed);
        const auto est = mixture_entropy(spec, quadrature(), 0);
        EXPECT_NEAR(est.value, simpson_entropy(spec.means, spec.weights, spec.sigma), 1e-6) << seed;
        EXPECT_LT(est.std_error, 1e-6);
    }
}

TEST(MixtureEntropy, MonteCarloAgreesWithQuadrature) {
    int outside = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto spec = random_mixture(25, 100 + seed);
        const auto q = mixture_entropy(spec, quadrature(), 0);
        const auto mc = mixture_entropy(spec, monte_carlo(), seed);
        EXPECT_GT(mc.std_error, 0.0);
        EXPECT_EQ(mc.n_samples, 200'000);
        if (std::abs(mc.value - q.value) > 3.0 * mc.std_error) ++outside;
    }
    // 20 draws at the 3-sigma level: more than one excursion is ~0.1% likely.
    EXPECT_LE(outside, 1);
}

TEST(MixtureEntropy, MonteCarloIndependentOfWorkers) {
    const auto spec = random_mixture(25, 3);
    auto b1 = monte_carlo(50'000);
    auto b3 = b1;
    b3.workers = 3;
    const auto e1 = mixture_entropy(spec, b1, 1), e3 = mixture_entropy(spec, b3, 1);
    EXPECT_EQ(e1.value, e3.value);
    EXPECT_EQ(e1.std_error, e3.std_error);
}

TEST(MixtureEntropy, InvariantUnderPermutationAndTranslation) {
    auto spec = random_mixture(12, 7);
    const double base = mixture_entropy(spec, quadrature(), 0).value;
    auto permuted = spec;
    std::reverse(permuted.means.begin(), permuted.means.end());
    std::reverse(permuted.weights.begin(), permuted.weights.end());
    EXPECT_NEAR(mixture_entropy(permuted, quadrature(), 0).value, base, 1e-9);
    auto shifted = spec;
    for (auto& m : shifted.means) m += 123.5;
    EXPECT_NEAR(mixture_entropy(shifted, quadrature(), 0).value, base, 1e-9);
}

TEST(MixtureEntropy, BoundsAndMonotoneInSigma) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto spec = random_mixture(10, 200 + seed);
        double prev = -1e300;
        for (double sigma : {0.1, 0.3, 1.0, 3.0, 10.0}) {
            spec.sigma = sigma;
            const double h = mixture_entropy(spec, quadrature(), 0).value;
            EXPECT_GE(h, prev - 1e-9);
            prev = h;
            double mean = 0.0, var = 0.0, hw = 0.0;
            for (std::size_t i = 0; i < spec.means.size(); ++i) mean += spec.weights[i] * spec.means[i];
            for (std::size_t i = 0; i < spec.means.size(); ++i) {
                var += spec.weights[i] * (spec.means[i] - mean) * (spec.means[i] - mean);
                hw -= spec.weights[i] * std::log2(spec.weights[i]);
            }
            EXPECT_GE(h, gaussian_entropy_bits(sigma) - 1e-9);
            EXPECT_LE(h, gaussian_entropy_bits(sigma) + hw + 1e-9);
            EXPECT_LE(h, 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * (sigma * sigma + var)) + 1e-9);
        }
    }
}

TEST(MixtureEntropy, RejectsInvalidSpecsAndCaps) {
    EXPECT_THROW(mixture_entropy(MixtureSpec::uniform({0.0}, 0.0), quadrature(), 0), std::invalid_argument);
    MixtureSpec bad{{0.0, 1.0}, {0.3, 0.3}, 1.0};
    EXPECT_THROW(mixture_entropy(bad, quadrature(), 0), std::invalid_argument);
    std::vector<double> many(20'000);
    std::iota(many.begin(), many.end(), 0.0);
    EXPECT_THROW(mixture_entropy(MixtureSpec::uniform(many, 1.0), quadrature(), 0), CapExceeded);
    EntropyBudget small = monte_carlo(1000);
    small.mc_cap = 100;
    EXPECT_THROW(mixture_entropy(MixtureSpec::uniform(many, 1.0), small, 0), CapExceeded);
    EntropyBudget autob;
    EXPECT_EQ(mixture_entropy(MixtureSpec::uniform(many, 1.0), [] {
                  EntropyBudget b;
                  b.n_samples = 2000;
                  return b;
              }(), 0).method,
              EntropyMethod::MonteCarlo);
    EXPECT_EQ(mixture_entropy(MixtureSpec::uniform({0.0, 1.0}, 1.0), autob, 0).method, EntropyMethod::Quadrature);
}

TEST(OutputMixture, MergesCoincidentMeans) {
    const std::vector<DiscreteInput> inputs{DiscreteInput::pam(1.0, 1), DiscreteInput::pam(1.0, 1)};
    const auto spec = output_mixture(inputs, 1.0, 1000);
    ASSERT_EQ(spec.means.size(), 5u);
    const std::vector<double> expected{1.0 / 9, 2.0 / 9, 3.0 / 9, 2.0 / 9, 1.0 / 9};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(spec.means[i], -2.0 + static_cast<double>(i), 1e-12);
        EXPECT_NEAR(spec.weights[i], expected[i], 1e-12);
    }
    EXPECT_THROW(output_mixture(inputs, 1.0, 4), CapExceeded);
}

TEST(MutualInformation, ConstantInputCarriesNothing) {
    const std::vector<DiscreteInput> inputs{DiscreteInput::pam(1.0, 0), DiscreteInput::pam(0.7, 3)};
    const auto mi = mi_discrete_input(inputs, 1, 1.0, quadrature(), 0);
    EXPECT_NEAR(mi.value, 0.0, 1e-9);
}

TEST(MutualInformation, NoiselessLimit) {
    const std::vector<DiscreteInput> inputs{DiscreteInput::pam(100.0, 2)};
    EXPECT_NEAR(mi_discrete_input(inputs, 1, 1.0, quadrature(), 0).value, std::log2(5.0), 1e-3);
}

TEST(MutualInformation, VanishesWithHugeNoise) {
    const std::vector<DiscreteInput> inputs{DiscreteInput::pam(1.0, 2)};
    EXPECT_LT(mi_discrete_input(inputs, 1, 1e4, quadrature(), 0).value, 1e-6);
}

TEST(MutualInformation, MatchesPosteriorFormOracle) {
    // I(V;Y) = sum_v P(v) KL(f(.|v) || f), integrated directly with Simpson.
    const double sigma = 0.5, cv = 1.0, cu = 0.7;
    const std::vector<DiscreteInput> inputs{DiscreteInput::pam(cv, 1), DiscreteInput::pam(cu, 1)};
    const auto mi = mi_discrete_input(inputs, 1, sigma, quadrature(), 0);

    std::vector<double> all_means, all_w(9, 1.0 / 9);
    for (int v = -1; v <= 1; ++v)
        for (int u = -1; u <= 1; ++u) all_means.push_back(cv * v + cu * u);
    double oracle = 0.0;
    for (int v = -1; v <= 1; ++v) {
        const std::vector<double> cm{cv * v - cu, cv * v, cv * v + cu}, cw(3, 1.0 / 3);
        oracle += simpson(
                      [&](double y) {
                          const double fc = mixture_pdf(y, cm, cw, sigma);
                          return fc > 0.0 ? fc * std::log2(fc / mixture_pdf(y, all_means, all_w, sigma)) : 0.0;
                      },
                      -10.0, 10.0, 40'000) /
                  3.0;
    }
    EXPECT_NEAR(mi.value, oracle, 1e-6);
    EXPECT_GT(mi.value, 0.0);
    EXPECT_LT(mi.value, std::log2(3.0));
}

TEST(MutualInformation, WithinEntropyAndCapacityCaps) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Stream rng(seed, "mi-caps");
        const int q = 1 + static_cast<int>(rng.uniform_int(0, 3));
        const double c1 = rng.uniform(0.2, 3.0), c2 = rng.uniform(0.2, 3.0);
        const double sigma = rng.uniform(0.2, 2.0);
        const std::vector<DiscreteInput> inputs{DiscreteInput::pam(c1, q), DiscreteInput::pam(c2, q)};
        const auto mi = mi_discrete_input(inputs, 1, sigma, quadrature(), 0);
        const double var = (c1 * c1 + c2 * c2) * q * (q + 1) / 3.0;
        EXPECT_GE(mi.value, -3.0 * mi.std_error - 1e-9);
        EXPECT_LE(mi.value, std::log2(2.0 * q + 1.0) + 1e-9);
        EXPECT_LE(mi.value, 0.5 * std::log2(1.0 + var / (sigma * sigma)) + 1e-9);
    }
}

TEST(MutualInformation, RefusesOversizedMixtures) {
    const std::vector<DiscreteInput> inputs{DiscreteInput::pam(1.0, 30), DiscreteInput::pam(0.37, 30),
                                            DiscreteInput::pam(0.71, 30)};
    try {
        mi_discrete_input(inputs, 1, 1.0, quadrature(), 0);
        FAIL() << "expected CapExceeded";
    } catch (const CapExceeded& e) {
        EXPECT_GT(e.requested(), e.cap());
    }
}

TEST(RateBound, SymmetricAlignedGeometryGivesNoSecrecy) {
    auto ch = sample_channel(1, 5);
    ch.g = ch.h;
    const auto cfg = make_csi_scheme(1, 1e3, 0.1, ch.h, ch.g, 0);
    const auto rb = rate_lower_bound(cfg, ch, quadrature(), 0);
    EXPECT_NEAR(rb.bound, 0.0, 1e-6);
}

TEST(RateBound, BlindLeakageStaysBelowMessageEntropy) {
    const auto ch = sample_channel(1, 11);
    const auto cfg = make_blind_scheme(1, 1e4, 0.1, ch.h, default_c_bar(ch), 11);
    const auto rb = rate_lower_bound(cfg, ch, EntropyBudget{}, 0);
    EXPECT_GE(rb.bound, 0.0);
    EXPECT_EQ(rb.bound, std::max(0.0, rb.i_v_y1.value - rb.i_v_y2.value));
    EXPECT_LE(rb.i_v_y2.h_output, rb.h_y2_cap);
    EXPECT_LT(rb.i_v_y2.value, rb.i_v_y1.value);
}

TEST(RateBound, GaussianJamUsesEffectiveNoise) {
    const auto ch = sample_channel(1, 2);
    const auto cfg = make_gaussian_jam_scheme(1, 1e3, 0.1, ch.h, default_c_bar(ch), 0);
    const auto view = receiver_view(cfg, ch.h, ch.h, ch.sigma1);
    const double expected = std::sqrt(ch.sigma1 * ch.sigma1 + 1e3 * ch.h[1] * ch.h[1]);
    EXPECT_NEAR(view.sigma, expected, 1e-12 * expected);
    EXPECT_EQ(view.message_streams, 1u);
    EXPECT_EQ(view.inputs.size(), 1u);
}

TEST(WiretapCapacity, ClosedForm) {
    EXPECT_EQ(gaussian_wiretap_capacity(1.3, 1.3, 10.0), 0.0);
    EXPECT_NEAR(gaussian_wiretap_capacity(std::sqrt(3.0), 1.0, 1.0), 0.5, 1e-12);
    EXPECT_EQ(gaussian_wiretap_capacity(0.5, 1.0, 10.0), 0.0);
    const double limit = std::log2(2.0 / 0.7);
    EXPECT_NEAR(gaussian_wiretap_capacity(2.0, 0.7, 1e12), limit, 1e-6);
    EXPECT_LT(gaussian_wiretap_capacity(2.0, 0.7, 1e6), limit);
}

}  // namespace
