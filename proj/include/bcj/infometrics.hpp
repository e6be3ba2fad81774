#pragma once

// Information measures for discrete inputs observed through a scalar AWGN channel.
// Every output is a finite mixture of equal-variance Gaussians, so differential
// entropies are computed either by Monte Carlo with a log-sum-exp density or by
// panelled Gauss-Kronrod quadrature. All values are in bits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bcj/channel.hpp"
#include "bcj/schemes.hpp"

namespace bcj {

enum class EntropyMethod { MonteCarlo, Quadrature, Auto };

struct MixtureSpec {
    std::vector<double> means;
    std::vector<double> weights;  // nonnegative, sum to 1 within 1e-12
    double sigma = 1.0;

    static MixtureSpec uniform(std::vector<double> means, double sigma);
    void validate() const;
};

struct EntropyBudget {
    EntropyMethod method = EntropyMethod::Auto;  // Auto: quadrature when within its cap
    std::int64_t n_samples = 200'000;
    std::int64_t chunk_size = 8192;
    double tolerance = 1e-10;  // relative, per quadrature panel
    std::size_t mc_cap = 1'000'000;
    std::size_t quadrature_cap = 10'000;
    int workers = 1;
};

struct EntropyEstimate {
    double value = 0.0;      // bits
    double std_error = 0.0;  // sample standard error (MC) or accumulated error bound (quadrature)
    std::int64_t n_samples = 0;
    EntropyMethod method = EntropyMethod::Quadrature;
};

/// 0.5 * log2(2 pi e sigma^2).
double gaussian_entropy_bits(double sigma);

EntropyEstimate mixture_entropy(const MixtureSpec& spec, const EntropyBudget& budget, std::uint64_t seed);

/// One uniformly distributed discrete input entering the channel as coeff * value.
struct DiscreteInput {
    double coeff = 1.0;
    std::vector<double> values;

    static DiscreteInput pam(double coeff, int q);
};

/// Distribution of sum_i coeff_i * X_i plus N(0, sigma^2), with coincident means merged.
MixtureSpec output_mixture(std::span<const DiscreteInput> inputs, double sigma, std::size_t cap);

struct MiEstimate {
    double value = 0.0;  // bits per channel use
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    EntropyMethod method = EntropyMethod::Quadrature;
    double h_output = 0.0;       // h(Y)
    double h_conditional = 0.0;  // h(Y | designated inputs)
};

/// I(S; Y) for the first `designated` inputs S, computed as h(Y) - h(Y | S).
/// Throws CapExceeded when a mixture exceeds the budget's caps.
MiEstimate mi_discrete_input(std::span<const DiscreteInput> inputs, std::size_t designated, double sigma,
                             const EntropyBudget& budget, std::uint64_t seed);

struct RateBound {
    MiEstimate i_v_y1;
    MiEstimate i_v_y2;
    double bound = 0.0;     // max(0, I(V;Y1) - I(V;Y2))
    double h_y2_cap = 0.0;  // 0.5 log2(2 pi e (sigma2^2 + c_bar P))
};

/// Scalar-channel view seen at one receiver: discrete inputs plus the effective noise level.
struct ReceiverView {
    std::vector<DiscreteInput> inputs;  // message symbols first
    std::size_t message_streams = 0;
    double sigma = 1.0;
};

ReceiverView receiver_view(const SchemeConfig& cfg, std::span<const double> h, std::span<const double> gains,
                           double noise_sigma);

/// Single-letter secrecy rate I(V;Y1) - I(V;Y2) for the configured scheme.
/// Every Y2 estimate is checked against the Gaussian maximum-entropy cap using c_bar.
RateBound rate_lower_bound(const SchemeConfig& cfg, const ChannelRealization& ch, const EntropyBudget& budget,
                           std::uint64_t seed);

/// Secrecy capacity without helpers, clamped at zero.
double gaussian_wiretap_capacity(double h1, double g1, double p);

}  // namespace bcj
