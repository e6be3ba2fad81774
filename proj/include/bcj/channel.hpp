#pragma once

// Gaussian wiretap channel with M helpers:
//   Y1 = sum_i h_i X_i + N1,   Y2 = sum_i g_i X_i + N2.

#include <cstdint>
#include <span>
#include <vector>

#include "bcj/transmit_block.hpp"
#include "json.hpp"

namespace bcj {

struct ChannelRealization {
    int m = 1;
    std::vector<double> h;  // gains to the legitimate receiver, size m+1
    std::vector<double> g;  // gains to the eavesdropper, size m+1
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument when the invariants do not hold.
    void validate() const;

    bool operator==(const ChannelRealization&) const = default;
};

struct PowerBudget {
    double p = 1.0;
    double c_bar = 1.0;  // known upper bound on sum_k g_k^2
};

struct MagnitudeRange {
    double lo = 0.5;
    double hi = 2.0;
};

/// Draws |gain| uniformly in `range` with an independent random sign for every h_i and g_i.
ChannelRealization sample_channel(int m, std::uint64_t seed, MagnitudeRange range = {});

double legit_output(const ChannelRealization& ch, std::span<const double> x, double noise);
double eve_output(const ChannelRealization& ch, std::span<const double> x, double noise);

/// Per-transmitter mean of X^2 over the blocks.
std::vector<double> empirical_power(std::span<const TransmitBlock> blocks);

/// Loose known bound used by the legitimate side: 2 * sum_k g_k^2.
double default_c_bar(const ChannelRealization& ch);

/// Smallest relative gap between any two eavesdropper ratios g_j/h_j and between
/// any gain and zero. Values near zero mark draws close to a degenerate set.
double degeneracy_margin(const ChannelRealization& ch);

void to_json(nlohmann::json& j, const ChannelRealization& ch);
void from_json(const nlohmann::json& j, ChannelRealization& ch);

}  // namespace bcj
