#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcj/channel.hpp"
#include "bcj/constellation.hpp"
#include "bcj/schemes.hpp"

namespace bcj {

struct ErrorEstimate {
    std::int64_t trials = 0;
    std::int64_t errors = 0;
    double rate = 0.0;
    double std_error = 0.0;  // binomial

    static ErrorEstimate from_counts(std::int64_t trials, std::int64_t errors);
    bool operator==(const ErrorEstimate&) const = default;
};

/// Monte Carlo stopping rule. Trials run in fixed chunks; after every round of
/// `round_chunks` chunks the run stops once `min_errors` errors were observed or
/// `max_trials` trials were spent. The rule depends only on chunk indices, so the
/// result does not depend on the worker count.
struct TrialBudget {
    std::int64_t max_trials = 1'000'000;
    std::int64_t min_errors = 100;
    std::int64_t chunk_size = 4096;
    int round_chunks = 16;
};

struct SerResult {
    ErrorEstimate block;                   // any v_k wrong
    std::vector<ErrorEstimate> per_stream; // v_k wrong, for each k
};

/// The scalar constellation of (V, aligned jamming sum) at the legitimate receiver.
ScalarLattice legit_lattice(const SchemeConfig& cfg, std::span<const double> h,
                            std::size_t cap = kDefaultLatticeCap);

/// The constellation of the jamming symbols at the eavesdropper once V is known:
/// coefficients g_j / h_j, labels u (U_1 is absent for CsiAligned).
ScalarLattice eve_u_lattice(const SchemeConfig& cfg, const ChannelRealization& ch,
                            std::size_t cap = kDefaultLatticeCap);

/// Minimum-distance estimate of V from Y1; the jamming-sum component is discarded.
std::vector<int> decode_legit(double y1, const ScalarLattice& lat);

/// Estimate of U from Y2 given V. Returns M+1 symbols (U_1 = 0 for CsiAligned).
std::vector<int> eve_decode_u_given_v(double y2, std::span<const int> v, const SchemeConfig& cfg,
                                      const ChannelRealization& ch, const ScalarLattice& eve_lat);
std::vector<int> eve_decode_u_given_v(double y2, std::span<const int> v, const SchemeConfig& cfg,
                                      const ChannelRealization& ch);

SerResult estimate_ser(const SchemeConfig& cfg, const ChannelRealization& ch, const TrialBudget& budget,
                       std::uint64_t seed, int workers = 1);

enum class EveConditioning {
    True,     // decoder is given the transmitted V
    Shifted,  // decoder is given every V_k moved one step cyclically (always wrong)
};

/// Block error rate of eve_decode_u_given_v over random symbols and noise.
ErrorEstimate estimate_eve_u_error(const SchemeConfig& cfg, const ChannelRealization& ch, const TrialBudget& budget,
                                   std::uint64_t seed, int workers = 1,
                                   EveConditioning conditioning = EveConditioning::True);

}  // namespace bcj
