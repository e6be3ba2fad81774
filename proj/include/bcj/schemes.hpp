#pragma once

// Transmit-side constructions.
//
//  Blind:       X_1 = a U_1 / h_1 + sum_k alpha_k a V_k,   X_j = a U_j / h_j.
//               Built from h and the bound c_bar only; g is never an input.
//  CsiAligned:  helpers send a U_j / h_j, the transmitter sends only message
//               streams with alpha_j = g_j / (g_1 h_j), so that V_j and U_j share
//               one dimension at the eavesdropper.
//  GaussianJam: the transmitter sends the message streams, helpers send
//               i.i.d. N(0, P) noise.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcj/rng.hpp"
#include "bcj/transmit_block.hpp"
#include "json.hpp"

namespace bcj {

enum class SchemeKind { Blind, CsiAligned, GaussianJam };

std::string_view to_string(SchemeKind kind) noexcept;
SchemeKind scheme_kind_from_string(std::string_view name);

struct SchemeConfig {
    SchemeKind kind = SchemeKind::Blind;
    int m = 1;
    double p = 1.0;
    double delta = 0.1;
    double gamma = 1.0;
    int q = 1;
    double a = 1.0;
    std::vector<double> alphas;  // alpha_2 .. alpha_{M+1}
    double c_bar = 0.0;
    bool trivial = false;  // Q was clamped up to 1 (outside the asymptotic regime)

    /// Number of integer jamming streams that reach the legitimate receiver aligned.
    int jam_streams() const noexcept;

    bool operator==(const SchemeConfig&) const = default;
};

void to_json(nlohmann::json& j, const SchemeConfig& cfg);
void from_json(const nlohmann::json& j, SchemeConfig& cfg);

/// max(1, floor(P^((1-delta) / (2 (M+1+delta))))).
int schedule_q(double p, int m, double delta);

/// Unclamped real-valued Q = P^((1-delta) / (2 (M+1+delta))).
double schedule_q_real(double p, int m, double delta);

/// min{ [1/|h_1| + sum_k |alpha_k|]^-1, |h_2|, ..., |h_{M+1}| }.
double blind_gamma(std::span<const double> h, std::span<const double> alphas);

SchemeConfig make_blind_scheme(int m, double p, double delta, std::span<const double> h, double c_bar,
                               std::uint64_t seed);

SchemeConfig make_csi_scheme(int m, double p, double delta, std::span<const double> h, std::span<const double> g,
                             std::uint64_t seed);

SchemeConfig make_gaussian_jam_scheme(int m, double p, double delta, std::span<const double> h, double c_bar,
                                      std::uint64_t seed);

/// Coefficient of each integer symbol in every channel input, in units of a:
/// row j (transmitter j) lists the weights of (v_2..v_{M+1}, u_1..u_{M+1}).
std::vector<std::vector<double>> input_coefficients(const SchemeConfig& cfg, std::span<const double> h);

/// Maps symbols to channel inputs. GaussianJam needs `jam_noise`: M standard
/// normal draws, scaled by sqrt(P) for the helpers. Throws std::out_of_range
/// when a symbol lies outside [-Q, Q].
TransmitBlock encode(const SchemeConfig& cfg, std::span<const double> h, std::span<const int> v,
                     std::span<const int> u, std::span<const double> jam_noise = {});

/// E[X_j^2] for uniform PAM symbols: a^2 Q(Q+1)/3 times the squared-coefficient sum.
std::vector<double> analytic_power(const SchemeConfig& cfg, std::span<const double> h);

/// i.i.d. uniform symbols on [-Q, Q]. For CsiAligned the unused U_1 is zero.
std::pair<std::vector<int>, std::vector<int>> sample_symbols(const SchemeConfig& cfg, Stream& rng);
std::pair<std::vector<int>, std::vector<int>> sample_symbols(const SchemeConfig& cfg, std::uint64_t seed);

}  // namespace bcj
