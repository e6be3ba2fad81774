#include "bcj/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bcj/rng.hpp"

namespace bcj {

namespace {

double combine(std::span<const double> gains, std::span<const double> x, double noise) {
    if (x.size() != gains.size())
        throw std::invalid_argument("channel input length " + std::to_string(x.size()) + " != " +
                                    std::to_string(gains.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += gains[i] * x[i];
    return acc + noise;
}

}  // namespace

void ChannelRealization::validate() const {
    if (m < 1) throw std::invalid_argument("helper count m must be >= 1");
    const auto n = static_cast<std::size_t>(m) + 1;
    if (h.size() != n || g.size() != n) throw std::invalid_argument("gain vectors must have length m+1");
    for (std::size_t i = 0; i < n; ++i) {
        if (h[i] == 0.0 || g[i] == 0.0 || !std::isfinite(h[i]) || !std::isfinite(g[i]))
            throw std::invalid_argument("channel gains must be finite and nonzero");
    }
    if (!(sigma1 >= 0.0) || !(sigma2 >= 0.0)) throw std::invalid_argument("noise deviations must be >= 0");
}

ChannelRealization sample_channel(int m, std::uint64_t seed, MagnitudeRange range) {
    if (m < 1) throw std::invalid_argument("sample_channel: m must be >= 1 (m = 0 has a closed form)");
    if (!(range.lo > 0.0) || !(range.hi >= range.lo))
        throw std::invalid_argument("sample_channel: magnitude range must satisfy 0 < lo <= hi");

    ChannelRealization ch;
    ch.m = m;
    ch.seed = seed;
    Stream rng(seed, "channel");
    auto draw = [&] {
        const double mag = rng.uniform(range.lo, range.hi);
        return rng.coin() ? mag : -mag;
    };
    const auto n = static_cast<std::size_t>(m) + 1;
    ch.h.resize(n);
    ch.g.resize(n);
    for (std::size_t i = 0; i < n; ++i) ch.h[i] = draw();
    for (std::size_t i = 0; i < n; ++i) ch.g[i] = draw();
    return ch;
}

double legit_output(const ChannelRealization& ch, std::span<const double> x, double noise) {
    return combine(ch.h, x, noise);
}

double eve_output(const ChannelRealization& ch, std::span<const double> x, double noise) {
    return combine(ch.g, x, noise);
}

std::vector<double> empirical_power(std::span<const TransmitBlock> blocks) {
    if (blocks.empty()) throw std::invalid_argument("empirical_power: empty block sequence");
    std::vector<double> acc(blocks.front().x.size(), 0.0);
    for (const auto& b : blocks) {
        if (b.x.size() != acc.size()) throw std::invalid_argument("empirical_power: ragged blocks");
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += b.x[j] * b.x[j];
    }
    for (auto& a : acc) a /= static_cast<double>(blocks.size());
    return acc;
}

double default_c_bar(const ChannelRealization& ch) {
    double s = 0.0;
    for (double gk : ch.g) s += gk * gk;
    return 2.0 * s;
}

double degeneracy_margin(const ChannelRealization& ch) {
    double margin = std::numeric_limits<double>::infinity();
    std::vector<double> ratios;
    for (std::size_t i = 0; i < ch.h.size(); ++i) {
        margin = std::min({margin, std::abs(ch.h[i]), std::abs(ch.g[i])});
        ratios.push_back(ch.g[i] / ch.h[i]);
    }
    for (std::size_t i = 0; i < ratios.size(); ++i)
        for (std::size_t j = i + 1; j < ratios.size(); ++j) {
            const double scale = std::max(std::abs(ratios[i]), std::abs(ratios[j]));
            margin = std::min(margin, std::abs(std::abs(ratios[i]) - std::abs(ratios[j])) / scale);
        }
    return margin;
}

void to_json(nlohmann::json& j, const ChannelRealization& ch) {
    j = nlohmann::json{{"m", ch.m},           {"h", ch.h},           {"g", ch.g},
                       {"sigma1", ch.sigma1}, {"sigma2", ch.sigma2}, {"seed", ch.seed}};
}

void from_json(const nlohmann::json& j, ChannelRealization& ch) {
    j.at("m").get_to(ch.m);
    j.at("h").get_to(ch.h);
    j.at("g").get_to(ch.g);
    ch.sigma1 = j.value("sigma1", 1.0);
    ch.sigma2 = j.value("sigma2", 1.0);
    ch.seed = j.value("seed", std::uint64_t{0});
    ch.validate();
}

}  // namespace bcj
