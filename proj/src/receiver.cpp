#include "bcj/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bcj/errors.hpp"
#include "bcj/parallel.hpp"
#include "bcj/rng.hpp"

namespace bcj {

ErrorEstimate ErrorEstimate::from_counts(std::int64_t trials, std::int64_t errors) {
    ErrorEstimate e;
    e.trials = trials;
    e.errors = errors;
    if (trials > 0) {
        e.rate = static_cast<double>(errors) / static_cast<double>(trials);
        e.std_error = std::sqrt(e.rate * (1.0 - e.rate) / static_cast<double>(trials));
    }
    return e;
}

ScalarLattice legit_lattice(const SchemeConfig& cfg, std::span<const double> h, std::size_t cap) {
    if (cfg.kind == SchemeKind::GaussianJam)
        throw std::invalid_argument("legit_lattice: GaussianJam has no structured receiver constellation");
    return build_receiver_lattice(h[0], cfg.alphas, cfg.a, cfg.q, cfg.jam_streams(), cap);
}

ScalarLattice eve_u_lattice(const SchemeConfig& cfg, const ChannelRealization& ch, std::size_t cap) {
    if (cfg.kind == SchemeKind::GaussianJam)
        throw std::invalid_argument("eve_u_lattice: GaussianJam jamming is not a lattice");
    std::vector<LatticeStream> streams;
    const std::size_t first = cfg.kind == SchemeKind::CsiAligned ? 1 : 0;
    for (std::size_t j = first; j < ch.h.size(); ++j) streams.push_back({ch.g[j] / ch.h[j], cfg.q});
    return ScalarLattice(cfg.a, std::move(streams), cap);
}

std::vector<int> decode_legit(double y1, const ScalarLattice& lat) {
    auto label = nearest_point(y1, lat);
    label.pop_back();
    return label;
}

std::vector<int> eve_decode_u_given_v(double y2, std::span<const int> v, const SchemeConfig& cfg,
                                      const ChannelRealization& ch, const ScalarLattice& eve_lat) {
    if (v.size() != cfg.alphas.size()) throw std::invalid_argument("eve_decode_u_given_v: v must have m symbols");
    double known = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) known += ch.g[0] * cfg.alphas[k] * (cfg.a * v[k]);
    auto u = nearest_point(y2 - known, eve_lat);
    if (cfg.kind == SchemeKind::CsiAligned) u.insert(u.begin(), 0);
    return u;
}

std::vector<int> eve_decode_u_given_v(double y2, std::span<const int> v, const SchemeConfig& cfg,
                                      const ChannelRealization& ch) {
    return eve_decode_u_given_v(y2, v, cfg, ch, eve_u_lattice(cfg, ch));
}

namespace {

struct ChunkCounts {
    std::int64_t trials = 0;
    std::int64_t errors = 0;
    std::vector<std::int64_t> stream_errors;
};

// Runs chunks round by round until the stopping rule fires. `run_chunk(c)` must be a pure
// function of the chunk index.
template <class RunChunk>
std::vector<ChunkCounts> run_rounds(const TrialBudget& budget, int workers, RunChunk&& run_chunk) {
    if (budget.chunk_size < 1 || budget.round_chunks < 1 || budget.max_trials < 1)
        throw std::invalid_argument("trial budget must be positive");
    std::vector<ChunkCounts> done;
    std::int64_t trials = 0, errors = 0;
    while (trials < budget.max_trials && errors < budget.min_errors) {
        const std::size_t base = done.size();
        std::vector<ChunkCounts> round(static_cast<std::size_t>(budget.round_chunks));
        std::vector<std::int64_t> sizes(round.size(), 0);
        std::int64_t planned = trials;
        for (std::size_t c = 0; c < round.size(); ++c) {
            sizes[c] = std::min(budget.chunk_size, budget.max_trials - planned);
            planned += sizes[c];
        }
        parallel_for(round.size(), workers, [&](std::size_t c) {
            if (sizes[c] > 0) round[c] = run_chunk(base + c, sizes[c]);
        });
        for (auto& r : round) {
            trials += r.trials;
            errors += r.errors;
            done.push_back(std::move(r));
        }
    }
    return done;
}

}  // namespace

SerResult estimate_ser(const SchemeConfig& cfg, const ChannelRealization& ch, const TrialBudget& budget,
                       std::uint64_t seed, int workers) {
    if (cfg.kind == SchemeKind::GaussianJam)
        throw std::invalid_argument("estimate_ser: requires Blind or CsiAligned scheme");
    const ScalarLattice lat = legit_lattice(cfg, ch.h);
    if (lat.collision()) throw DegenerateGains("estimate_ser: degenerate gains (receiver lattice collides)");
    const auto m = static_cast<std::size_t>(cfg.m);

    auto chunks = run_rounds(budget, workers, [&](std::size_t chunk, std::int64_t n) {
        Stream rng(seed, "ser", {chunk});
        ChunkCounts counts;
        counts.stream_errors.assign(m, 0);
        for (std::int64_t t = 0; t < n; ++t) {
            const auto [v, u] = sample_symbols(cfg, rng);
            const TransmitBlock block = encode(cfg, ch.h, v, u);
            const double y1 = legit_output(ch, block.x, ch.sigma1 * rng.normal());
            const auto vhat = decode_legit(y1, lat);
            bool wrong = false;
            for (std::size_t k = 0; k < m; ++k)
                if (vhat[k] != v[k]) {
                    ++counts.stream_errors[k];
                    wrong = true;
                }
            counts.errors += wrong ? 1 : 0;
            ++counts.trials;
        }
        return counts;
    });

    std::int64_t trials = 0, errors = 0;
    std::vector<std::int64_t> per(m, 0);
    for (const auto& c : chunks) {
        trials += c.trials;
        errors += c.errors;
        for (std::size_t k = 0; k < c.stream_errors.size(); ++k) per[k] += c.stream_errors[k];
    }
    SerResult result;
    result.block = ErrorEstimate::from_counts(trials, errors);
    for (auto e : per) result.per_stream.push_back(ErrorEstimate::from_counts(trials, e));
    return result;
}

ErrorEstimate estimate_eve_u_error(const SchemeConfig& cfg, const ChannelRealization& ch, const TrialBudget& budget,
                                   std::uint64_t seed, int workers, EveConditioning conditioning) {
    const ScalarLattice lat = eve_u_lattice(cfg, ch);
    if (lat.collision()) throw DegenerateGains("estimate_eve_u_error: degenerate gain ratios g_j/h_j");
    const int width = 2 * cfg.q + 1;

    auto chunks = run_rounds(budget, workers, [&](std::size_t chunk, std::int64_t n) {
        Stream rng(seed, "eve_u", {chunk});
        ChunkCounts counts;
        for (std::int64_t t = 0; t < n; ++t) {
            auto [v, u] = sample_symbols(cfg, rng);
            const TransmitBlock block = encode(cfg, ch.h, v, u);
            const double y2 = eve_output(ch, block.x, ch.sigma2 * rng.normal());
            if (conditioning == EveConditioning::Shifted)
                for (auto& s : v) s = (s + cfg.q + 1) % width - cfg.q;
            const auto uhat = eve_decode_u_given_v(y2, v, cfg, ch, lat);
            counts.errors += uhat != u ? 1 : 0;
            ++counts.trials;
        }
        return counts;
    });

    std::int64_t trials = 0, errors = 0;
    for (const auto& c : chunks) {
        trials += c.trials;
        errors += c.errors;
    }
    return ErrorEstimate::from_counts(trials, errors);
}

}  // namespace bcj
