#include "bcj/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcj {

std::string_view to_string(SchemeKind kind) noexcept {
    switch (kind) {
        case SchemeKind::Blind: return "blind";
        case SchemeKind::CsiAligned: return "csi_aligned";
        case SchemeKind::GaussianJam: return "gaussian_jam";
    }
    return "unknown";
}

SchemeKind scheme_kind_from_string(std::string_view name) {
    if (name == "blind") return SchemeKind::Blind;
    if (name == "csi_aligned") return SchemeKind::CsiAligned;
    if (name == "gaussian_jam") return SchemeKind::GaussianJam;
    throw std::invalid_argument("unknown scheme kind '" + std::string(name) + "'");
}

int SchemeConfig::jam_streams() const noexcept {
    switch (kind) {
        case SchemeKind::Blind: return m + 1;
        case SchemeKind::CsiAligned: return m;
        case SchemeKind::GaussianJam: return 0;
    }
    return 0;
}

void to_json(nlohmann::json& j, const SchemeConfig& cfg) {
    j = nlohmann::json{{"kind", std::string(to_string(cfg.kind))},
                       {"m", cfg.m},
                       {"p", cfg.p},
                       {"delta", cfg.delta},
                       {"gamma", cfg.gamma},
                       {"q", cfg.q},
                       {"a", cfg.a},
                       {"alphas", cfg.alphas},
                       {"c_bar", cfg.c_bar},
                       {"trivial", cfg.trivial}};
}

void from_json(const nlohmann::json& j, SchemeConfig& cfg) {
    cfg.kind = scheme_kind_from_string(j.at("kind").get<std::string>());
    j.at("m").get_to(cfg.m);
    j.at("p").get_to(cfg.p);
    j.at("delta").get_to(cfg.delta);
    j.at("gamma").get_to(cfg.gamma);
    j.at("q").get_to(cfg.q);
    j.at("a").get_to(cfg.a);
    j.at("alphas").get_to(cfg.alphas);
    cfg.c_bar = j.value("c_bar", 0.0);
    cfg.trivial = j.value("trivial", false);
}

double schedule_q_real(double p, int m, double delta) {
    return std::pow(p, (1.0 - delta) / (2.0 * (m + 1 + delta)));
}

int schedule_q(double p, int m, double delta) {
    // The small offset keeps exact powers (e.g. 8.0 computed as 7.999...) on the right side of the floor.
    const double q = std::floor(schedule_q_real(p, m, delta) * (1.0 + 1e-12));
    return std::max(1, static_cast<int>(q));
}

double blind_gamma(std::span<const double> h, std::span<const double> alphas) {
    double denom = 1.0 / std::abs(h[0]);
    for (double al : alphas) denom += std::abs(al);
    double gamma = 1.0 / denom;
    for (std::size_t j = 1; j < h.size(); ++j) gamma = std::min(gamma, std::abs(h[j]));
    return gamma;
}

namespace {

void check_common(int m, double p, double delta, std::span<const double> h) {
    if (m < 1) throw std::invalid_argument("scheme: m must be >= 1");
    if (!(p > 0.0)) throw std::invalid_argument("scheme: power P must be > 0");
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("scheme: delta must lie in (0, 0.5)");
    if (h.size() != static_cast<std::size_t>(m) + 1) throw std::invalid_argument("scheme: h must have m+1 gains");
    for (double hi : h)
        if (hi == 0.0) throw std::invalid_argument("scheme: legitimate gains must be nonzero");
}

std::vector<double> draw_alphas(int m, std::uint64_t seed) {
    Stream rng(seed, "alpha");
    std::vector<double> alphas(static_cast<std::size_t>(m));
    for (auto& al : alphas) {
        al = rng.uniform(0.5, 1.5);
        if (rng.coin()) al = -al;
    }
    return alphas;
}

void apply_schedule(SchemeConfig& cfg) {
    cfg.trivial = schedule_q_real(cfg.p, cfg.m, cfg.delta) < 1.0;
    cfg.q = schedule_q(cfg.p, cfg.m, cfg.delta);
    cfg.a = cfg.gamma * std::sqrt(cfg.p) / cfg.q;
}

}  // namespace

SchemeConfig make_blind_scheme(int m, double p, double delta, std::span<const double> h, double c_bar,
                               std::uint64_t seed) {
    check_common(m, p, delta, h);
    SchemeConfig cfg;
    cfg.kind = SchemeKind::Blind;
    cfg.m = m;
    cfg.p = p;
    cfg.delta = delta;
    cfg.c_bar = c_bar;
    cfg.alphas = draw_alphas(m, seed);
    cfg.gamma = blind_gamma(h, cfg.alphas);
    apply_schedule(cfg);
    return cfg;
}

SchemeConfig make_csi_scheme(int m, double p, double delta, std::span<const double> h, std::span<const double> g,
                             std::uint64_t /*seed*/) {
    check_common(m, p, delta, h);
    if (g.size() != h.size()) throw std::invalid_argument("make_csi_scheme: g must have m+1 gains");
    if (g[0] == 0.0) throw std::invalid_argument("make_csi_scheme: g_1 must be nonzero");
    SchemeConfig cfg;
    cfg.kind = SchemeKind::CsiAligned;
    cfg.m = m;
    cfg.p = p;
    cfg.delta = delta;
    for (double gk : g) cfg.c_bar += gk * gk;
    cfg.alphas.resize(static_cast<std::size_t>(m));
    double coeff_sum = 0.0;
    for (std::size_t j = 1; j < h.size(); ++j) {
        cfg.alphas[j - 1] = g[j] / (g[0] * h[j]);
        coeff_sum += std::abs(cfg.alphas[j - 1]);
    }
    // X_1 carries only the message streams here, so the 1/|h_1| term drops out of the power rule.
    cfg.gamma = 1.0 / coeff_sum;
    for (std::size_t j = 1; j < h.size(); ++j) cfg.gamma = std::min(cfg.gamma, std::abs(h[j]));
    apply_schedule(cfg);
    return cfg;
}

SchemeConfig make_gaussian_jam_scheme(int m, double p, double delta, std::span<const double> h, double c_bar,
                                      std::uint64_t seed) {
    check_common(m, p, delta, h);
    SchemeConfig cfg;
    cfg.kind = SchemeKind::GaussianJam;
    cfg.m = m;
    cfg.p = p;
    cfg.delta = delta;
    cfg.c_bar = c_bar;
    cfg.alphas = draw_alphas(m, seed);
    double coeff_sum = 0.0;
    for (double al : cfg.alphas) coeff_sum += std::abs(al);
    cfg.gamma = 1.0 / coeff_sum;
    apply_schedule(cfg);
    return cfg;
}

std::vector<std::vector<double>> input_coefficients(const SchemeConfig& cfg, std::span<const double> h) {
    const auto n = static_cast<std::size_t>(cfg.m) + 1;
    const auto m = static_cast<std::size_t>(cfg.m);
    if (h.size() != n) throw std::invalid_argument("input_coefficients: h must have m+1 gains");
    std::vector<std::vector<double>> rows(n, std::vector<double>(m + n, 0.0));
    for (std::size_t k = 0; k < m; ++k) rows[0][k] = cfg.alphas[k];
    if (cfg.kind == SchemeKind::Blind) rows[0][m] = 1.0 / h[0];
    if (cfg.kind != SchemeKind::GaussianJam)
        for (std::size_t j = 1; j < n; ++j) rows[j][m + j] = 1.0 / h[j];
    return rows;
}

TransmitBlock encode(const SchemeConfig& cfg, std::span<const double> h, std::span<const int> v,
                     std::span<const int> u, std::span<const double> jam_noise) {
    const auto n = static_cast<std::size_t>(cfg.m) + 1;
    const auto m = static_cast<std::size_t>(cfg.m);
    if (h.size() != n || v.size() != m || u.size() != n)
        throw std::invalid_argument("encode: expected h, u of size m+1 and v of size m");
    auto in_range = [&](int s) { return s >= -cfg.q && s <= cfg.q; };
    if (!std::all_of(v.begin(), v.end(), in_range) || !std::all_of(u.begin(), u.end(), in_range))
        throw std::out_of_range("encode: symbol outside [-Q, Q]");

    TransmitBlock block;
    block.v.assign(v.begin(), v.end());
    block.u.assign(u.begin(), u.end());
    block.x.assign(n, 0.0);

    double x1 = 0.0;
    for (std::size_t k = 0; k < m; ++k) x1 += cfg.alphas[k] * (cfg.a * v[k]);
    switch (cfg.kind) {
        case SchemeKind::Blind:
            block.x[0] = (cfg.a * u[0]) / h[0] + x1;
            for (std::size_t j = 1; j < n; ++j) block.x[j] = (cfg.a * u[j]) / h[j];
            break;
        case SchemeKind::CsiAligned:
            block.x[0] = x1;
            for (std::size_t j = 1; j < n; ++j) block.x[j] = (cfg.a * u[j]) / h[j];
            break;
        case SchemeKind::GaussianJam: {
            if (jam_noise.size() != m) throw std::invalid_argument("encode: GaussianJam needs m noise draws");
            block.x[0] = x1;
            const double scale = std::sqrt(cfg.p);
            for (std::size_t j = 1; j < n; ++j) block.x[j] = scale * jam_noise[j - 1];
            break;
        }
    }
    return block;
}

std::vector<double> analytic_power(const SchemeConfig& cfg, std::span<const double> h) {
    const double symbol_power = cfg.a * cfg.a * cfg.q * (cfg.q + 1) / 3.0;
    const auto rows = input_coefficients(cfg, h);
    std::vector<double> power(rows.size(), 0.0);
    for (std::size_t j = 0; j < rows.size(); ++j) {
        double s = 0.0;
        for (double c : rows[j]) s += c * c;
        power[j] = symbol_power * s;
    }
    if (cfg.kind == SchemeKind::GaussianJam)
        for (std::size_t j = 1; j < power.size(); ++j) power[j] = cfg.p;
    return power;
}

std::pair<std::vector<int>, std::vector<int>> sample_symbols(const SchemeConfig& cfg, Stream& rng) {
    const auto m = static_cast<std::size_t>(cfg.m);
    std::vector<int> v(m), u(m + 1);
    for (auto& s : v) s = static_cast<int>(rng.uniform_int(-cfg.q, cfg.q));
    for (auto& s : u) s = static_cast<int>(rng.uniform_int(-cfg.q, cfg.q));
    if (cfg.kind == SchemeKind::CsiAligned) u[0] = 0;
    return {std::move(v), std::move(u)};
}

std::pair<std::vector<int>, std::vector<int>> sample_symbols(const SchemeConfig& cfg, std::uint64_t seed) {
    Stream rng(seed, "symbols");
    return sample_symbols(cfg, rng);
}

}  // namespace bcj
