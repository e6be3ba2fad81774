#include "bcj/infometrics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bcj/errors.hpp"
#include "bcj/parallel.hpp"
#include "bcj/rng.hpp"

namespace bcj {

namespace {

constexpr double kLog2e = std::numbers::log2e;
constexpr double kWindow = 12.0;  // components beyond 12 sigma contribute < exp(-72)
constexpr double kQuadratureSpan = 10.0;

// A mixture with sorted means, ready for fast density evaluation.
class MixtureDensity {
public:
    explicit MixtureDensity(const MixtureSpec& spec) : sigma_(spec.sigma) {
        std::vector<std::size_t> order(spec.means.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t l, std::size_t r) { return spec.means[l] < spec.means[r]; });
        for (std::size_t i : order) {
            if (spec.weights[i] <= 0.0) continue;
            means_.push_back(spec.means[i]);
            log_weights_.push_back(std::log(spec.weights[i]));
            weights_.push_back(spec.weights[i]);
        }
        cumulative_.resize(weights_.size());
        std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
        log_norm_ = -std::log(sigma_) - 0.5 * std::log(2.0 * std::numbers::pi);
    }

    double min_mean() const { return means_.front(); }
    double max_mean() const { return means_.back(); }
    double sigma() const { return sigma_; }
    std::size_t size() const { return means_.size(); }

    /// Natural log of the density at y via log-sum-exp over the components near y.
    double log_density(double y) const {
        auto lo = std::lower_bound(means_.begin(), means_.end(), y - kWindow * sigma_);
        auto hi = std::upper_bound(lo, means_.end(), y + kWindow * sigma_);
        if (lo == hi) {
            // Nothing within the window: the closest component dominates.
            if (lo == means_.end()) --lo;
            else if (lo != means_.begin() && y - *(lo - 1) < *lo - y) --lo;
            hi = lo + 1;
        }
        const auto first = static_cast<std::size_t>(lo - means_.begin());
        const auto last = static_cast<std::size_t>(hi - means_.begin());
        double max_arg = -std::numeric_limits<double>::infinity();
        for (std::size_t i = first; i < last; ++i) max_arg = std::max(max_arg, exponent(i, y));
        double sum = 0.0;
        for (std::size_t i = first; i < last; ++i) sum += std::exp(exponent(i, y) - max_arg);
        return log_norm_ + max_arg + std::log(sum);
    }

    double sample(Stream& rng) const {
        const double r = rng.uniform01() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
        if (it == cumulative_.end()) --it;
        const auto k = static_cast<std::size_t>(it - cumulative_.begin());
        return means_[k] + sigma_ * rng.normal();
    }

private:
    double exponent(std::size_t i, double y) const {
        const double z = (y - means_[i]) / sigma_;
        return log_weights_[i] - 0.5 * z * z;
    }

    double sigma_;
    double log_norm_ = 0.0;
    std::vector<double> means_;
    std::vector<double> log_weights_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

struct MomentSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;
};

EntropyEstimate monte_carlo_entropy(const MixtureDensity& mix, const EntropyBudget& budget, std::uint64_t seed) {
    if (budget.n_samples < 2 || budget.chunk_size < 1)
        throw std::invalid_argument("mixture_entropy: Monte Carlo needs >= 2 samples");
    const auto n_chunks =
        static_cast<std::size_t>((budget.n_samples + budget.chunk_size - 1) / budget.chunk_size);
    std::vector<MomentSums> parts(n_chunks);
    parallel_for(n_chunks, budget.workers, [&](std::size_t c) {
        Stream rng(seed, "entropy", {c});
        const std::int64_t begin = static_cast<std::int64_t>(c) * budget.chunk_size;
        const std::int64_t n = std::min(budget.chunk_size, budget.n_samples - begin);
        MomentSums s;
        for (std::int64_t t = 0; t < n; ++t) {
            const double neg_log2 = -mix.log_density(mix.sample(rng)) * kLog2e;
            s.sum += neg_log2;
            s.sum_sq += neg_log2 * neg_log2;
        }
        s.n = n;
        parts[c] = s;
    });
    MomentSums total;
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.n += p.n;
    }
    const double n = static_cast<double>(total.n);
    const double mean = total.sum / n;
    const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), total.n, EntropyMethod::MonteCarlo};
}

EntropyEstimate quadrature_entropy(const MixtureDensity& mix, const EntropyBudget& budget) {
    using boost::math::quadrature::gauss_kronrod;
    const double sigma = mix.sigma();
    const double lo = mix.min_mean() - kQuadratureSpan * sigma;
    const double hi = mix.max_mean() + kQuadratureSpan * sigma;
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / sigma));
    const double width = (hi - lo) / static_cast<double>(panels);
    auto integrand = [&](double y) {
        const double lf = mix.log_density(y);
        const double f = std::exp(lf);
        return f == 0.0 ? 0.0 : -f * lf * kLog2e;
    };
    double value = 0.0, error = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double a = lo + width * static_cast<double>(k);
        const double b = k + 1 == panels ? hi : a + width;
        double panel_error = 0.0;
        value += gauss_kronrod<double, 31>::integrate(integrand, a, b, 8, budget.tolerance, &panel_error);
        error += panel_error;
    }
    return {value, error, 0, EntropyMethod::Quadrature};
}

}  // namespace

MixtureSpec MixtureSpec::uniform(std::vector<double> means, double sigma) {
    MixtureSpec spec;
    spec.weights.assign(means.size(), 1.0 / static_cast<double>(means.size()));
    spec.means = std::move(means);
    spec.sigma = sigma;
    return spec;
}

void MixtureSpec::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("mixture: sigma must be > 0");
    if (means.empty() || means.size() != weights.size())
        throw std::invalid_argument("mixture: means and weights must be nonempty and of equal length");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("mixture: weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture: weights must sum to 1");
}

double gaussian_entropy_bits(double sigma) {
    return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
}

EntropyEstimate mixture_entropy(const MixtureSpec& spec, const EntropyBudget& budget, std::uint64_t seed) {
    spec.validate();
    EntropyMethod method = budget.method;
    if (method == EntropyMethod::Auto)
        method = spec.means.size() <= budget.quadrature_cap ? EntropyMethod::Quadrature : EntropyMethod::MonteCarlo;
    if (method == EntropyMethod::Quadrature && spec.means.size() > budget.quadrature_cap)
        throw CapExceeded("quadrature mixture components", spec.means.size(), budget.quadrature_cap);
    if (method == EntropyMethod::MonteCarlo && spec.means.size() > budget.mc_cap)
        throw CapExceeded("Monte Carlo mixture components", spec.means.size(), budget.mc_cap);

    const MixtureDensity mix(spec);
    if (mix.size() == 1) return {gaussian_entropy_bits(spec.sigma), 0.0, 0, method};
    return method == EntropyMethod::Quadrature ? quadrature_entropy(mix, budget)
                                               : monte_carlo_entropy(mix, budget, seed);
}

DiscreteInput DiscreteInput::pam(double coeff, int q) {
    DiscreteInput in;
    in.coeff = coeff;
    for (int k = -q; k <= q; ++k) in.values.push_back(k);
    return in;
}

MixtureSpec output_mixture(std::span<const DiscreteInput> inputs, double sigma, std::size_t cap) {
    constexpr std::size_t kEnumerationCap = 100'000'000;
    std::vector<double> means{0.0};
    std::vector<double> weights{1.0};
    const double merge_tol = 1e-9 * sigma;
    for (const auto& in : inputs) {
        if (in.values.empty()) throw std::invalid_argument("output_mixture: input with empty symbol set");
        if (means.size() > kEnumerationCap / in.values.size())
            throw CapExceeded("mixture enumeration", means.size() * in.values.size(), kEnumerationCap);
        const double w = 1.0 / static_cast<double>(in.values.size());
        std::vector<std::pair<double, double>> next;
        next.reserve(means.size() * in.values.size());
        for (std::size_t i = 0; i < means.size(); ++i)
            for (double x : in.values) next.emplace_back(means[i] + in.coeff * x, weights[i] * w);
        std::sort(next.begin(), next.end());
        means.clear();
        weights.clear();
        for (const auto& [mu, wt] : next) {
            if (!means.empty() && mu - means.back() <= merge_tol) {
                weights.back() += wt;
            } else {
                means.push_back(mu);
                weights.push_back(wt);
            }
        }
    }
    if (means.size() > cap) throw CapExceeded("mixture components", means.size(), cap);
    // Renormalize away accumulated rounding.
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) w /= total;
    return MixtureSpec{std::move(means), std::move(weights), sigma};
}

namespace {

std::size_t mixture_cap(const EntropyBudget& budget) {
    return budget.method == EntropyMethod::Quadrature ? budget.quadrature_cap : budget.mc_cap;
}

EntropyMethod combine(EntropyMethod a, EntropyMethod b) {
    return (a == EntropyMethod::MonteCarlo || b == EntropyMethod::MonteCarlo) ? EntropyMethod::MonteCarlo
                                                                               : EntropyMethod::Quadrature;
}

}  // namespace

MiEstimate mi_discrete_input(std::span<const DiscreteInput> inputs, std::size_t designated, double sigma,
                             const EntropyBudget& budget, std::uint64_t seed) {
    if (designated > inputs.size()) throw std::invalid_argument("mi_discrete_input: designated count too large");
    if (!(sigma > 0.0)) throw std::invalid_argument("mi_discrete_input: sigma must be > 0");
    const std::size_t cap = mixture_cap(budget);
    const MixtureSpec full = output_mixture(inputs, sigma, cap);
    const MixtureSpec rest = output_mixture(inputs.subspan(designated), sigma, cap);

    // h(Y | S = s) is the entropy of `rest` translated by the contribution of s; entropy is
    // translation invariant, so the average over s equals h(rest) exactly.
    const EntropyEstimate hy = mixture_entropy(full, budget, stream_id("h_y", {seed}));
    const EntropyEstimate hc = mixture_entropy(rest, budget, stream_id("h_y_given", {seed}));

    MiEstimate mi;
    mi.h_output = hy.value;
    mi.h_conditional = hc.value;
    mi.value = hy.value - hc.value;
    mi.std_error = std::hypot(hy.std_error, hc.std_error);
    mi.n_samples = hy.n_samples + hc.n_samples;
    mi.method = combine(hy.method, hc.method);
    return mi;
}

ReceiverView receiver_view(const SchemeConfig& cfg, std::span<const double> h, std::span<const double> gains,
                           double noise_sigma) {
    const auto rows = input_coefficients(cfg, h);
    const auto m = static_cast<std::size_t>(cfg.m);
    if (gains.size() != rows.size()) throw std::invalid_argument("receiver_view: gains must have m+1 entries");
    ReceiverView view;
    view.message_streams = m;
    double var = noise_sigma * noise_sigma;
    if (cfg.kind == SchemeKind::GaussianJam)
        for (std::size_t j = 1; j < gains.size(); ++j) var += cfg.p * gains[j] * gains[j];
    view.sigma = std::sqrt(var);
    for (std::size_t i = 0; i < rows.front().size(); ++i) {
        double c = 0.0;
        for (std::size_t j = 0; j < rows.size(); ++j) c += gains[j] * rows[j][i];
        // Streams absent from every input (e.g. U_1 for CsiAligned) are dropped, messages are kept.
        if (c == 0.0 && i >= m) continue;
        view.inputs.push_back(DiscreteInput::pam(cfg.a * c, cfg.q));
    }
    return view;
}

RateBound rate_lower_bound(const SchemeConfig& cfg, const ChannelRealization& ch, const EntropyBudget& budget,
                           std::uint64_t seed) {
    ch.validate();
    const ReceiverView legit = receiver_view(cfg, ch.h, ch.h, ch.sigma1);
    const ReceiverView eve = receiver_view(cfg, ch.h, ch.g, ch.sigma2);
    if (!(legit.sigma > 0.0) || !(eve.sigma > 0.0))
        throw std::invalid_argument("rate_lower_bound: information measures need positive noise");

    RateBound rb;
    rb.i_v_y1 = mi_discrete_input(legit.inputs, legit.message_streams, legit.sigma, budget, stream_id("y1", {seed}));
    rb.i_v_y2 = mi_discrete_input(eve.inputs, eve.message_streams, eve.sigma, budget, stream_id("y2", {seed}));
    rb.bound = std::max(0.0, rb.i_v_y1.value - rb.i_v_y2.value);

    double g_energy = 0.0;
    for (double gk : ch.g) g_energy += gk * gk;
    const double c_bar = std::max(cfg.c_bar, g_energy);
    rb.h_y2_cap = 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e *
                                  (ch.sigma2 * ch.sigma2 + c_bar * cfg.p));
    const double slack = 3.0 * rb.i_v_y2.std_error + 1e-9;
    if (rb.i_v_y2.h_output > rb.h_y2_cap + slack)
        throw std::logic_error("rate_lower_bound: h(Y2) = " + std::to_string(rb.i_v_y2.h_output) +
                               " exceeds the maximum-entropy cap " + std::to_string(rb.h_y2_cap));
    return rb;
}

double gaussian_wiretap_capacity(double h1, double g1, double p) {
    if (!(p >= 0.0)) throw std::invalid_argument("gaussian_wiretap_capacity: p must be >= 0");
    const double c = 0.5 * std::log2(1.0 + h1 * h1 * p) - 0.5 * std::log2(1.0 + g1 * g1 * p);
    return std::max(0.0, c);
}

}  // namespace bcj
