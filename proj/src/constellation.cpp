#include "bcj/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bcj/errors.hpp"
#include "bcj/rng.hpp"

namespace bcj {

std::vector<double> pam_points(double a, int q) {
    if (!(a > 0.0)) throw std::invalid_argument("pam_points: spacing a must be > 0");
    if (q < 0) throw std::invalid_argument("pam_points: q must be >= 0");
    std::vector<double> pts;
    pts.reserve(2 * static_cast<std::size_t>(q) + 1);
    for (int k = -q; k <= q; ++k) pts.push_back(a * k);
    return pts;
}

namespace {

std::size_t saturating_product(std::span<const LatticeStream> streams) {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    std::size_t n = 1;
    for (const auto& s : streams) {
        const auto k = 2 * static_cast<std::size_t>(s.range) + 1;
        if (n > kMax / k) return kMax;
        n *= k;
    }
    return n;
}

}  // namespace

ScalarLattice::ScalarLattice(double a, std::vector<LatticeStream> streams, std::size_t cap)
    : a_(a), streams_(std::move(streams)), width_(streams_.size()) {
    if (!(a > 0.0)) throw std::invalid_argument("lattice spacing a must be > 0");
    if (streams_.empty()) throw std::invalid_argument("lattice needs at least one stream");
    for (const auto& s : streams_)
        if (s.range < 0) throw std::invalid_argument("lattice stream range must be >= 0");

    const std::size_t n = saturating_product(streams_);
    if (n > cap) throw CapExceeded("receiver lattice enumeration", n, cap);

    // Odometer over the integer tuples; values accumulated in exact order per tuple.
    std::vector<double> raw(n);
    std::vector<int> raw_labels(n * width_);
    std::vector<int> z(width_);
    for (std::size_t i = 0; i < width_; ++i) z[i] = -streams_[i].range;
    for (std::size_t idx = 0; idx < n; ++idx) {
        double v = 0.0;
        for (std::size_t i = 0; i < width_; ++i) v += streams_[i].coeff * z[i];
        raw[idx] = a_ * v;
        std::copy(z.begin(), z.end(), raw_labels.begin() + static_cast<std::ptrdiff_t>(idx * width_));
        for (std::size_t i = width_; i-- > 0;) {
            if (z[i] < streams_[i].range) {
                ++z[i];
                break;
            }
            z[i] = -streams_[i].range;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return raw[l] < raw[r]; });

    points_.resize(n);
    labels_.resize(n * width_);
    for (std::size_t k = 0; k < n; ++k) {
        points_[k] = raw[order[k]];
        std::copy_n(raw_labels.begin() + static_cast<std::ptrdiff_t>(order[k] * width_), width_,
                    labels_.begin() + static_cast<std::ptrdiff_t>(k * width_));
    }
    const double tol = kCollisionTolerance * a_;
    for (std::size_t k = 1; k < n; ++k)
        if (points_[k] - points_[k - 1] <= tol) {
            collision_ = true;
            break;
        }
}

ScalarLattice ScalarLattice::from_points(std::vector<double> points, double a) {
    if (points.empty()) throw std::invalid_argument("from_points: empty point set");
    ScalarLattice lat;
    lat.a_ = a;
    std::sort(points.begin(), points.end());
    lat.points_ = std::move(points);
    lat.width_ = 1;
    lat.labels_.resize(lat.points_.size());
    std::iota(lat.labels_.begin(), lat.labels_.end(), 0);
    for (std::size_t k = 1; k < lat.points_.size(); ++k)
        if (lat.points_[k] - lat.points_[k - 1] <= kCollisionTolerance * a) lat.collision_ = true;
    return lat;
}

std::size_t ScalarLattice::nearest_index(double y) const {
    const auto it = std::lower_bound(points_.begin(), points_.end(), y);
    if (it == points_.begin()) return 0;
    if (it == points_.end()) return points_.size() - 1;
    const auto hi = static_cast<std::size_t>(it - points_.begin());
    const std::size_t lo = hi - 1;
    // *it >= y > points_[lo]; ties go to the lower point.
    return (points_[hi] - y < y - points_[lo]) ? hi : lo;
}

ScalarLattice build_receiver_lattice(double h1, std::span<const double> alphas, double a, int q, int jam_streams,
                                     std::size_t cap) {
    if (alphas.empty()) throw std::invalid_argument("build_receiver_lattice: need M >= 1 message streams");
    if (q < 1) throw std::invalid_argument("build_receiver_lattice: q must be >= 1");
    const int m = static_cast<int>(alphas.size());
    if (jam_streams < 0) jam_streams = m + 1;
    std::vector<LatticeStream> streams;
    streams.reserve(alphas.size() + 1);
    for (double alpha : alphas) streams.push_back({h1 * alpha, q});
    streams.push_back({1.0, jam_streams * q});
    return ScalarLattice(a, std::move(streams), cap);
}

std::size_t receiver_lattice_size(int m, int q, int jam_streams) {
    std::vector<LatticeStream> streams(static_cast<std::size_t>(m), LatticeStream{1.0, q});
    streams.push_back({1.0, jam_streams * q});
    return saturating_product(streams);
}

double min_distance(const ScalarLattice& lat) {
    if (lat.collision()) throw DegenerateGains("min_distance: degenerate gains (lattice labels collide)");
    if (lat.size() < 2) throw std::invalid_argument("min_distance: need at least 2 points");
    const auto pts = lat.points();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < pts.size(); ++k) d = std::min(d, pts[k] - pts[k - 1]);
    return d;
}

std::vector<int> nearest_point(double y, const ScalarLattice& lat) {
    if (lat.collision()) throw DegenerateGains("nearest_point: degenerate gains (lattice labels collide)");
    const auto lab = lat.label(lat.nearest_index(y));
    return {lab.begin(), lab.end()};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fit_line: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate grid (all x equal)");
    LineFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

DminStudy fit_dmin_exponent(int m, std::span<const int> q_grid, int n_draws, std::uint64_t seed, std::size_t cap) {
    if (m < 1) throw std::invalid_argument("fit_dmin_exponent: m must be >= 1");
    if (n_draws < 1) throw std::invalid_argument("fit_dmin_exponent: need at least one draw");
    if (q_grid.size() < 3) throw std::invalid_argument("fit_dmin_exponent: q grid needs >= 3 values to fit");
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        if (q_grid[i] < 1) throw std::invalid_argument("fit_dmin_exponent: q values must be >= 1");
        if (i > 0 && q_grid[i] <= q_grid[i - 1])
            throw std::invalid_argument("fit_dmin_exponent: q grid must be strictly increasing");
    }

    DminStudy study;
    std::vector<double> logq;
    for (int q : q_grid) logq.push_back(std::log(static_cast<double>(q)));

    constexpr int kMaxAttempts = 1000;
    for (int draw = 0; draw < n_draws; ++draw) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxAttempts) throw DegenerateGains("fit_dmin_exponent: persistent collisions");
            Stream rng(seed, "dmin", {static_cast<std::uint64_t>(draw), static_cast<std::uint64_t>(attempt)});
            double h1 = rng.uniform(0.5, 2.0);
            if (rng.coin()) h1 = -h1;
            std::vector<double> alphas(static_cast<std::size_t>(m));
            for (auto& al : alphas) {
                al = rng.uniform(0.5, 1.5);
                if (rng.coin()) al = -al;
            }
            std::vector<double> logd;
            std::vector<DminRow> rows;
            bool collided = false;
            for (int q : q_grid) {
                const ScalarLattice lat = build_receiver_lattice(h1, alphas, 1.0, q, m + 1, cap);
                if (lat.collision()) {
                    collided = true;
                    break;
                }
                const double d = min_distance(lat);
                logd.push_back(std::log(d));
                rows.push_back({draw, m, q, d, 0.0});
            }
            if (collided) {
                ++study.redraws;
                continue;
            }
            const double slope = fit_line(logq, logd).slope;
            for (auto& r : rows) r.slope = slope;
            study.rows.insert(study.rows.end(), rows.begin(), rows.end());
            study.slopes.push_back(slope);
            break;
        }
    }
    study.median_slope = median_of(study.slopes);
    study.min_slope = *std::min_element(study.slopes.begin(), study.slopes.end());
    return study;
}

}  // namespace bcj
