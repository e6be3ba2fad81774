#pragma once

// PAM constellations and the one-dimensional composite constellations seen by
// a receiver when several integer streams are superimposed with real gains.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bcj {

inline constexpr std::size_t kDefaultLatticeCap = 10'000'000;
inline constexpr double kCollisionTolerance = 1e-9;  // relative to the spacing a

/// The 2q+1 points a*{-q, ..., q}, ascending.
std::vector<double> pam_points(double a, int q);

/// One superimposed integer stream: contributes a * coeff * z with z in [-range, range].
struct LatticeStream {
    double coeff = 1.0;
    int range = 0;
};

/// Sorted scalar constellation together with the integer label of every point.
///
/// Points are a * sum_i coeff_i * z_i for every integer tuple z with |z_i| <= range_i.
/// Built once and then read-only, so it can be shared by decoding threads.
class ScalarLattice {
public:
    ScalarLattice(double a, std::vector<LatticeStream> streams, std::size_t cap = kDefaultLatticeCap);

    /// Wraps an explicit point set (used for planted tests); labels are the point indices.
    static ScalarLattice from_points(std::vector<double> points, double a);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t label_width() const noexcept { return width_; }
    double spacing() const noexcept { return a_; }
    bool collision() const noexcept { return collision_; }
    std::span<const double> points() const noexcept { return points_; }
    std::span<const LatticeStream> streams() const noexcept { return streams_; }

    std::span<const int> label(std::size_t index) const noexcept {
        return {labels_.data() + index * width_, width_};
    }

    /// Index of the point closest to y; exact ties go to the smaller point.
    std::size_t nearest_index(double y) const;

private:
    ScalarLattice() = default;

    double a_ = 1.0;
    std::vector<LatticeStream> streams_;
    std::vector<double> points_;
    std::vector<int> labels_;
    std::size_t width_ = 0;
    bool collision_ = false;
};

/// Lattice seen by the legitimate receiver: M message streams with coefficients
/// h1*alpha_k in [-q, q] followed by the aligned jamming sum s with unit
/// coefficient in [-jam_streams*q, jam_streams*q]. Labels are (v_2..v_{M+1}, s).
ScalarLattice build_receiver_lattice(double h1, std::span<const double> alphas, double a, int q,
                                     int jam_streams = -1, std::size_t cap = kDefaultLatticeCap);

/// (2q+1)^M * (2 J q + 1) with J jamming streams; saturates instead of overflowing.
std::size_t receiver_lattice_size(int m, int q, int jam_streams);

/// Exact minimum distance via sorted adjacent differences. Throws DegenerateGains on collision.
double min_distance(const ScalarLattice& lat);

/// Label of the nearest point. Throws DegenerateGains on collision.
std::vector<int> nearest_point(double y, const ScalarLattice& lat);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct DminRow {
    int draw_id = 0;
    int m = 0;
    int q = 0;
    double dmin = 0.0;
    double slope = 0.0;  // fitted slope of log dmin vs log q for this draw
};

struct DminStudy {
    std::vector<DminRow> rows;
    std::vector<double> slopes;  // one per draw
    double median_slope = 0.0;
    double min_slope = 0.0;
    int redraws = 0;
};

/// For each draw: random legitimate gain h1 and message coefficients alpha, a = 1,
/// d_min of the receiver lattice at every q of the grid, then the log-log slope.
/// Draws whose lattice collides at some q are replaced and counted in `redraws`.
DminStudy fit_dmin_exponent(int m, std::span<const int> q_grid, int n_draws, std::uint64_t seed,
                            std::size_t cap = kDefaultLatticeCap);

}  // namespace bcj
