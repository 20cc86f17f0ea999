#pragma once

// Monte-Carlo studies: balls into bins, random-point grid separators,
// higher-dimensional grids and t-relaxed separation.

#include "linesep/random.hpp"
#include "linesep/sepsys.hpp"
#include "linesep/solvers.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace linesep {

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware).
// Callers write results into per-index slots, so output order never depends
// on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);
unsigned resolve_threads(unsigned requested);

// ---------------------------------------------------------------------------
// Balls into bins

struct BallsBinsStats {
    std::uint64_t n_balls = 0;
    std::uint64_t n_bins = 0;
    std::uint64_t L2 = 0, L3 = 0, L4 = 0;  // balls in bins holding >= i balls
    std::uint64_t bins_ge2 = 0;
    std::uint64_t colliding_pairs = 0;
    std::uint64_t max_occupancy = 0;

    std::uint64_t heavy(int i) const;
};

BallsBinsStats throw_balls(std::uint64_t n_balls, std::uint64_t n_bins, std::uint64_t seed);
// Occupancies of every non-empty bin, sorted by bin id (for cross-checks).
std::vector<std::pair<std::uint64_t, std::uint64_t>> bin_occupancy(std::uint64_t n_balls, std::uint64_t n_bins,
                                                                   std::uint64_t seed);

struct MeanCI {
    double mean = 0.0;
    double sd = 0.0;
    double low = 0.0;  // 99% normal interval
    double high = 0.0;
};
MeanCI mean_ci99(std::span<const double> samples);

struct HeavyBallReport {
    std::uint64_t n_balls = 0, n_bins = 0;
    int i = 2;
    int trials = 0;
    double F = 0.0;  // n (n / (i b))^(i-1)
    double lower = 0.0, upper = 0.0;  // e^-2 F and 6 e^(i-1) F
    MeanCI heavy;
    bool skipped = false;  // no balls: nothing to test
    bool within = false;   // CI inside [lower, upper]
};

HeavyBallReport heavy_ball_bounds_check(std::uint64_t n_balls, std::uint64_t n_bins, int i, int trials,
                                        std::uint64_t seed, unsigned threads = 1);

struct BirthdayReport {
    std::uint64_t n_balls = 0, n_bins = 0;
    double c = 1.0;
    int trials = 0;
    std::uint64_t max_bins_ge2 = 0;
    double mean_bins_ge2 = 0.0;
    std::uint64_t max_colliding_pairs = 0;
    double mean_colliding_pairs = 0.0;
    std::optional<double> scale;  // ln n / ln ln n, defined for n >= 3
    std::optional<double> ratio;  // max_bins_ge2 / scale
    std::vector<std::uint64_t> per_trial_bins_ge2;
};

BirthdayReport birthday_max_check(std::uint64_t n_balls, double c, int trials, std::uint64_t seed,
                                  unsigned threads = 1);

// ---------------------------------------------------------------------------
// Random points

inline constexpr int kLatticeBits = 40;

// Distinct points of the 2^40 x 2^40 lattice, as integer numerators.
std::vector<std::pair<std::uint64_t, std::uint64_t>> random_lattice_points(std::size_t n, std::uint64_t seed);
PointSet random_points(std::size_t n, std::uint64_t seed);
// PointSet from lattice numerators (coordinates k / 2^40).
PointSet lattice_point_set(std::span<const std::pair<std::uint64_t, std::uint64_t>> lattice);

struct GridCollisions {
    int grid_n = 0;
    std::uint64_t colliding_pairs = 0;
    std::uint64_t active_cells = 0;
    std::uint64_t max_occupancy = 0;
};
GridCollisions grid_collisions(std::span<const std::pair<std::uint64_t, std::uint64_t>> lattice, int grid_n);

// Largest number of active cells crossed by one of `lines` random chords of
// the unit square with endpoints on different sides.
std::uint64_t max_active_cells_per_line(std::span<const std::pair<std::uint64_t, std::uint64_t>> lattice,
                                        int grid_n, int lines, Rng& rng);

// Least-squares slope of log y against log x; nullopt with < 2 distinct x.
std::optional<double> fit_loglog_slope(std::span<const double> xs, std::span<const double> ys);

// ---------------------------------------------------------------------------
// Scaling study

struct StudyRow {
    std::uint64_t n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t separator_size = 0;
    int grid_n = 0;
    std::uint64_t colliding_pairs = 0;
    std::uint64_t active_cells = 0;
    std::uint64_t max_active_per_line = 0;
    double wall_time_ms = 0.0;
};

struct ScalingSummary {
    std::uint64_t n = 0;
    int grid_n = 0;
    MeanCI size;
    double expected_size = 0.0;  // 2(N-1) + C(n,2)/N^2
    double mean_colliding_pairs = 0.0;
    double mean_active_cells = 0.0;
    std::uint64_t max_active_per_line = 0;
};

struct ScalingOptions {
    int test_lines = 1000;
    bool verify = true;
    bool timing = false;  // wall_time_ms stays 0 unless set
    unsigned threads = 1;
};

struct ScalingStudy {
    std::vector<StudyRow> rows;
    std::vector<ScalingSummary> summary;
    std::optional<double> exponent;
};

ScalingStudy scaling_study(std::span<const std::uint64_t> n_list, int trials, std::uint64_t seed,
                           const ScalingOptions& options = {});

// ---------------------------------------------------------------------------
// Higher dimensions (floating point)

struct HyperPointSet {
    int d = 2;
    std::size_t n = 0;
    std::vector<double> coords;  // row-major n x d, in [0,1)^d

    const double* point(std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(d); }
};

struct Hyperplane {
    std::vector<double> normal;
    double offset = 0.0;  // normal . x = offset
};

inline constexpr double kHyperTolerance = 1e-12;

HyperPointSet random_hyper_points(std::size_t n, int d, std::uint64_t seed);

struct GridSeparationD {
    std::vector<Hyperplane> hyperplanes;
    int grid_n = 0;
    std::uint64_t colliding_pairs = 0;
    std::uint64_t active_cells = 0;
    std::size_t extra = 0;
    std::size_t size() const { return hyperplanes.size(); }
};

// N = ceil(n^(2/(d+1))). Throws a verification error when a point lies within
// tolerance of a hyperplane or the output fails to separate.
GridSeparationD grid_separator_d(const HyperPointSet& points);
int default_grid_n_d(std::size_t n, int d);
bool verify_hyper(const HyperPointSet& points, std::span<const Hyperplane> planes);

// ---------------------------------------------------------------------------
// t-relaxed separation

struct TRelaxedSeparation {
    std::vector<CanonicalLine> lines;
    int grid_n = 0;
    std::size_t extra_lines = 0;
};

// N = ceil(n^((t+1)/(2t+1))).
int t_relaxed_grid_n(std::size_t n, int t);
TRelaxedSeparation t_relaxed_separator(const PointSet& points, int t);
// Largest number of points sharing a sign vector (points on a line count alone).
std::size_t max_points_per_face(const PointSet& points, std::span<const CanonicalLine> lines);

struct TRelaxedRow {
    std::uint64_t n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    int t = 2;
    int grid_n = 0;
    std::uint64_t total_lines = 0;
    std::uint64_t extra_lines = 0;
    std::uint64_t max_points_per_face = 0;
};

struct TRelaxedStudy {
    std::vector<TRelaxedRow> rows;
    std::vector<std::pair<std::uint64_t, double>> mean_lines;  // (n, mean total)
    std::optional<double> exponent;
};

TRelaxedStudy t_relaxed_study(std::span<const std::uint64_t> n_list, int t, int trials, std::uint64_t seed,
                              unsigned threads = 1);

struct HyperRow {
    std::uint64_t n = 0;
    int d = 2;
    int trial = 0;
    std::uint64_t seed = 0;
    int grid_n = 0;
    std::uint64_t size = 0;
    std::uint64_t colliding_pairs = 0;
    int redraws = 0;
};

std::vector<HyperRow> hyper_study(std::span<const std::uint64_t> n_list, int d, int trials, std::uint64_t seed,
                                  unsigned threads = 1);

}  // namespace linesep
