#pragma once

#include "linesep/random.hpp"
#include "linesep/sepsys.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace linesep {

// True iff no pair of P is left unseparated by `lines` under `mode`.
bool verify(const PointSet& points, std::span<const CanonicalLine> lines, SeparationMode mode);

// Smallest k with enough arrangement cells for n points: 1 + k(k+1)/2 faces
// (strict) or 1 + 2k^2 faces, edges and vertices (relaxed).
int cell_count_lower_bound(std::size_t n, SeparationMode mode);

struct ExactResult {
    int sigma = 0;
    std::vector<CanonicalLine> witness;
    std::uint64_t nodes = 0;  // search nodes expanded, all depths
};

inline constexpr std::size_t kExactMaxPoints = 14;

// Minimum separating set by iterative deepening branch-and-bound over the
// set-cover formulation; |P| in [2, 14].
ExactResult exact_separability(const PointSet& points, SeparationMode mode);

// Picks the candidate separating the most unseparated pairs until none remain.
std::vector<CanonicalLine> greedy_hitting_set(const PointSet& points, SeparationMode mode);

// Multiplicative weights over candidate lines: hit_count[l] doublings, with
// weights kept as doubles scaled by 2^-rescale_exponent.
class WeightState {
public:
    static constexpr int kRescaleThresholdExponent = 512;
    static constexpr int kResumPeriod = 64;

    explicit WeightState(std::size_t count = 0);

    std::size_t size() const { return hit_count_.size(); }
    std::uint32_t hit_count(std::size_t k) const { return hit_count_[k]; }
    int rescale_exponent() const { return rescale_exponent_; }
    // 2^(hit_count - rescale_exponent).
    double weight(std::size_t k) const;
    double total_weight() const { return total_; }
    std::uint64_t doublings() const { return doublings_; }

    // Doubles the weight of every listed line (one doubling event).
    void double_weights(std::span<const std::uint32_t> lines);
    // Recomputes the total from scratch; returns the relative drift it corrected.
    double resum();
    // Index sampled proportionally to weight.
    std::size_t sample(Rng& rng);
    void reset();

private:
    void rebuild_prefix();

    std::vector<std::uint32_t> hit_count_;
    std::vector<double> prefix_;
    std::size_t dirty_from_ = 0;
    double total_ = 0.0;
    int rescale_exponent_ = 0;
    std::uint64_t doublings_ = 0;
};

struct SolverConfig {
    double epsilon_constant = 4.0;      // C_net in the sample size C_net * (1/eps) * ln(1/eps + 2)
    double max_rounds_constant = 16.0;  // rounds per guess: ceil(c * k * ln(n + 2))
    std::optional<int> initial_guess;   // default ceil(sqrt(n))
    std::uint64_t rng_seed = 0;
    bool prune = true;  // drop lines of the returned sample that are not needed
};

struct GuessRecord {
    int k = 0;
    int rounds = 0;
    bool succeeded = false;
};

struct SolveResult {
    std::vector<CanonicalLine> lines;
    SeparationMode mode = SeparationMode::Relaxed;
    int rounds_used = 0;
    std::vector<GuessRecord> guess_history;
    std::uint64_t weight_doublings = 0;
    std::size_t sampled_size = 0;  // distinct lines in the successful sample
    bool fell_back_to_greedy = false;
};

SolveResult reweight_approx(const PointSet& points, const SolverConfig& config);

// Exactly ceil(n/2) lines strictly separating a set in general position.
std::vector<CanonicalLine> halving_separator(const PointSet& points);

struct GridSeparation {
    std::vector<CanonicalLine> lines;
    int grid_n = 0;
    std::uint64_t colliding_pairs = 0;
    std::uint64_t active_cells = 0;
    std::size_t extra_lines = 0;
    std::size_t flagged_points = 0;  // points exactly on a grid line
};

// N x N grid lines of the unit square plus separators inside crowded cells.
GridSeparation grid_separator(const PointSet& points, int grid_n);
// Default resolution ceil(n^(2/3)).
int default_grid_n(std::size_t n);

}  // namespace linesep
