#pragma once

// The hitting-set view of separability: candidate lines through point pairs,
// the hit relation, separation checks and relaxed-to-strict conversion.

#include "linesep/frame.hpp"
#include "linesep/geom.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace linesep {

struct PairId {
    std::uint32_t i = 0;
    std::uint32_t j = 0;  // i < j

    friend bool operator==(const PairId&, const PairId&) = default;
    friend auto operator<=>(const PairId&, const PairId&) = default;
};

enum class SeparationMode { Strict, Relaxed };

const char* to_string(SeparationMode mode);

// Whether a pair with the given sides is separated under `mode`.
inline bool separated(int sp, int sq, SeparationMode mode) {
    return mode == SeparationMode::Strict ? sp * sq == -1 : sp != sq;
}

enum class GeneralPosition { Yes, No, Assumed };

// Immutable list of distinct points. General position is checked exactly for
// n <= kGeneralPositionCheckLimit and reported as Assumed above that.
class PointSet {
public:
    static constexpr std::size_t kGeneralPositionCheckLimit = 512;

    PointSet() = default;
    explicit PointSet(std::vector<Point> points);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const { return points_; }
    const IntegerFrame& frame() const { return frame_; }
    GeneralPosition general_position() const { return general_position_; }
    // True iff all points lie on one line (vacuously for n <= 2).
    bool collinear() const { return collinear_; }

    PointSet subset(std::span<const std::uint32_t> indices) const;

private:
    std::vector<Point> points_;
    IntegerFrame frame_;
    GeneralPosition general_position_ = GeneralPosition::Yes;
    bool collinear_ = true;
};

// Exact check for three collinear points, O(n^2) with hashing.
bool has_collinear_triple(const PointSet& points);

class CandidateLines {
public:
    CandidateLines() = default;
    // Throws a precondition error when |P| < 2.
    explicit CandidateLines(const PointSet& points);

    std::size_t size() const { return lines_.size(); }
    const std::vector<CanonicalLine>& lines() const { return lines_; }
    const CanonicalLine& line(std::size_t k) const { return lines_[k]; }
    const FrameLine& frame_line(std::size_t k) const { return frame_lines_[k]; }
    std::span<const PairId> incident_pairs(std::size_t k) const {
        return {pairs_.data() + offsets_[k], pairs_.data() + offsets_[k + 1]};
    }
    // Points of P on line k, ordered along the direction (b, -a).
    std::vector<std::uint32_t> incident_points(std::size_t k, const PointSet& points) const;
    std::uint32_t line_of_pair(std::uint32_t i, std::uint32_t j) const;

private:
    std::size_t n_ = 0;
    std::vector<CanonicalLine> lines_;
    std::vector<FrameLine> frame_lines_;
    std::vector<std::size_t> offsets_;
    std::vector<PairId> pairs_;
    std::vector<std::uint32_t> pair_line_;
};

bool hits(const CanonicalLine& l, const PointSet& points, PairId pair, SeparationMode mode);

// Lexicographically smallest pair no line of `lines` separates under `mode`,
// or nullopt when `lines` separates the whole set.
std::optional<PairId> find_unseparated_pair(const PointSet& points, std::span<const CanonicalLine> lines,
                                            SeparationMode mode);
std::optional<PairId> find_unseparated_pair(const PointSet& points, std::span<const FrameLine> lines,
                                            SeparationMode mode);

// O(|L| n^2) pair scan; the reference the hashing check is tested against.
std::optional<PairId> find_unseparated_pair_bruteforce(const PointSet& points,
                                                       std::span<const CanonicalLine> lines,
                                                       SeparationMode mode);

// Replaces each line containing one or two points by two parallel copies
// (plus a line splitting the two on-line points). Result strictly separates.
std::vector<CanonicalLine> properize(std::span<const CanonicalLine> lines, const PointSet& points);

// A line equal to `base` on every point off `base`, with the points of `base`
// that lie in P given the requested signs. Signs are relative to `base`; the
// canonical result may flip both. The requested signs, ordered along the line,
// must be constant or switch exactly once.
CanonicalLine realize_assignment(const PointSet& points, const CanonicalLine& base,
                                 std::span<const std::uint32_t> on_line, std::span<const int> signs);

// A line strictly separating p from q that contains no point of P.
CanonicalLine separating_line(const PointSet& points, std::uint32_t p, std::uint32_t q);

}  // namespace linesep
