#pragma once

// Simplicial partitions from separating lines: sample, arrange inside a box,
// triangulate faces, assign points.

#include "linesep/geom.hpp"
#include "linesep/random.hpp"
#include "linesep/sepsys.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace linesep {

struct Box {
    Rational xmin, ymin, xmax, ymax;
    std::array<Point, 4> corners() const;  // counterclockwise from (xmin, ymin)
};

// Bounding box of P grown by 10% of its extent on every side (1 when flat).
Box padded_bounding_box(const PointSet& points);

struct Face {
    std::vector<Point> vertices;  // counterclockwise
};

struct ClippedArrangement {
    Box box;
    std::vector<CanonicalLine> lines;  // distinct input lines
    std::vector<Face> faces;
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
    // V - E + F = 2, counting the outer face.
    bool euler_holds() const { return vertex_count + faces.size() + 1 == edge_count + 2; }
};

inline constexpr std::size_t kMaxArrangementLines = 512;

ClippedArrangement build_arrangement(std::span<const CanonicalLine> lines, const Box& box);

using Triangle = std::array<Point, 3>;

// t - 2 triangles by repeatedly connecting every other vertex, keeping v0.
// Collinear boundary vertices are dropped first.
std::vector<Triangle> triangulate_face(const Face& face);

Rational twice_area(std::span<const Point> polygon);

struct PartitionCell {
    Triangle triangle;
    std::vector<std::uint32_t> points;
};

struct Partition {
    std::vector<PartitionCell> triangles;
    std::size_t source_sample_size = 0;
    std::vector<CanonicalLine> sample;
    Box box;
    int attempts = 0;
    bool conforming = false;          // every triangle holds <= n/r points
    std::size_t boundary_ties = 0;    // points on a triangle edge, given to the first match
    std::size_t max_load = 0;
    std::size_t face_count = 0;
    bool euler_holds = false;
};

struct PartitionOptions {
    double alpha = 2.0;
    int max_attempts = 16;
};

// Sample size ceil(alpha sqrt(r) ln(alpha sqrt(r) + 2)).
std::size_t partition_sample_size(double r, double alpha);

Partition build_partition(const PointSet& points, std::span<const CanonicalLine> separators, int r,
                          std::uint64_t seed, const PartitionOptions& options = {});

// Triangles whose interior a line meets.
std::size_t stabbed_triangles(const Partition& partition, const CanonicalLine& line);

struct StabbingStats {
    std::size_t max = 0;
    double mean = 0.0;
};
StabbingStats stabbing_stats(const Partition& partition, std::span<const CanonicalLine> test_lines);

// Lines through two random points on different sides of the box boundary.
std::vector<CanonicalLine> random_test_lines(const Box& box, std::size_t count, Rng& rng);

}  // namespace linesep
