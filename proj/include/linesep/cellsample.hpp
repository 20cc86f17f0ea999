#pragma once

// Counting and uniformly sampling the arrangement vertices inside a convex
// cell, plus a mass-weighted sampler over cells.

#include "linesep/geom.hpp"
#include "linesep/persistent_tree.hpp"
#include "linesep/random.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace linesep {

class ConvexCell {
public:
    static constexpr std::size_t kMaxVertices = 16;

    // Counterclockwise, strictly convex, 3..16 vertices; throws otherwise.
    explicit ConvexCell(std::vector<Point> vertices);

    std::size_t size() const { return vertices_.size(); }
    const Point& vertex(std::size_t i) const { return vertices_[i]; }
    const std::vector<Point>& vertices() const { return vertices_; }
    // Strictly inside (not on the boundary).
    bool contains_interior(const Point& p) const;

private:
    std::vector<Point> vertices_;
};

// A line meeting the boundary, at parameter t in (0,1) of edge (v_edge, v_edge+1).
struct CrossingEvent {
    std::uint32_t edge = 0;
    Rational t;
    std::uint32_t line = 0;
};

class CellIntersectionIndex {
public:
    // Throws a precondition error on a line through a cell vertex or two lines
    // meeting the boundary at the same point.
    CellIntersectionIndex(const ConvexCell& cell, std::span<const CanonicalLine> lines);

    std::uint64_t count_vertices() const { return total_; }
    std::size_t line_count() const { return pair_count_.size(); }
    // Counterclockwise from vertex 0.
    const std::vector<CrossingEvent>& events() const { return events_; }
    // Event positions of line k, or -1 when it misses the interior.
    std::int64_t first_event(std::size_t k) const { return first_[k]; }
    std::int64_t second_event(std::size_t k) const { return second_[k]; }
    std::uint64_t pair_count(std::size_t k) const { return pair_count_[k]; }

    // Uniform pair (i < j) of lines meeting inside the cell.
    std::pair<std::uint32_t, std::uint32_t> sample_vertex(Rng& rng) const;
    // The line sampled first, with probability pair_count / total.
    std::uint32_t sample_first_line(Rng& rng) const;
    // Lines crossing `line` inside the cell, read from its snapshot in order.
    std::vector<std::uint32_t> partners(std::uint32_t line) const;

    const PersistentOrderTree& tree() const { return tree_; }
    PersistentOrderTree::Version snapshot(std::size_t k) const { return snapshot_[k]; }

private:
    std::vector<CrossingEvent> events_;
    std::vector<std::int64_t> first_, second_;
    std::vector<std::uint64_t> pair_count_;
    std::vector<std::uint64_t> cumulative_;
    std::vector<PersistentOrderTree::Version> snapshot_;
    PersistentOrderTree tree_;
    std::uint64_t total_ = 0;
};

CellIntersectionIndex build_index(const ConvexCell& cell, std::span<const CanonicalLine> lines);

// O(m^2) reference: pairs of lines meeting strictly inside the cell.
std::vector<std::pair<std::uint32_t, std::uint32_t>> interior_vertices_bruteforce(
    const ConvexCell& cell, std::span<const CanonicalLine> lines);

// Treap keyed by cell id; each node caches the mass of its subtree.
class MassTree {
public:
    // mass = support * 2^depth
    void insert(std::uint64_t cell, std::uint64_t support, int depth);
    void update(std::uint64_t cell, std::uint64_t support, int depth);
    void remove(std::uint64_t cell);
    bool contains(std::uint64_t cell) const;
    std::size_t size() const { return count_; }
    double total_mass() const { return root_ < 0 ? 0.0 : nodes_[root_].subtree; }
    double mass(std::uint64_t cell) const;
    std::uint64_t sample_cell(Rng& rng) const;
    // Checks cached subtree masses, heap order and key order.
    bool valid() const;

private:
    struct Node {
        std::uint64_t key = 0;
        std::uint64_t priority = 0;
        double mass = 0.0;
        double subtree = 0.0;
        int left = -1, right = -1;
    };
    int new_node(std::uint64_t key, double mass);
    void pull(int v);
    void split(int v, std::uint64_t key, int& l, int& r);  // l: keys < key
    int merge(int l, int r);
    int find(std::uint64_t key) const;
    bool valid(int v, const std::uint64_t* lo, const std::uint64_t* hi) const;

    std::vector<Node> nodes_;
    std::vector<int> free_;
    int root_ = -1;
    std::size_t count_ = 0;
};

}  // namespace linesep
