#include "linesep/cellsample.hpp"

#include "linesep/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace linesep {

ConvexCell::ConvexCell(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    const std::size_t k = vertices_.size();
    if (k < 3 || k > kMaxVertices)
        throw precondition_error("ConvexCell needs 3.." + std::to_string(kMaxVertices) + " vertices");
    for (std::size_t i = 0; i < k; ++i) {
        if (orient(vertices_[i], vertices_[(i + 1) % k], vertices_[(i + 2) % k]) != Sign::Positive)
            throw precondition_error("ConvexCell vertices must be counterclockwise and strictly convex");
    }
    // Local convexity plus a single turn around the origin rules out stars.
    int crossings = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const Point& p = vertices_[i];
        const Point& q = vertices_[(i + 1) % k];
        if ((p.y < vertices_[0].y) != (q.y < vertices_[0].y)) ++crossings;
    }
    if (crossings > 2) throw precondition_error("ConvexCell boundary winds more than once");
}

bool ConvexCell::contains_interior(const Point& p) const {
    const std::size_t k = vertices_.size();
    for (std::size_t i = 0; i < k; ++i)
        if (orient(vertices_[i], vertices_[(i + 1) % k], p) != Sign::Positive) return false;
    return true;
}

CellIntersectionIndex::CellIntersectionIndex(const ConvexCell& cell, std::span<const CanonicalLine> lines) {
    const std::size_t m = lines.size();
    const std::size_t k = cell.size();
    first_.assign(m, -1);
    second_.assign(m, -1);
    pair_count_.assign(m, 0);
    snapshot_.assign(m, PersistentOrderTree::kEmpty);

    std::vector<Rational> values(k);
    for (std::uint32_t id = 0; id < m; ++id) {
        for (std::size_t i = 0; i < k; ++i) {
            values[i] = lines[id].evaluate(cell.vertex(i));
            if (sgn(values[i]) == 0)
                throw precondition_error("build_index: line " + std::to_string(id) + " passes through a cell vertex");
        }
        for (std::size_t i = 0; i < k; ++i) {
            const Rational& a = values[i];
            const Rational& b = values[(i + 1) % k];
            if (sgn(a) == sgn(b)) continue;
            events_.push_back({static_cast<std::uint32_t>(i), Rational(a / (a - b)), id});
        }
    }
    std::sort(events_.begin(), events_.end(), [](const CrossingEvent& x, const CrossingEvent& y) {
        if (x.edge != y.edge) return x.edge < y.edge;
        if (x.t != y.t) return x.t < y.t;
        return x.line < y.line;
    });
    for (std::size_t e = 1; e < events_.size(); ++e) {
        if (events_[e].edge == events_[e - 1].edge && events_[e].t == events_[e - 1].t)
            throw precondition_error("build_index: lines " + std::to_string(events_[e - 1].line) + " and " +
                                     std::to_string(events_[e].line) + " meet on the cell boundary");
    }

    // Sweep: store a line at its first event; at its second, count the stored
    // lines that started strictly inside its interval, snapshot, delete.
    PersistentOrderTree::Version current = PersistentOrderTree::kEmpty;
    for (std::size_t e = 0; e < events_.size(); ++e) {
        const std::uint32_t id = events_[e].line;
        const auto pos = static_cast<std::int64_t>(e);
        if (first_[id] < 0) {
            first_[id] = pos;
            current = tree_.insert(current, pos, id);
        } else {
            second_[id] = pos;
            pair_count_[id] = tree_.count_open(current, first_[id], pos);
            snapshot_[id] = current;
            total_ += pair_count_[id];
            current = tree_.erase(current, first_[id]);
        }
    }
    cumulative_.resize(m);
    std::uint64_t acc = 0;
    for (std::size_t id = 0; id < m; ++id) cumulative_[id] = acc += pair_count_[id];
}

std::uint32_t CellIntersectionIndex::sample_first_line(Rng& rng) const {
    if (total_ == 0) throw precondition_error("sample_vertex: the cell contains no arrangement vertex");
    std::uint64_t r = uniform_below(rng, total_);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    return static_cast<std::uint32_t>(it - cumulative_.begin());
}

std::pair<std::uint32_t, std::uint32_t> CellIntersectionIndex::sample_vertex(Rng& rng) const {
    std::uint32_t line = sample_first_line(rng);
    auto snap = snapshot_[line];
    std::size_t below = tree_.count_less_equal(snap, first_[line]);
    std::size_t pick = below + uniform_below(rng, pair_count_[line]);
    std::uint32_t other = tree_.select(snap, pick).second;
    return {std::min(line, other), std::max(line, other)};
}

std::vector<std::uint32_t> CellIntersectionIndex::partners(std::uint32_t line) const {
    std::vector<std::uint32_t> out;
    if (second_[line] < 0) return out;
    auto snap = snapshot_[line];
    std::size_t below = tree_.count_less_equal(snap, first_[line]);
    for (std::size_t q = 0; q < pair_count_[line]; ++q) out.push_back(tree_.select(snap, below + q).second);
    return out;
}

CellIntersectionIndex build_index(const ConvexCell& cell, std::span<const CanonicalLine> lines) {
    return CellIntersectionIndex(cell, lines);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> interior_vertices_bruteforce(
    const ConvexCell& cell, std::span<const CanonicalLine> lines) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t i = 0; i < lines.size(); ++i) {
        for (std::uint32_t j = i + 1; j < lines.size(); ++j) {
            if (parallel(lines[i], lines[j])) continue;
            if (cell.contains_interior(intersection(lines[i], lines[j]))) out.emplace_back(i, j);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

int MassTree::new_node(std::uint64_t key, double mass) {
    Node n;
    n.key = key;
    n.priority = splitmix64(key ^ 0x6d617373ULL);
    n.mass = mass;
    n.subtree = mass;
    if (!free_.empty()) {
        int v = free_.back();
        free_.pop_back();
        nodes_[v] = n;
        return v;
    }
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
}

void MassTree::pull(int v) {
    Node& n = nodes_[v];
    n.subtree = n.mass + (n.left >= 0 ? nodes_[n.left].subtree : 0.0) + (n.right >= 0 ? nodes_[n.right].subtree : 0.0);
}

void MassTree::split(int v, std::uint64_t key, int& l, int& r) {
    if (v < 0) {
        l = r = -1;
        return;
    }
    if (nodes_[v].key < key) {
        split(nodes_[v].right, key, nodes_[v].right, r);
        l = v;
    } else {
        split(nodes_[v].left, key, l, nodes_[v].left);
        r = v;
    }
    pull(v);
}

int MassTree::merge(int l, int r) {
    if (l < 0) return r;
    if (r < 0) return l;
    if (nodes_[l].priority > nodes_[r].priority) {
        nodes_[l].right = merge(nodes_[l].right, r);
        pull(l);
        return l;
    }
    nodes_[r].left = merge(l, nodes_[r].left);
    pull(r);
    return r;
}

int MassTree::find(std::uint64_t key) const {
    int v = root_;
    while (v >= 0 && nodes_[v].key != key) v = key < nodes_[v].key ? nodes_[v].left : nodes_[v].right;
    return v;
}

static double mass_of(std::uint64_t support, int depth) {
    if (depth < 0) throw precondition_error("MassTree: depth must be non-negative");
    return std::ldexp(static_cast<double>(support), depth);
}

void MassTree::insert(std::uint64_t cell, std::uint64_t support, int depth) {
    if (contains(cell)) throw precondition_error("MassTree::insert: cell " + std::to_string(cell) + " already present");
    double m = mass_of(support, depth);
    int l, r;
    split(root_, cell, l, r);
    root_ = merge(merge(l, new_node(cell, m)), r);
    ++count_;
}

void MassTree::update(std::uint64_t cell, std::uint64_t support, int depth) {
    double m = mass_of(support, depth);
    // Recompute cached masses along the search path.
    std::vector<int> path;
    int v = root_;
    while (v >= 0 && nodes_[v].key != cell) {
        path.push_back(v);
        v = cell < nodes_[v].key ? nodes_[v].left : nodes_[v].right;
    }
    if (v < 0) throw precondition_error("MassTree::update: unknown cell " + std::to_string(cell));
    nodes_[v].mass = m;
    pull(v);
    for (auto it = path.rbegin(); it != path.rend(); ++it) pull(*it);
}

void MassTree::remove(std::uint64_t cell) {
    if (!contains(cell)) throw precondition_error("MassTree::remove: unknown cell " + std::to_string(cell));
    int l, mid, r;
    split(root_, cell, l, r);
    split(r, cell + 1, mid, r);
    free_.push_back(mid);
    root_ = merge(l, r);
    --count_;
}

bool MassTree::contains(std::uint64_t cell) const { return find(cell) >= 0; }

double MassTree::mass(std::uint64_t cell) const {
    int v = find(cell);
    if (v < 0) throw precondition_error("MassTree::mass: unknown cell " + std::to_string(cell));
    return nodes_[v].mass;
}

std::uint64_t MassTree::sample_cell(Rng& rng) const {
    if (root_ < 0) throw precondition_error("sample_cell: the tree is empty");
    if (!(nodes_[root_].subtree > 0.0)) throw precondition_error("sample_cell: total mass is zero");
    int v = root_;
    while (true) {
        const Node& n = nodes_[v];
        double left = n.left >= 0 ? nodes_[n.left].subtree : 0.0;
        double right = n.right >= 0 ? nodes_[n.right].subtree : 0.0;
        double u = uniform01(rng) * (left + n.mass + right);
        if (u < left) {
            v = n.left;
        } else if (n.mass > 0.0 && (u < left + n.mass || right <= 0.0)) {
            return n.key;
        } else if (right > 0.0) {
            v = n.right;
        } else {
            v = n.left;  // rounding past a massless node
        }
    }
}

bool MassTree::valid() const { return valid(root_, nullptr, nullptr); }

bool MassTree::valid(int v, const std::uint64_t* lo, const std::uint64_t* hi) const {
    if (v < 0) return true;
    const Node& n = nodes_[v];
    if ((lo && n.key <= *lo) || (hi && n.key >= *hi)) return false;
    if (n.mass < 0.0) return false;
    for (int c : {n.left, n.right})
        if (c >= 0 && nodes_[c].priority > n.priority) return false;
    double expect = n.mass + (n.left >= 0 ? nodes_[n.left].subtree : 0.0) +
                    (n.right >= 0 ? nodes_[n.right].subtree : 0.0);
    if (std::abs(expect - n.subtree) > 1e-9 * std::max(1.0, expect)) return false;
    return valid(n.left, lo, &n.key) && valid(n.right, &n.key, hi);
}

}  // namespace linesep
