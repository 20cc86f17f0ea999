#include "linesep/partition2d.hpp"

#include "linesep/error.hpp"
#include "linesep/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace linesep {

std::array<Point, 4> Box::corners() const {
    return {Point(xmin, ymin), Point(xmax, ymin), Point(xmax, ymax), Point(xmin, ymax)};
}

Box padded_bounding_box(const PointSet& points) {
    if (points.empty()) return Box{Rational(0), Rational(0), Rational(1), Rational(1)};
    Box b{points[0].x, points[0].y, points[0].x, points[0].y};
    for (std::size_t i = 1; i < points.size(); ++i) {
        b.xmin = std::min(b.xmin, points[i].x);
        b.xmax = std::max(b.xmax, points[i].x);
        b.ymin = std::min(b.ymin, points[i].y);
        b.ymax = std::max(b.ymax, points[i].y);
    }
    Rational dx = b.xmax - b.xmin, dy = b.ymax - b.ymin;
    if (dx == 0) dx = 1;
    if (dy == 0) dy = 1;
    dx /= 10;
    dy /= 10;
    b.xmin -= dx;
    b.xmax += dx;
    b.ymin -= dy;
    b.ymax += dy;
    return b;
}

namespace {

// Pieces of a convex polygon on the non-negative and non-positive sides of l,
// or nothing when l misses the interior.
bool split_polygon(const std::vector<Point>& poly, const CanonicalLine& l, std::vector<Point>& pos,
                   std::vector<Point>& neg) {
    const std::size_t k = poly.size();
    std::vector<Rational> val(k);
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < k; ++i) {
        val[i] = l.evaluate(poly[i]);
        any_pos |= sgn(val[i]) > 0;
        any_neg |= sgn(val[i]) < 0;
    }
    if (!any_pos || !any_neg) return false;
    pos.clear();
    neg.clear();
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = (i + 1) % k;
        int si = sgn(val[i]), sj = sgn(val[j]);
        if (si >= 0) pos.push_back(poly[i]);
        if (si <= 0) neg.push_back(poly[i]);
        if (si * sj < 0) {
            Rational t = val[i] / (val[i] - val[j]);
            Point x(poly[i].x + t * (poly[j].x - poly[i].x), poly[i].y + t * (poly[j].y - poly[i].y));
            pos.push_back(x);
            neg.push_back(x);
        }
    }
    return true;
}

bool inside_closed(const Triangle& t, const Point& p) {
    for (int e = 0; e < 3; ++e)
        if (orient(t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)], p) == Sign::Negative)
            return false;
    return true;
}

bool on_boundary(const Triangle& t, const Point& p) {
    for (int e = 0; e < 3; ++e)
        if (orient(t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)], p) == Sign::Zero)
            return true;
    return false;
}

}  // namespace

ClippedArrangement build_arrangement(std::span<const CanonicalLine> lines, const Box& box) {
    if (lines.size() > kMaxArrangementLines)
        throw precondition_error("build_arrangement: at most " + std::to_string(kMaxArrangementLines) + " lines");
    if (!(box.xmin < box.xmax) || !(box.ymin < box.ymax))
        throw precondition_error("build_arrangement: empty box");
    ClippedArrangement arr;
    arr.box = box;
    std::set<std::string> seen;
    for (const auto& l : lines)
        if (seen.insert(l.to_string()).second) arr.lines.push_back(l);

    auto corners = box.corners();
    arr.faces.push_back(Face{std::vector<Point>(corners.begin(), corners.end())});
    std::vector<Point> pos, neg;
    for (const auto& l : arr.lines) {
        std::vector<Face> next;
        next.reserve(arr.faces.size() * 2);
        for (auto& f : arr.faces) {
            if (split_polygon(f.vertices, l, pos, neg)) {
                next.push_back(Face{neg});
                next.push_back(Face{pos});
            } else {
                next.push_back(std::move(f));
            }
        }
        arr.faces = std::move(next);
    }

    std::set<Point> vertices;
    std::set<std::pair<Point, Point>> edges;
    for (const auto& f : arr.faces) {
        const std::size_t k = f.vertices.size();
        for (std::size_t i = 0; i < k; ++i) {
            const Point& a = f.vertices[i];
            const Point& b = f.vertices[(i + 1) % k];
            vertices.insert(a);
            edges.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
        }
    }
    arr.vertex_count = vertices.size();
    arr.edge_count = edges.size();
    return arr;
}

Rational twice_area(std::span<const Point> polygon) {
    Rational s = 0;
    const std::size_t k = polygon.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Point& a = polygon[i];
        const Point& b = polygon[(i + 1) % k];
        s += a.x * b.y - a.y * b.x;
    }
    return s;
}

std::vector<Triangle> triangulate_face(const Face& face) {
    std::vector<Point> poly;
    const std::size_t k = face.vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Point& prev = face.vertices[(i + k - 1) % k];
        const Point& next = face.vertices[(i + 1) % k];
        if (orient(prev, face.vertices[i], next) != Sign::Zero) poly.push_back(face.vertices[i]);
    }
    if (poly.size() < 3) throw precondition_error("triangulate_face: face has fewer than 3 corners");

    std::vector<Triangle> out;
    while (poly.size() > 3) {
        std::vector<Point> kept;
        const std::size_t t = poly.size();
        for (std::size_t i = 0; i < t; i += 2) {
            kept.push_back(poly[i]);
            if (i + 1 < t) out.push_back({poly[i], poly[i + 1], poly[(i + 2) % t]});
        }
        poly = std::move(kept);
    }
    // An even round on a quadrilateral leaves just a diagonal.
    if (poly.size() == 3) out.push_back({poly[0], poly[1], poly[2]});
    return out;
}

std::size_t partition_sample_size(double r, double alpha) {
    double rho = alpha * std::sqrt(r);
    return static_cast<std::size_t>(std::ceil(rho * std::log(rho + 2.0)));
}

Partition build_partition(const PointSet& points, std::span<const CanonicalLine> separators, int r,
                          std::uint64_t seed, const PartitionOptions& options) {
    if (r < 1) throw precondition_error("build_partition: r must be at least 1");
    if (!(options.alpha > 0) || options.max_attempts < 1)
        throw precondition_error("build_partition: alpha and attempts must be positive");
    if (!verify(points, separators, SeparationMode::Strict))
        throw precondition_error("build_partition: the lines do not separate the points");

    const std::size_t n = points.size();
    const std::size_t want = std::min(partition_sample_size(r, options.alpha), separators.size());
    const Box box = padded_bounding_box(points);
    Rng rng(seed);

    Partition best;
    bool have_best = false;
    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        // Uniform sample without replacement (partial Fisher-Yates).
        std::vector<std::size_t> idx(separators.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = 0; i < want; ++i)
            std::swap(idx[i], idx[i + uniform_below(rng, idx.size() - i)]);
        std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(want));

        Partition part;
        part.box = box;
        part.attempts = attempt;
        part.source_sample_size = want;
        for (std::size_t i = 0; i < want; ++i) part.sample.push_back(separators[idx[i]]);
        ClippedArrangement arr = build_arrangement(part.sample, box);
        part.face_count = arr.faces.size();
        part.euler_holds = arr.euler_holds();

        // Faces keyed by their sign vector over the sample.
        std::map<std::vector<int>, std::size_t> face_of;
        std::vector<std::size_t> first_triangle(arr.faces.size() + 1, 0);
        for (std::size_t f = 0; f < arr.faces.size(); ++f) {
            const auto& vs = arr.faces[f].vertices;
            Point c(0, 0);
            Rational cx = 0, cy = 0;
            for (const auto& v : vs) {
                cx += v.x;
                cy += v.y;
            }
            c = Point(cx / static_cast<long>(vs.size()), cy / static_cast<long>(vs.size()));
            std::vector<int> key;
            for (const auto& l : arr.lines) key.push_back(to_int(side(l, c)));
            face_of[key] = f;
            for (auto& t : triangulate_face(arr.faces[f])) part.triangles.push_back(PartitionCell{t, {}});
            first_triangle[f + 1] = part.triangles.size();
        }

        for (std::uint32_t i = 0; i < n; ++i) {
            std::vector<int> key;
            bool on_line = false;
            for (const auto& l : arr.lines) {
                int s = to_int(side(l, points[i]));
                on_line |= s == 0;
                key.push_back(s);
            }
            std::size_t lo = 0, hi = part.triangles.size();
            if (!on_line) {
                auto it = face_of.find(key);
                if (it == face_of.end()) throw verification_error("build_partition: point outside every face");
                lo = first_triangle[it->second];
                hi = first_triangle[it->second + 1];
            }
            bool placed = false;
            for (std::size_t t = lo; t < hi && !placed; ++t) {
                if (!inside_closed(part.triangles[t].triangle, points[i])) continue;
                if (on_line || on_boundary(part.triangles[t].triangle, points[i])) ++part.boundary_ties;
                part.triangles[t].points.push_back(i);
                placed = true;
            }
            if (!placed) throw verification_error("build_partition: point not covered by any triangle");
        }
        for (const auto& t : part.triangles) part.max_load = std::max(part.max_load, t.points.size());
        part.conforming = part.max_load * static_cast<std::size_t>(r) <= n;
        if (!have_best || part.max_load < best.max_load) {
            best = std::move(part);
            have_best = true;
        }
        best.attempts = attempt;  // attempts made so far, not the index of the kept one
        if (best.conforming) break;
    }
    return best;
}

std::size_t stabbed_triangles(const Partition& partition, const CanonicalLine& line) {
    std::size_t count = 0;
    for (const auto& cell : partition.triangles) {
        bool pos = false, neg = false;
        for (const auto& v : cell.triangle) {
            int s = to_int(side(line, v));
            pos |= s > 0;
            neg |= s < 0;
        }
        if (pos && neg) ++count;
    }
    return count;
}

StabbingStats stabbing_stats(const Partition& partition, std::span<const CanonicalLine> test_lines) {
    StabbingStats s;
    if (test_lines.empty()) return s;
    double sum = 0;
    for (const auto& l : test_lines) {
        std::size_t c = stabbed_triangles(partition, l);
        s.max = std::max(s.max, c);
        sum += static_cast<double>(c);
    }
    s.mean = sum / static_cast<double>(test_lines.size());
    return s;
}

std::vector<CanonicalLine> random_test_lines(const Box& box, std::size_t count, Rng& rng) {
    constexpr std::uint64_t kSteps = std::uint64_t{1} << 30;
    auto boundary = [&](int s, const Rational& u) {
        Rational w = box.xmax - box.xmin, h = box.ymax - box.ymin;
        switch (s) {
            case 0: return Point(box.xmin + u * w, box.ymin);
            case 1: return Point(box.xmax, box.ymin + u * h);
            case 2: return Point(box.xmax - u * w, box.ymax);
            default: return Point(box.xmin, box.ymax - u * h);
        }
    };
    std::vector<CanonicalLine> out;
    out.reserve(count);
    while (out.size() < count) {
        int s1 = static_cast<int>(uniform_below(rng, 4));
        int s2 = static_cast<int>(uniform_below(rng, 4));
        Rational u1(static_cast<long>(uniform_below(rng, kSteps)), static_cast<long>(kSteps));
        Rational u2(static_cast<long>(uniform_below(rng, kSteps)), static_cast<long>(kSteps));
        u1.canonicalize();
        u2.canonicalize();
        if (s1 == s2) continue;
        Point p = boundary(s1, u1), q = boundary(s2, u2);
        if (p == q) continue;
        out.push_back(line_through(p, q));
    }
    return out;
}

}  // namespace linesep
