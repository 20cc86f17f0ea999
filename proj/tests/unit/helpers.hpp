#pragma once

#include "linesep/cellsample.hpp"
#include "linesep/error.hpp"
#include "linesep/geom.hpp"
#include "linesep/random.hpp"
#include "linesep/sepsys.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

namespace testutil {

using namespace linesep;

inline Point pt(long x, long y) { return Point(x, y); }
inline Point pq(long xn, long xd, long yn, long yd) { return Point(Rational(xn) / xd, Rational(yn) / yd); }

inline PointSet make_set(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<Point> out;
    for (auto [x, y] : xs) out.emplace_back(x, y);
    return PointSet(std::move(out));
}

// Distinct random points with small integer coordinates in [0, range).
inline std::vector<Point> random_small_points(std::size_t n, long range, Rng& rng) {
    std::set<std::pair<long, long>> seen;
    std::vector<Point> out;
    while (out.size() < n) {
        long x = static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(range)));
        long y = static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(range)));
        if (seen.insert({x, y}).second) out.emplace_back(x, y);
    }
    return out;
}

// Random points with no three collinear, checked by brute force.
inline std::vector<Point> random_general_points(std::size_t n, long range, Rng& rng) {
    std::vector<Point> out;
    while (out.size() < n) {
        Point p(static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(range))),
                static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(range))));
        bool ok = true;
        for (std::size_t i = 0; i < out.size() && ok; ++i) {
            if (out[i] == p) ok = false;
            for (std::size_t j = i + 1; j < out.size() && ok; ++j)
                if (orient(out[i], out[j], p) == Sign::Zero) ok = false;
        }
        if (ok) out.push_back(p);
    }
    return out;
}

// Vertices of a convex polygon on the parabola y = x^2 (no three collinear).
inline std::vector<Point> convex_ngon(std::size_t n) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
        long x = static_cast<long>(i);
        out.emplace_back(x, x * x);
    }
    return out;
}

// 3x3 grid with small distinct perturbations that remove all collinear triples.
inline std::vector<Point> perturbed_grid3() {
    const long jitter[9][2] = {{0, 1}, {2, 0}, {0, 3}, {5, 0}, {0, 7}, {11, 0}, {0, 13}, {17, 0}, {0, 19}};
    std::vector<Point> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.emplace_back(Rational(100 * i + jitter[3 * i + j][0]) / 100,
                             Rational(100 * j + jitter[3 * i + j][1]) / 100);
    return out;
}

// Brute-force separation check over every pair and line, straight from the definition.
inline bool separates_bruteforce(const std::vector<Point>& pts, const std::vector<CanonicalLine>& lines,
                                 SeparationMode mode) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            bool ok = false;
            for (const auto& l : lines) {
                int si = to_int(side(l, pts[i])), sj = to_int(side(l, pts[j]));
                if (mode == SeparationMode::Strict ? si * sj < 0 : si != sj) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
    return true;
}

// Random strictly convex polygon with k vertices near a circle of radius 1000.
inline std::vector<Point> random_convex_polygon(std::size_t k, Rng& rng) {
    for (;;) {
        std::vector<double> angles;
        for (std::size_t i = 0; i < k; ++i) angles.push_back(uniform01(rng) * 2 * std::numbers::pi);
        std::sort(angles.begin(), angles.end());
        std::vector<Point> out;
        for (double a : angles) out.emplace_back(std::lround(1000 * std::cos(a)), std::lround(1000 * std::sin(a)));
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i)
            ok = orient(out[i], out[(i + 1) % k], out[(i + 2) % k]) == Sign::Positive;
        if (ok) return out;
    }
}

// Random line through a random point of [-1000, 1000]^2.
inline CanonicalLine random_line(Rng& rng) {
    auto r = [&](long range) {
        return static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(2 * range + 1))) - range;
    };
    for (;;) {
        long a = r(997), b = r(997);
        if (a == 0 && b == 0) continue;
        long x = r(1000), y = r(1000);
        return CanonicalLine(Integer(a), Integer(b), Integer(-(a * x + b * y) + r(50)));
    }
}

// Pairs (i < j) of lines meeting strictly inside the counterclockwise polygon.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> interior_pairs(const std::vector<Point>& poly,
                                                                           const std::vector<CanonicalLine>& lines) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t i = 0; i < lines.size(); ++i)
        for (std::uint32_t j = i + 1; j < lines.size(); ++j) {
            const Integer det = lines[i].a() * lines[j].b() - lines[j].a() * lines[i].b();
            if (det == 0) continue;
            Rational px(lines[i].b() * lines[j].c() - lines[j].b() * lines[i].c(), det);
            Rational py(lines[j].a() * lines[i].c() - lines[i].a() * lines[j].c(), det);
            px.canonicalize();
            py.canonicalize();
            Point x(px, py);
            bool inside = true;
            for (std::size_t e = 0; e < poly.size() && inside; ++e)
                inside = orient(poly[e], poly[(e + 1) % poly.size()], x) == Sign::Positive;
            if (inside) out.emplace_back(i, j);
        }
    return out;
}

// k x k grid of cell centres in the unit square, each jittered by less than
// 1/(32k), with the 2(k - 1) interior grid lines that separate them.
inline std::pair<std::vector<Point>, std::vector<CanonicalLine>> jittered_grid(long k, Rng& rng) {
    const long den = 256000;
    const long spread = 8000 / k;
    auto jitter = [&] { return static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(2 * spread + 1))) - spread; };
    std::vector<Point> pts;
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j)
            pts.emplace_back(Rational(2 * i + 1) / (2 * k) + Rational(jitter()) / den,
                             Rational(2 * j + 1) / (2 * k) + Rational(jitter()) / den);
    std::vector<CanonicalLine> lines;
    for (long i = 1; i < k; ++i) lines.push_back(CanonicalLine::vertical(Rational(i) / k));
    for (long i = 1; i < k; ++i) lines.push_back(CanonicalLine::horizontal(Rational(i) / k));
    return {pts, lines};
}

// A random cell with m lines that avoid vertices and shared boundary points.
struct Instance {
    std::vector<Point> poly;
    std::vector<CanonicalLine> lines;
};

inline Instance random_instance(std::size_t k, std::size_t m, Rng& rng) {
    for (;;) {
        Instance in{random_convex_polygon(k, rng), {}};
        std::set<CanonicalLine> seen;
        while (in.lines.size() < m) {
            CanonicalLine l = random_line(rng);
            if (seen.insert(l).second) in.lines.push_back(l);
        }
        try {
            build_index(ConvexCell(in.poly), in.lines);
            return in;
        } catch (const Error&) {
        }
    }
}

}  // namespace testutil
