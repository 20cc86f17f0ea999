#include "helpers.hpp"

#include "linesep/error.hpp"
#include "linesep/partition2d.hpp"
#include "linesep/solvers.hpp"

#include <doctest.h>

#include <cmath>

using namespace linesep;
using namespace testutil;

namespace {

Box square_box(long lo, long hi) { return Box{Rational(lo), Rational(lo), Rational(hi), Rational(hi)}; }

bool strictly_inside(const Box& b, const Point& p) {
    return p.x > b.xmin && p.x < b.xmax && p.y > b.ymin && p.y < b.ymax;
}

// 1 + crossing lines + interior vertices, for lines with no three concurrent.
std::size_t expected_faces(const std::vector<CanonicalLine>& lines, const Box& box) {
    std::size_t f = 1;
    auto c = box.corners();
    for (const auto& l : lines) {
        bool pos = false, neg = false;
        for (const auto& p : c) {
            pos = pos || side(l, p) == Sign::Positive;
            neg = neg || side(l, p) == Sign::Negative;
        }
        f += pos && neg;
    }
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            if (!parallel(lines[i], lines[j]) && strictly_inside(box, intersection(lines[i], lines[j]))) ++f;
    return f;
}

bool meets_interior(const Triangle& t, const CanonicalLine& l) {
    bool pos = false, neg = false;
    for (const auto& p : t) {
        pos = pos || side(l, p) == Sign::Positive;
        neg = neg || side(l, p) == Sign::Negative;
    }
    return pos && neg;
}

bool in_closed_triangle(const Triangle& t, const Point& p) {
    for (int e = 0; e < 3; ++e)
        if (orient(t[e], t[(e + 1) % 3], p) == Sign::Negative) return false;
    return true;
}

std::vector<Point> round_polygon(std::size_t k, long radius) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < k; ++i) {
        double a = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
        out.emplace_back(std::lround(radius * std::cos(a)), std::lround(radius * std::sin(a)));
    }
    return out;
}

}  // namespace

TEST_SUITE("partition2d") {

TEST_CASE("arrangement examples") {
    Box box = square_box(0, 4);
    auto empty = build_arrangement(std::vector<CanonicalLine>{}, box);
    CHECK(empty.faces.size() == 1);
    CHECK(empty.faces[0].vertices.size() == 4);
    CHECK(empty.euler_holds());

    std::vector<CanonicalLine> one{CanonicalLine::vertical(Rational(1))};
    auto a1 = build_arrangement(one, box);
    CHECK(a1.faces.size() == 2);
    CHECK(a1.euler_holds());

    std::vector<CanonicalLine> cross{CanonicalLine::vertical(Rational(2)), CanonicalLine::horizontal(Rational(2))};
    auto a2 = build_arrangement(cross, box);
    CHECK(a2.faces.size() == 4);
    CHECK(a2.vertex_count == 9);
    CHECK(a2.edge_count == 12);

    // Duplicates collapse; lines missing the box change nothing.
    std::vector<CanonicalLine> dup{CanonicalLine::vertical(Rational(2)), CanonicalLine(2, 0, -4),
                                   CanonicalLine::vertical(Rational(9))};
    auto a3 = build_arrangement(dup, box);
    CHECK(a3.faces.size() == 2);

    std::vector<CanonicalLine> many(kMaxArrangementLines + 1, CanonicalLine::vertical(Rational(1)));
    for (std::size_t i = 0; i < many.size(); ++i) many[i] = CanonicalLine::vertical(Rational(static_cast<long>(i)) / 1000);
    CHECK_THROWS_AS(build_arrangement(many, box), Error);
}

TEST_CASE("face count, Euler and area on random arrangements") {
    Rng rng(51);
    Box box = square_box(-1000, 1000);
    for (int it = 0; it < 25; ++it) {
        std::vector<CanonicalLine> lines;
        const std::size_t m = uniform_below(rng, 40);
        for (std::size_t k = 0; k < m; ++k) lines.push_back(random_line(rng));
        // Concurrent triples would change the count; redraw them.
        bool generic = true;
        for (std::size_t i = 0; i < m && generic; ++i)
            for (std::size_t j = i + 1; j < m && generic; ++j) {
                if (parallel(lines[i], lines[j])) continue;
                Point x = intersection(lines[i], lines[j]);
                for (std::size_t k = j + 1; k < m && generic; ++k) generic = side(lines[k], x) != Sign::Zero;
            }
        if (!generic) continue;
        auto arr = build_arrangement(lines, box);
        CHECK(arr.euler_holds());
        CHECK(arr.faces.size() == expected_faces(lines, box));
        Rational area = 0;
        for (const auto& f : arr.faces) {
            CHECK(twice_area(f.vertices) > 0);
            area += twice_area(f.vertices);
            auto tris = triangulate_face(f);
            CHECK(tris.size() == f.vertices.size() - 2);
            Rational tri_area = 0;
            for (const auto& t : tris) {
                CHECK(twice_area(t) > 0);
                tri_area += twice_area(t);
            }
            CHECK(tri_area == twice_area(f.vertices));
        }
        CHECK(area == 2 * Rational(2000) * 2000);
    }
}

TEST_CASE("triangulation examples") {
    Face tri{{pt(0, 0), pt(1, 0), pt(0, 1)}};
    auto t1 = triangulate_face(tri);
    REQUIRE(t1.size() == 1);
    CHECK(twice_area(t1[0]) == 1);
    Face sq{{pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)}};
    CHECK(triangulate_face(sq).size() == 2);
    // A collinear boundary vertex is dropped.
    Face flat{{pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 2), pt(0, 2)}};
    CHECK(triangulate_face(flat).size() == 2);
    CHECK(twice_area(std::vector<Point>{pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)}) == 8);
}

TEST_CASE("halving triangulation of a 64-gon has logarithmic stabbing") {
    Face f{round_polygon(64, 1000000)};
    auto tris = triangulate_face(f);
    CHECK(tris.size() == 62);
    Rational area = 0;
    for (const auto& t : tris) area += twice_area(t);
    CHECK(area == twice_area(f.vertices));
    Rng rng(61);
    Box box = square_box(-1000000, 1000000);
    std::size_t worst = 0;
    for (const auto& l : random_test_lines(box, 1000, rng)) {
        std::size_t hit = 0;
        for (const auto& t : tris) hit += meets_interior(t, l);
        worst = std::max(worst, hit);
    }
    CHECK(worst <= 12);
}

TEST_CASE("bounding box and sample size") {
    auto P = make_set({{0, 0}, {10, 5}});
    Box b = padded_bounding_box(P);
    CHECK(b.xmin == -1);
    CHECK(b.xmax == 11);
    CHECK(b.ymin == Rational(-1) / 2);
    CHECK(b.ymax == Rational(11) / 2);
    auto flat = padded_bounding_box(make_set({{0, 3}, {4, 3}}));
    CHECK(flat.ymin < 3);
    CHECK(flat.ymax > 3);
    CHECK(partition_sample_size(16, 2.0) == static_cast<std::size_t>(std::ceil(8 * std::log(10.0))));
    CHECK(partition_sample_size(1, 2.0) == static_cast<std::size_t>(std::ceil(2 * std::log(4.0))));
}

TEST_CASE("partition of a jittered grid") {
    Rng rng(71);
    auto [pts, lines] = jittered_grid(8, rng);
    PointSet P(pts);
    REQUIRE(verify(P, lines, SeparationMode::Strict));
    for (int r : {1, 4}) {
        auto part = build_partition(P, lines, r, 9);
        CHECK(part.euler_holds);
        CHECK(part.source_sample_size == std::min(lines.size(), partition_sample_size(r, 2.0)));
        std::vector<int> owner(P.size(), 0);
        std::size_t total = 0, load = 0;
        for (const auto& c : part.triangles) {
            CHECK(twice_area(c.triangle) > 0);
            total += c.points.size();
            load = std::max(load, c.points.size());
            for (auto i : c.points) {
                ++owner[i];
                CHECK(in_closed_triangle(c.triangle, P[i]));
            }
        }
        CHECK(total == P.size());
        CHECK(std::all_of(owner.begin(), owner.end(), [](int o) { return o == 1; }));
        CHECK(load == part.max_load);
        CHECK(part.conforming == (load * static_cast<std::size_t>(r) <= P.size()));
        if (r == 4) CHECK(part.conforming);

        auto test = random_test_lines(part.box, 200, rng);
        auto st = stabbing_stats(part, test);
        std::size_t worst = 0;
        double sum = 0;
        for (const auto& l : test) {
            std::size_t hit = 0;
            for (const auto& c : part.triangles) hit += meets_interior(c.triangle, l);
            CHECK(stabbed_triangles(part, l) == hit);
            worst = std::max(worst, hit);
            sum += static_cast<double>(hit);
        }
        CHECK(st.max == worst);
        CHECK(st.mean == doctest::Approx(sum / 200));
    }
    // Same seed, same partition.
    auto a = build_partition(P, lines, 4, 3), b = build_partition(P, lines, 4, 3);
    CHECK(a.sample == b.sample);
    CHECK(a.attempts == b.attempts);
}

TEST_CASE("stabbing examples") {
    Partition p;
    p.triangles.push_back({Triangle{pt(0, 0), pt(2, 0), pt(0, 2)}, {}});
    std::vector<CanonicalLine> through{CanonicalLine::horizontal(Rational(1)), CanonicalLine::horizontal(Rational(5))};
    auto s = stabbing_stats(p, through);
    CHECK(s.max == 1);
    CHECK(s.mean == doctest::Approx(0.5));
    Partition row;
    for (long k = 0; k < 6; ++k) row.triangles.push_back({Triangle{pt(3 * k, 0), pt(3 * k + 2, 0), pt(3 * k + 1, 2)}, {}});
    CHECK(stabbed_triangles(row, CanonicalLine::horizontal(Rational(1))) == 6);
}

TEST_CASE("partition errors") {
    auto P = make_set({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    std::vector<CanonicalLine> half{CanonicalLine::vertical(Rational(1) / 2)};
    CHECK_THROWS_AS(build_partition(P, half, 2, 1), Error);
    std::vector<CanonicalLine> both{CanonicalLine::vertical(Rational(1) / 2), CanonicalLine::horizontal(Rational(1) / 2)};
    CHECK_THROWS_AS(build_partition(P, both, 0, 1), Error);
    CHECK_NOTHROW(build_partition(P, both, 1, 1));
}

}  // TEST_SUITE
