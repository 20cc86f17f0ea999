#include "helpers.hpp"

#include "linesep/error.hpp"

#include <doctest.h>

using namespace linesep;
using namespace testutil;

TEST_SUITE("geom") {

TEST_CASE("orient examples") {
    CHECK(orient(pt(0, 0), pt(1, 0), pt(0, 1)) == Sign::Positive);
    CHECK(orient(pt(0, 0), pt(1, 1), pt(2, 2)) == Sign::Zero);
    CHECK(orient(pt(0, 0), pt(2, 1), pt(1, 3)) == Sign::Positive);
    CHECK(orient(pt(0, 0), pt(0, 1), pt(1, 0)) == Sign::Negative);
}

TEST_CASE("line_through examples") {
    auto l = line_through(pt(0, 0), pt(1, 1));
    CHECK(l.a() == 1);
    CHECK(l.b() == -1);
    CHECK(l.c() == 0);
    CHECK(line_through(pt(0, 0), pt(0, 1)) == CanonicalLine(1, 0, 0));
    CHECK(line_through(pt(1, 2), pt(3, 2)) == CanonicalLine(0, 1, -2));
    CHECK_THROWS_AS(line_through(pt(1, 2), pt(1, 2)), Error);
}

TEST_CASE("canonical form") {
    CHECK(CanonicalLine(2, -2, 0) == CanonicalLine(1, -1, 0));
    CHECK(CanonicalLine(-3, 0, 6) == CanonicalLine(1, 0, -2));
    CHECK(CanonicalLine(0, -4, 2) == CanonicalLine(0, 2, -1));
    auto l = CanonicalLine(0, -4, 2);
    CHECK(l.b() == 2);
    CHECK(l.c() == -1);
    CHECK_THROWS_AS(CanonicalLine(0, 0, 5), Error);
    CHECK(CanonicalLine::from_rational(Rational(1) / 2, Rational(-1) / 3, Rational(1) / 6) == CanonicalLine(3, -2, 1));
    CHECK(CanonicalLine::vertical(Rational(1) / 2) == CanonicalLine(2, 0, -1));
    CHECK(CanonicalLine::horizontal(Rational(3) / 4) == CanonicalLine(0, 4, -3));
    CHECK(CanonicalLineHash{}(CanonicalLine(2, 4, 6)) == CanonicalLineHash{}(CanonicalLine(1, 2, 3)));
}

TEST_CASE("side examples") {
    CHECK(side(CanonicalLine(1, 0, 0), pt(5, 3)) == Sign::Positive);
    CHECK(side(CanonicalLine(1, 0, 0), pt(0, 7)) == Sign::Zero);
    CHECK(side(CanonicalLine(1, -1, 0), pt(1, 2)) == Sign::Negative);
}

TEST_CASE("duality examples") {
    DualLine d0 = dualize_point(pt(0, 0));
    CHECK(d0.slope == 0);
    CHECK(d0.intercept == 0);
    DualLine d1 = dualize_point(pt(1, 2));
    CHECK(d1.slope == 1);
    CHECK(d1.intercept == -2);
    CHECK(dualize_dual(dualize_point(pt(3, 5))) == pt(3, 5));
    CHECK_THROWS_AS(dualize_line(CanonicalLine(1, 0, -2)), Error);
}

TEST_CASE("segment_crossing examples") {
    CanonicalLine y_axis(1, 0, 0);
    CHECK(segment_crossing(y_axis, pt(-1, 0), pt(1, 1)) == Crossing::StrictCross);
    CHECK(segment_crossing(y_axis, pt(0, 0), pt(1, 1)) == Crossing::TouchesEndpoint);
    CHECK(segment_crossing(y_axis, pt(1, 0), pt(2, 5)) == Crossing::NoCross);
}

TEST_CASE("bisector, shift, intersection") {
    Point p = pq(1, 3, 2, 5), q = pq(-7, 2, 1, 9);
    CanonicalLine b = perpendicular_bisector(p, q);
    CHECK(to_int(side(b, p)) * to_int(side(b, q)) == -1);
    // The midpoint is on it, and it is perpendicular to pq.
    Point mid((p.x + q.x) / 2, (p.y + q.y) / 2);
    CHECK(side(b, mid) == Sign::Zero);
    CHECK(Rational(b.a() * (q.y - p.y) - b.b() * (q.x - p.x)) == 0);

    CanonicalLine s = shifted(CanonicalLine(1, 1, 0), Rational(1) / 2);
    CHECK(s == CanonicalLine(2, 2, 1));

    CanonicalLine l(1, -1, 0), m(1, 1, -2);
    Point x = intersection(l, m);
    CHECK(x == pt(1, 1));
    CHECK(parallel(CanonicalLine(1, 2, 3), CanonicalLine(2, 4, 0)));
    CHECK_FALSE(parallel(l, m));
}

TEST_CASE("properties on random rational points") {
    Rng rng(11);
    auto rnd = [&] {
        long num = static_cast<long>(uniform_below(rng, 2001)) - 1000;
        long den = static_cast<long>(uniform_below(rng, 97)) + 1;
        return Rational(num) / den;
    };
    for (int it = 0; it < 2000; ++it) {
        Point p(rnd(), rnd()), q(rnd(), rnd()), r(rnd(), rnd());
        CHECK(orient(p, q, r) == -orient(q, p, r));
        CHECK(orient(p, q, r) == -orient(p, r, q));
        CHECK(orient(p, q, r) == orient(q, r, p));
        if (p == q) continue;
        CanonicalLine l = line_through(p, q);
        CHECK(side(l, p) == Sign::Zero);
        CHECK(side(l, q) == Sign::Zero);

        // Floating point agrees whenever its magnitude clears a generous error bound.
        double v = l.a().get_d() * r.x.get_d() + l.b().get_d() * r.y.get_d() + l.c().get_d();
        double bound = 1e-9 * (std::fabs(l.a().get_d() * r.x.get_d()) + std::fabs(l.b().get_d() * r.y.get_d()) +
                               std::fabs(l.c().get_d()));
        if (std::fabs(v) > bound) CHECK(side(l, r) == (v > 0 ? Sign::Positive : Sign::Negative));

        if (!l.is_vertical()) {
            bool on = side(l, r) == Sign::Zero;
            CHECK(on == on_dual_line(dualize_point(r), dualize_line(l)));
            CHECK(on_dual_line(dualize_point(p), dualize_line(l)));
        }
    }
}

TEST_CASE("point ordering and text") {
    CHECK(pt(0, 5) < pt(1, 0));
    CHECK(pt(1, 0) < pt(1, 2));
    CHECK(Point(Rational(2) / 4, Rational(3)) == pq(1, 2, 3, 1));
    CHECK(to_string(pq(1, 2, -3, 1)) == "1/2 -3");
}

}  // TEST_SUITE
