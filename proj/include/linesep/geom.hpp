#pragma once

// Exact planar primitives over GMP rationals.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <string>

namespace linesep {

using Integer = mpz_class;
using Rational = mpq_class;

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

constexpr Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
constexpr int to_int(Sign s) { return static_cast<int>(s); }
inline Sign sign_of(int v) { return v > 0 ? Sign::Positive : (v < 0 ? Sign::Negative : Sign::Zero); }
inline Sign sign_of(const Integer& v) { return sign_of(sgn(v)); }
inline Sign sign_of(const Rational& v) { return sign_of(sgn(v)); }

struct Point {
    Rational x;
    Rational y;

    Point() = default;
    Point(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {
        x.canonicalize();
        y.canonicalize();
    }
    Point(long x_, long y_) : x(x_), y(y_) {}

    friend bool operator==(const Point& p, const Point& q) { return p.x == q.x && p.y == q.y; }
    friend bool operator!=(const Point& p, const Point& q) { return !(p == q); }
    // Lexicographic (x, then y).
    friend bool operator<(const Point& p, const Point& q) {
        if (p.x != q.x) return p.x < q.x;
        return p.y < q.y;
    }
};

std::string to_string(const Point& p);

// Locus a*x + b*y + c = 0 with gcd(|a|,|b|,|c|) = 1 and a > 0, or a = 0 and b > 0.
class CanonicalLine {
public:
    // Normalizes; throws a precondition error when a = b = 0.
    CanonicalLine(Integer a, Integer b, Integer c);
    // Rational coefficients are scaled to integers first.
    static CanonicalLine from_rational(const Rational& a, const Rational& b, const Rational& c);
    static CanonicalLine vertical(const Rational& x);    // x = const
    static CanonicalLine horizontal(const Rational& y);  // y = const

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }

    bool is_vertical() const { return b_ == 0; }
    Rational evaluate(const Point& p) const { return a_ * p.x + b_ * p.y + c_; }

    friend bool operator==(const CanonicalLine& l, const CanonicalLine& m) {
        return l.a_ == m.a_ && l.b_ == m.b_ && l.c_ == m.c_;
    }
    friend bool operator!=(const CanonicalLine& l, const CanonicalLine& m) { return !(l == m); }
    // Canonical order: lexicographic on (a, b, c).
    friend bool operator<(const CanonicalLine& l, const CanonicalLine& m);

    std::string to_string() const;

private:
    Integer a_, b_, c_;
};

struct CanonicalLineHash {
    std::size_t operator()(const CanonicalLine& l) const;
};

// Dual of point (p, q) is y = p*x - q.
struct DualLine {
    Rational slope;
    Rational intercept;

    friend bool operator==(const DualLine& l, const DualLine& m) {
        return l.slope == m.slope && l.intercept == m.intercept;
    }
};

enum class Crossing { StrictCross, TouchesEndpoint, NoCross };

Sign orient(const Point& p, const Point& q, const Point& r);
CanonicalLine line_through(const Point& p, const Point& q);
Sign side(const CanonicalLine& l, const Point& p);
DualLine dualize_point(const Point& p);
// Requires a non-vertical line.
Point dualize_line(const CanonicalLine& l);
// The primal point a dual line came from.
Point dualize_dual(const DualLine& d);
bool on_dual_line(const DualLine& d, const Point& p);
Crossing segment_crossing(const CanonicalLine& l, const Point& p, const Point& q);

// Perpendicular bisector of p and q (canonical, so either may be on the positive side).
CanonicalLine perpendicular_bisector(const Point& p, const Point& q);
// Line with the same normal shifted so its value changes by `delta`: a*x + b*y + (c + delta) = 0.
CanonicalLine shifted(const CanonicalLine& l, const Rational& delta);
// Intersection point of two non-parallel lines.
Point intersection(const CanonicalLine& l, const CanonicalLine& m);
bool parallel(const CanonicalLine& l, const CanonicalLine& m);

}  // namespace linesep
