#include "linesep/geom.hpp"

#include "linesep/error.hpp"

namespace linesep {

std::string to_string(const Point& p) {
    return p.x.get_str() + " " + p.y.get_str();
}

CanonicalLine::CanonicalLine(Integer a, Integer b, Integer c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (a_ == 0 && b_ == 0) throw precondition_error("line with a = b = 0");
    Integer g = gcd(a_, b_);
    g = gcd(g, c_);
    if (g != 1) {
        mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(c_.get_mpz_t(), c_.get_mpz_t(), g.get_mpz_t());
    }
    if (a_ < 0 || (a_ == 0 && b_ < 0)) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
    }
}

CanonicalLine CanonicalLine::from_rational(const Rational& a, const Rational& b, const Rational& c) {
    Integer den = lcm(lcm(a.get_den(), b.get_den()), c.get_den());
    Rational sa = a * den, sb = b * den, sc = c * den;
    return CanonicalLine(sa.get_num(), sb.get_num(), sc.get_num());
}

CanonicalLine CanonicalLine::vertical(const Rational& x) {
    return from_rational(Rational(1), Rational(0), -x);
}

CanonicalLine CanonicalLine::horizontal(const Rational& y) {
    return from_rational(Rational(0), Rational(1), -y);
}

bool operator<(const CanonicalLine& l, const CanonicalLine& m) {
    int c = cmp(l.a_, m.a_);
    if (c != 0) return c < 0;
    c = cmp(l.b_, m.b_);
    if (c != 0) return c < 0;
    return cmp(l.c_, m.c_) < 0;
}

std::string CanonicalLine::to_string() const {
    return a_.get_str() + " " + b_.get_str() + " " + c_.get_str();
}

std::size_t CanonicalLineHash::operator()(const CanonicalLine& l) const {
    auto h = [](const Integer& v) -> std::size_t {
        std::size_t r = mpz_get_ui(v.get_mpz_t());
        return r ^ (static_cast<std::size_t>(sgn(v) + 1) << 61);
    };
    std::size_t seed = h(l.a());
    seed ^= h(l.b()) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    seed ^= h(l.c()) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
}

Sign orient(const Point& p, const Point& q, const Point& r) {
    Rational det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return sign_of(det);
}

CanonicalLine line_through(const Point& p, const Point& q) {
    if (p == q) throw precondition_error("line_through: degenerate pair (p = q)");
    // (y_p - y_q) x + (x_q - x_p) y + (x_p y_q - x_q y_p) = 0
    return CanonicalLine::from_rational(p.y - q.y, q.x - p.x, p.x * q.y - q.x * p.y);
}

Sign side(const CanonicalLine& l, const Point& p) {
    return sign_of(l.evaluate(p));
}

DualLine dualize_point(const Point& p) {
    return DualLine{p.x, -p.y};
}

Point dualize_line(const CanonicalLine& l) {
    if (l.is_vertical()) throw precondition_error("dualize_line: vertical line has no dual point");
    // y = -(a/b) x - c/b  is the dual of the point (-(a/b), c/b).
    Rational slope = -Rational(l.a()) / Rational(l.b());
    Rational intercept = -Rational(l.c()) / Rational(l.b());
    return Point(slope, -intercept);
}

Point dualize_dual(const DualLine& d) {
    return Point(d.slope, -d.intercept);
}

bool on_dual_line(const DualLine& d, const Point& p) {
    return p.y == d.slope * p.x + d.intercept;
}

Crossing segment_crossing(const CanonicalLine& l, const Point& p, const Point& q) {
    int sp = to_int(side(l, p));
    int sq = to_int(side(l, q));
    if (sp * sq == -1) return Crossing::StrictCross;
    if (sp == 0 || sq == 0) return Crossing::TouchesEndpoint;
    return Crossing::NoCross;
}

CanonicalLine perpendicular_bisector(const Point& p, const Point& q) {
    if (p == q) throw precondition_error("perpendicular_bisector: p = q");
    // 2(q - p) . z - (|q|^2 - |p|^2) = 0 ; p evaluates to -|q - p|^2 < 0.
    Rational a = 2 * (q.x - p.x);
    Rational b = 2 * (q.y - p.y);
    Rational c = p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y;
    return CanonicalLine::from_rational(a, b, c);
}

CanonicalLine shifted(const CanonicalLine& l, const Rational& delta) {
    return CanonicalLine::from_rational(Rational(l.a()), Rational(l.b()), Rational(l.c()) + delta);
}

bool parallel(const CanonicalLine& l, const CanonicalLine& m) {
    return l.a() * m.b() - m.a() * l.b() == 0;
}

Point intersection(const CanonicalLine& l, const CanonicalLine& m) {
    Integer det = l.a() * m.b() - m.a() * l.b();
    if (det == 0) throw precondition_error("intersection of parallel lines");
    Rational x = Rational(Integer(l.b() * m.c() - m.b() * l.c())) / Rational(det);
    Rational y = Rational(Integer(m.a() * l.c() - l.a() * m.c())) / Rational(det);
    return Point(x, y);
}

}  // namespace linesep
