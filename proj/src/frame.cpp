#include "linesep/frame.hpp"

#include "linesep/error.hpp"

namespace linesep {

namespace {

constexpr int kTermBits = 125;
constexpr int kFastCoordBits = 62;

int bits_of(const Integer& v) {
    return v == 0 ? 0 : static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

}  // namespace

int bit_length(i128 v) {
    unsigned __int128 m = v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    int bits = 0;
    while (m != 0) {
        m >>= 1;
        ++bits;
    }
    return bits;
}

bool fits_i128(const Integer& v, int max_bits) {
    return bits_of(v) <= max_bits;
}

i128 to_i128(const Integer& v) {
    // Magnitude assumed below 2^126.
    Integer m = abs(v);
    Integer hi = m >> 64;
    Integer lo = m - (hi << 64);
    unsigned __int128 r = (static_cast<unsigned __int128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
                          static_cast<unsigned __int128>(mpz_get_ui(lo.get_mpz_t()));
    i128 out = static_cast<i128>(r);
    return sgn(v) < 0 ? -out : out;
}

Integer to_integer(i128 v) {
    bool neg = v < 0;
    unsigned __int128 m = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    Integer hi = static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64));
    Integer lo = static_cast<unsigned long>(static_cast<std::uint64_t>(m));
    Integer r = (hi << 64) + lo;
    return neg ? Integer(-r) : r;
}

IntegerFrame::IntegerFrame(std::span<const Point> points) {
    scale_ = 1;
    for (const Point& p : points) {
        scale_ = lcm(scale_, p.x.get_den());
        scale_ = lcm(scale_, p.y.get_den());
    }
    xs_.reserve(points.size());
    ys_.reserve(points.size());
    coord_bits_ = 0;
    for (const Point& p : points) {
        Integer xv = p.x.get_num() * (scale_ / p.x.get_den());
        Integer yv = p.y.get_num() * (scale_ / p.y.get_den());
        coord_bits_ = std::max({coord_bits_, bits_of(xv), bits_of(yv)});
        xs_.push_back(std::move(xv));
        ys_.push_back(std::move(yv));
    }
    coord_bits_ = std::max(coord_bits_, bits_of(scale_));
    fast_ = coord_bits_ <= kFastCoordBits;
    if (fast_) {
        x128_.reserve(xs_.size());
        y128_.reserve(ys_.size());
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            x128_.push_back(to_i128(xs_[i]));
            y128_.push_back(to_i128(ys_[i]));
        }
    }
}

void IntegerFrame::signs(const FrameLine& l, const std::uint32_t* idx, std::size_t count, std::int8_t* out) const {
    if (!l.fast || !fast_) {
        for (std::size_t k = 0; k < count; ++k) out[k] = static_cast<std::int8_t>(sign(l, idx ? idx[k] : k));
        return;
    }
    const i128 a = l.a, b = l.b, c = l.c;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = idx ? idx[k] : k;
        const i128 v = a * x128_[i] + b * y128_[i] + c;
        out[k] = static_cast<std::int8_t>((v > 0) - (v < 0));
    }
}

FrameLine IntegerFrame::make_line(const Integer& a, const Integer& b, const Integer& c) const {
    FrameLine out;
    bool fits = fast_ && bits_of(a) + coord_bits_ <= kTermBits && bits_of(b) + coord_bits_ <= kTermBits &&
                bits_of(c) <= kTermBits;
    if (fits) {
        out.a = to_i128(a);
        out.b = to_i128(b);
        out.c = to_i128(c);
        out.fast = true;
    } else {
        out.fast = false;
        out.wide = std::make_shared<const std::array<Integer, 3>>(std::array<Integer, 3>{a, b, c});
    }
    return out;
}

FrameLine IntegerFrame::to_frame(const CanonicalLine& l) const {
    return make_line(l.a(), l.b(), Integer(l.c() * scale_));
}

FrameLine IntegerFrame::through(std::size_t i, std::size_t j) const {
    if (fast_) {
        FrameLine out;
        out.a = y128_[i] - y128_[j];
        out.b = x128_[j] - x128_[i];
        out.c = x128_[i] * y128_[j] - x128_[j] * y128_[i];
        out.fast = true;
        return out;
    }
    return make_line(Integer(ys_[i] - ys_[j]), Integer(xs_[j] - xs_[i]),
                     Integer(xs_[i] * ys_[j] - xs_[j] * ys_[i]));
}

CanonicalLine IntegerFrame::to_canonical(const FrameLine& l) const {
    if (l.fast) return CanonicalLine(to_integer(l.a) * scale_, to_integer(l.b) * scale_, to_integer(l.c));
    const auto& w = *l.wide;
    return CanonicalLine(w[0] * scale_, w[1] * scale_, w[2]);
}

int IntegerFrame::slow_sign(const FrameLine& l, std::size_t i) const {
    Integer v;
    if (l.fast) {
        v = to_integer(l.a) * xs_[i] + to_integer(l.b) * ys_[i] + to_integer(l.c);
    } else {
        const auto& w = *l.wide;
        v = w[0] * xs_[i] + w[1] * ys_[i] + w[2];
    }
    return sgn(v);
}

}  // namespace linesep
