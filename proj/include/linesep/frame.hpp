#pragma once

// Integer embedding of a point set for fast exact side tests.
//
// Every point is scaled by D = lcm of all coordinate denominators, so the set
// lives on the integer lattice. A line a*u + b*v + c = 0 in lattice
// coordinates is evaluated in __int128 when each of the three terms is
// bounded by 2^125; otherwise the evaluation falls back to GMP.

#include "linesep/geom.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace linesep {

using i128 = __int128;

struct FrameLine {
    i128 a = 0, b = 0, c = 0;
    bool fast = true;
    // Set only when !fast.
    std::shared_ptr<const std::array<Integer, 3>> wide;
};

class IntegerFrame {
public:
    IntegerFrame() = default;
    explicit IntegerFrame(std::span<const Point> points);

    std::size_t size() const { return xs_.size(); }
    bool fast() const { return fast_; }
    const Integer& scale() const { return scale_; }
    const Integer& x(std::size_t i) const { return xs_[i]; }
    const Integer& y(std::size_t i) const { return ys_[i]; }
    // Bit length of the largest lattice coordinate magnitude.
    int coord_bits() const { return coord_bits_; }

    FrameLine to_frame(const CanonicalLine& l) const;
    FrameLine make_line(const Integer& a, const Integer& b, const Integer& c) const;
    // Lattice line through points i and j (not normalized).
    FrameLine through(std::size_t i, std::size_t j) const;
    CanonicalLine to_canonical(const FrameLine& l) const;

    int sign(const FrameLine& l, std::size_t i) const {
        if (l.fast && fast_) {
            i128 v = l.a * x128_[i] + l.b * y128_[i] + l.c;
            return (v > 0) - (v < 0);
        }
        return slow_sign(l, i);
    }

    i128 x128(std::size_t i) const { return x128_[i]; }
    i128 y128(std::size_t i) const { return y128_[i]; }

    // Signs of l at points idx[0..count), or at every point when idx is null.
    void signs(const FrameLine& l, const std::uint32_t* idx, std::size_t count, std::int8_t* out) const;

private:
    int slow_sign(const FrameLine& l, std::size_t i) const;

    Integer scale_ = 1;
    std::vector<Integer> xs_, ys_;
    std::vector<i128> x128_, y128_;
    bool fast_ = true;
    int coord_bits_ = 0;
};

Integer to_integer(i128 v);
int bit_length(i128 v);
bool fits_i128(const Integer& v, int max_bits);
i128 to_i128(const Integer& v);

}  // namespace linesep
