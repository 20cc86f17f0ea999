#include "linesep/sepsys.hpp"

#include "linesep/error.hpp"
#include "linesep/random.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_map>

namespace linesep {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

struct LineKey {
    i128 a, b, c;
    friend bool operator==(const LineKey&, const LineKey&) = default;
};

struct LineKeyHash {
    std::size_t operator()(const LineKey& k) const {
        auto part = [](i128 v) {
            return splitmix64(static_cast<std::uint64_t>(v) ^ splitmix64(static_cast<std::uint64_t>(v >> 64)));
        };
        return part(k.a) ^ (part(k.b) * 3) ^ (part(k.c) * 7);
    }
};

LineKey normalize(const FrameLine& l) {
    i128 g = gcd128(gcd128(l.a, l.b), l.c);
    LineKey k{l.a / g, l.b / g, l.c / g};
    if (k.a < 0 || (k.a == 0 && k.b < 0)) k = {-k.a, -k.b, -k.c};
    return k;
}

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

template <typename T>
int cross_sign(const T& ax, const T& ay, const T& bx, const T& by) {
    T v = ax * by - ay * bx;
    return (v > 0) - (v < 0);
}

// Directions from point i to every other point, folded into a half-plane and
// sorted by angle; equal neighbours mean a collinear triple through i.
template <typename T>
bool collinear_through(const std::vector<T>& xs, const std::vector<T>& ys, std::size_t i) {
    std::vector<std::pair<T, T>> dirs;
    dirs.reserve(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j == i) continue;
        T dx = xs[j] - xs[i];
        T dy = ys[j] - ys[i];
        if (dx < 0 || (dx == 0 && dy < 0)) {
            dx = -dx;
            dy = -dy;
        }
        dirs.emplace_back(dx, dy);
    }
    std::sort(dirs.begin(), dirs.end(), [](const auto& u, const auto& v) {
        return cross_sign(u.first, u.second, v.first, v.second) > 0;
    });
    for (std::size_t k = 1; k < dirs.size(); ++k) {
        if (cross_sign(dirs[k - 1].first, dirs[k - 1].second, dirs[k].first, dirs[k].second) == 0) return true;
    }
    return false;
}

std::uint64_t zobrist(std::size_t line, int s) {
    return splitmix64(static_cast<std::uint64_t>(line) * 3 + static_cast<std::uint64_t>(s + 1) + 0x5157ULL);
}

bool pair_unseparated(const IntegerFrame& frame, std::span<const FrameLine> lines, std::size_t p, std::size_t q,
                      SeparationMode mode) {
    for (const FrameLine& l : lines) {
        if (separated(frame.sign(l, p), frame.sign(l, q), mode)) return false;
    }
    return true;
}

}  // namespace

const char* to_string(SeparationMode mode) {
    return mode == SeparationMode::Strict ? "strict" : "relaxed";
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
    frame_ = IntegerFrame(points_);
    const std::size_t n = points_.size();

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    auto same = [&](std::uint32_t i, std::uint32_t j) {
        return frame_.fast() ? (frame_.x128(i) == frame_.x128(j) && frame_.y128(i) == frame_.y128(j))
                             : (frame_.x(i) == frame_.x(j) && frame_.y(i) == frame_.y(j));
    };
    if (frame_.fast()) {
        std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
            if (frame_.x128(i) != frame_.x128(j)) return frame_.x128(i) < frame_.x128(j);
            return frame_.y128(i) < frame_.y128(j);
        });
    } else {
        std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
            if (frame_.x(i) != frame_.x(j)) return frame_.x(i) < frame_.x(j);
            return frame_.y(i) < frame_.y(j);
        });
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (same(order[k - 1], order[k])) {
            throw precondition_error("duplicate point " + to_string(points_[order[k]]) + " (indices " +
                                     std::to_string(std::min(order[k - 1], order[k])) + ", " +
                                     std::to_string(std::max(order[k - 1], order[k])) + ")");
        }
    }

    collinear_ = true;
    if (n > 2) {
        FrameLine first = frame_.through(0, 1);
        for (std::size_t k = 2; k < n && collinear_; ++k) collinear_ = frame_.sign(first, k) == 0;
    }

    if (n > kGeneralPositionCheckLimit) {
        general_position_ = GeneralPosition::Assumed;
    } else {
        general_position_ = has_collinear_triple(*this) ? GeneralPosition::No : GeneralPosition::Yes;
    }
}

PointSet PointSet::subset(std::span<const std::uint32_t> indices) const {
    std::vector<Point> out;
    out.reserve(indices.size());
    for (std::uint32_t i : indices) out.push_back(points_.at(i));
    return PointSet(std::move(out));
}

bool has_collinear_triple(const PointSet& points) {
    const IntegerFrame& f = points.frame();
    const std::size_t n = points.size();
    if (n < 3) return false;
    if (f.fast()) {
        std::vector<i128> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = f.x128(i);
            ys[i] = f.y128(i);
        }
        for (std::size_t i = 0; i + 2 < n; ++i)
            if (collinear_through(xs, ys, i)) return true;
        return false;
    }
    std::vector<Integer> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = f.x(i);
        ys[i] = f.y(i);
    }
    for (std::size_t i = 0; i + 2 < n; ++i)
        if (collinear_through(xs, ys, i)) return true;
    return false;
}

CandidateLines::CandidateLines(const PointSet& points) : n_(points.size()) {
    if (n_ < 2) throw precondition_error("candidate_lines needs at least 2 points");
    const IntegerFrame& f = points.frame();
    const std::size_t pairs = n_ * (n_ - 1) / 2;
    pair_line_.assign(pairs, 0);

    // Dedup into raw ids, then renumber in canonical order.
    std::vector<CanonicalLine> raw_lines;
    std::vector<FrameLine> raw_frame;
    std::vector<std::uint32_t> raw_of_pair(pairs);
    if (f.fast()) {
        std::unordered_map<LineKey, std::uint32_t, LineKeyHash> ids;
        ids.reserve(pairs);
        for (std::uint32_t i = 0; i < n_; ++i) {
            for (std::uint32_t j = i + 1; j < n_; ++j) {
                FrameLine fl = f.through(i, j);
                LineKey key = normalize(fl);
                auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(raw_frame.size()));
                if (inserted) {
                    FrameLine kept;
                    kept.a = key.a;
                    kept.b = key.b;
                    kept.c = key.c;
                    raw_frame.push_back(kept);
                    raw_lines.push_back(f.to_canonical(kept));
                }
                raw_of_pair[pair_index(n_, i, j)] = it->second;
            }
        }
    } else {
        std::unordered_map<CanonicalLine, std::uint32_t, CanonicalLineHash> ids;
        for (std::uint32_t i = 0; i < n_; ++i) {
            for (std::uint32_t j = i + 1; j < n_; ++j) {
                CanonicalLine l = line_through(points[i], points[j]);
                auto [it, inserted] = ids.try_emplace(l, static_cast<std::uint32_t>(raw_lines.size()));
                if (inserted) {
                    raw_frame.push_back(f.to_frame(l));
                    raw_lines.push_back(std::move(l));
                }
                raw_of_pair[pair_index(n_, i, j)] = it->second;
            }
        }
    }

    std::vector<std::uint32_t> order(raw_lines.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t u, std::uint32_t v) { return raw_lines[u] < raw_lines[v]; });
    std::vector<std::uint32_t> rank(order.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

    lines_.reserve(order.size());
    frame_lines_.reserve(order.size());
    for (std::uint32_t id : order) {
        lines_.push_back(std::move(raw_lines[id]));
        frame_lines_.push_back(std::move(raw_frame[id]));
    }

    std::vector<std::size_t> counts(lines_.size() + 1, 0);
    for (std::size_t p = 0; p < pairs; ++p) {
        pair_line_[p] = rank[raw_of_pair[p]];
        ++counts[pair_line_[p] + 1];
    }
    offsets_.assign(lines_.size() + 1, 0);
    for (std::size_t k = 0; k < lines_.size(); ++k) offsets_[k + 1] = offsets_[k] + counts[k + 1];
    pairs_.resize(pairs);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = i + 1; j < n_; ++j) pairs_[cursor[pair_line_[pair_index(n_, i, j)]]++] = {i, j};
}

std::uint32_t CandidateLines::line_of_pair(std::uint32_t i, std::uint32_t j) const {
    if (i == j || i >= n_ || j >= n_) throw precondition_error("line_of_pair: invalid pair");
    if (i > j) std::swap(i, j);
    return pair_line_[pair_index(n_, i, j)];
}

std::vector<std::uint32_t> CandidateLines::incident_points(std::size_t k, const PointSet& points) const {
    std::vector<std::uint32_t> out;
    for (const PairId& p : incident_pairs(k)) {
        out.push_back(p.i);
        out.push_back(p.j);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    const CanonicalLine& l = lines_[k];
    auto tau = [&](std::uint32_t i) { return Rational(l.b() * points[i].x - l.a() * points[i].y); };
    std::sort(out.begin(), out.end(), [&](std::uint32_t u, std::uint32_t v) { return tau(u) < tau(v); });
    return out;
}

bool hits(const CanonicalLine& l, const PointSet& points, PairId pair, SeparationMode mode) {
    if (pair.i >= points.size() || pair.j >= points.size() || pair.i == pair.j)
        throw precondition_error("hits: invalid pair");
    return separated(to_int(side(l, points[pair.i])), to_int(side(l, points[pair.j])), mode);
}

std::optional<PairId> find_unseparated_pair(const PointSet& points, std::span<const CanonicalLine> lines,
                                            SeparationMode mode) {
    std::vector<FrameLine> fl;
    fl.reserve(lines.size());
    for (const CanonicalLine& l : lines) fl.push_back(points.frame().to_frame(l));
    return find_unseparated_pair(points, std::span<const FrameLine>(fl), mode);
}

std::optional<PairId> find_unseparated_pair(const PointSet& points, std::span<const FrameLine> lines,
                                            SeparationMode mode) {
    const std::size_t n = points.size();
    if (n < 2) return std::nullopt;
    const IntegerFrame& f = points.frame();

    std::vector<std::uint64_t> hash(n, 0);
    std::vector<char> has_zero(n, 0);
    // Points in cache-sized blocks, all lines per block.
    constexpr std::size_t kBlock = 2048;
    std::vector<std::array<std::uint64_t, 3>> keys(lines.size());
    for (std::size_t k = 0; k < lines.size(); ++k) keys[k] = {zobrist(k, -1), zobrist(k, 0), zobrist(k, 1)};
    std::vector<std::uint32_t> block(kBlock);
    std::vector<std::int8_t> side(kBlock);
    for (std::size_t lo = 0; lo < n; lo += kBlock) {
        const std::size_t count = std::min(kBlock, n - lo);
        std::iota(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(count), static_cast<std::uint32_t>(lo));
        for (std::size_t k = 0; k < lines.size(); ++k) {
            f.signs(lines[k], block.data(), count, side.data());
            for (std::size_t i = 0; i < count; ++i) {
                hash[lo + i] ^= keys[k][side[i] + 1];
                has_zero[lo + i] |= static_cast<char>(side[i] == 0);
            }
        }
    }

    std::optional<PairId> best;
    auto offer = [&](std::size_t p, std::size_t q) {
        PairId cand{static_cast<std::uint32_t>(std::min(p, q)), static_cast<std::uint32_t>(std::max(p, q))};
        if (!best || cand < *best) best = cand;
    };

    // Points whose sign vectors contain no zero: unseparated iff equal vectors.
    const bool strict = mode == SeparationMode::Strict;
    std::vector<std::uint32_t> hashed;
    std::vector<std::uint32_t> zeros;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (strict && has_zero[i])
            zeros.push_back(i);
        else
            hashed.push_back(i);
    }
    std::sort(hashed.begin(), hashed.end(), [&](std::uint32_t u, std::uint32_t v) {
        return hash[u] != hash[v] ? hash[u] < hash[v] : u < v;
    });
    for (std::size_t lo = 0; lo < hashed.size();) {
        std::size_t hi = lo + 1;
        while (hi < hashed.size() && hash[hashed[hi]] == hash[hashed[lo]]) ++hi;
        if (hi - lo >= 2) {
            // Confirm exactly; members are in increasing index order.
            std::vector<char> matched(hi - lo, 0);
            for (std::size_t u = lo; u < hi; ++u) {
                if (matched[u - lo]) continue;
                for (std::size_t v = u + 1; v < hi; ++v) {
                    if (matched[v - lo]) continue;
                    bool equal = true;
                    for (const FrameLine& l : lines) {
                        if (f.sign(l, hashed[u]) != f.sign(l, hashed[v])) {
                            equal = false;
                            break;
                        }
                    }
                    if (equal) {
                        offer(hashed[u], hashed[v]);
                        matched[v - lo] = 1;
                    }
                }
            }
        }
        lo = hi;
    }

    for (std::uint32_t z : zeros) {
        for (std::uint32_t q = 0; q < n; ++q) {
            if (q == z) continue;
            if (best && std::min(z, q) > best->i) continue;
            if (pair_unseparated(f, lines, z, q, mode)) offer(z, q);
        }
    }
    return best;
}

std::optional<PairId> find_unseparated_pair_bruteforce(const PointSet& points,
                                                       std::span<const CanonicalLine> lines,
                                                       SeparationMode mode) {
    const std::size_t n = points.size();
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            bool sep = false;
            for (const CanonicalLine& l : lines) {
                if (separated(to_int(side(l, points[i])), to_int(side(l, points[j])), mode)) {
                    sep = true;
                    break;
                }
            }
            if (!sep) return PairId{i, j};
        }
    }
    return std::nullopt;
}

namespace {

// Points lying on l, and the point closest to l among the rest.
struct LineContact {
    std::vector<std::uint32_t> on;
    std::optional<std::uint32_t> nearest;
};

LineContact contact(const PointSet& points, const CanonicalLine& l) {
    LineContact out;
    const IntegerFrame& f = points.frame();
    const FrameLine fl = f.to_frame(l);
    if (fl.fast && f.fast()) {
        // Lattice values are D times the true ones, so they order distances the same way.
        i128 best = 0;
        for (std::uint32_t i = 0; i < points.size(); ++i) {
            i128 v = fl.a * f.x128(i) + fl.b * f.y128(i) + fl.c;
            if (v < 0) v = -v;
            if (v == 0) {
                out.on.push_back(i);
            } else if (!out.nearest || v < best) {
                best = v;
                out.nearest = i;
            }
        }
        return out;
    }
    Rational best;
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        Rational v = abs(l.evaluate(points[i]));
        if (v == 0) {
            out.on.push_back(i);
        } else if (!out.nearest || v < best) {
            best = v;
            out.nearest = i;
        }
    }
    return out;
}

}  // namespace

CanonicalLine separating_line(const PointSet& points, std::uint32_t p, std::uint32_t q) {
    CanonicalLine bis = perpendicular_bisector(points[p], points[q]);
    LineContact touch = contact(points, bis);
    if (touch.on.empty()) return bis;
    // p and q are off the bisector, so a nearest point exists.
    return shifted(bis, abs(bis.evaluate(points[*touch.nearest])) / 2);
}

std::vector<CanonicalLine> properize(std::span<const CanonicalLine> lines, const PointSet& points) {
    std::vector<CanonicalLine> out;
    out.reserve(3 * lines.size());
    for (const CanonicalLine& l : lines) {
        LineContact touch = contact(points, l);
        const auto& on = touch.on;
        if (on.size() >= 3) throw precondition_error("properize: line " + l.to_string() + " contains " +
                                                     std::to_string(on.size()) + " points");
        if (on.empty()) {
            out.push_back(l);
            continue;
        }
        Rational half = touch.nearest ? Rational(abs(l.evaluate(points[*touch.nearest])) / 2) : Rational(1);
        out.push_back(shifted(l, half));
        out.push_back(shifted(l, -half));
        if (on.size() == 2) out.push_back(separating_line(points, on[0], on[1]));
    }
    return out;
}

CanonicalLine realize_assignment(const PointSet& points, const CanonicalLine& base,
                                 std::span<const std::uint32_t> on_line, std::span<const int> signs) {
    if (on_line.size() != signs.size()) throw precondition_error("realize_assignment: size mismatch");
    std::vector<char> listed(points.size(), 0);
    for (std::uint32_t i : on_line) listed.at(i) = 1;
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        bool on = base.evaluate(points[i]) == 0;
        if (on != static_cast<bool>(listed[i]))
            throw precondition_error("realize_assignment: on-line points must be listed exactly");
    }
    if (on_line.empty()) return base;

    std::vector<std::size_t> order(on_line.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto tau = [&](const Point& p) { return Rational(base.b() * p.x - base.a() * p.y); };
    std::sort(order.begin(), order.end(),
              [&](std::size_t u, std::size_t v) { return tau(points[on_line[u]]) < tau(points[on_line[v]]); });

    std::size_t switches = 0, split = 0;
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (signs[order[k]] != signs[order[k - 1]]) {
            ++switches;
            split = k;
        }
    }
    for (int s : signs)
        if (s != 1 && s != -1) throw precondition_error("realize_assignment: signs must be +1 or -1");
    if (switches > 1) throw precondition_error("realize_assignment: sign pattern is not realizable");

    if (switches == 0) {
        // Translate towards the requested side by less than the nearest off-line value.
        std::optional<Rational> gap;
        for (std::uint32_t i = 0; i < points.size(); ++i) {
            if (listed[i]) continue;
            Rational v = abs(base.evaluate(points[i]));
            if (!gap || v < *gap) gap = v;
        }
        Rational t = gap ? Rational(*gap / 2) : Rational(1);
        return shifted(base, signs[order[0]] > 0 ? t : Rational(-t));
    }

    // Rotate about a pivot between the two groups.
    const Point& before = points[on_line[order[split - 1]]];
    const Point& after = points[on_line[order[split]]];
    Point pivot((before.x + after.x) / 2, (before.y + after.y) / 2);
    Rational tau_pivot = tau(pivot);
    std::optional<Rational> bound;
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        if (listed[i]) continue;
        Rational d = abs(tau(points[i]) - tau_pivot);
        if (d == 0) continue;
        Rational r = abs(base.evaluate(points[i])) / d;
        if (!bound || r < *bound) bound = r;
    }
    Rational eta = bound ? Rational(*bound / 2) : Rational(1);
    // Points before the pivot get sign(-eta).
    if (signs[order[0]] > 0) eta = -eta;
    Rational a = Rational(base.a()) + eta * Rational(base.b());
    Rational b = Rational(base.b()) - eta * Rational(base.a());
    Rational c = -(a * pivot.x + b * pivot.y);
    return CanonicalLine::from_rational(a, b, c);
}

}  // namespace linesep
