#include "linesep/solvers.hpp"

#include "linesep/error.hpp"

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace linesep {

namespace {

using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Hitting family: the candidate lines (relaxed) or their perturbations that
// push on-line points to chosen sides (strict).

struct Member {
    std::uint32_t line = 0;  // candidate line, or size() + extra index
    std::int16_t split = -1; // -1 raw; 0 all on-line points get `lead`; s > 0 first s get `lead`
    std::int8_t lead = 0;
};

class HittingFamily {
public:
    HittingFamily(const PointSet& points, SeparationMode mode)
        : points_(points), candidates_(points), mode_(mode) {
        build_incidence();
        const std::size_t lines = candidates_.size();
        if (mode == SeparationMode::Relaxed) {
            members_.reserve(lines);
            for (std::uint32_t k = 0; k < lines; ++k) members_.push_back({k, -1, 0});
            if (points.collinear()) add_collinear_extras();
        } else {
            members_.reserve(4 * lines);
            line_begin_.reserve(lines + 1);
            for (std::uint32_t k = 0; k < lines; ++k) {
                line_begin_.push_back(static_cast<std::uint32_t>(members_.size()));
                auto inc = incident(k);
                members_.push_back({k, 0, 1});
                members_.push_back({k, 0, -1});
                for (std::size_t s = 1; s < inc.size(); ++s) {
                    members_.push_back({k, static_cast<std::int16_t>(s), 1});
                    members_.push_back({k, static_cast<std::int16_t>(s), -1});
                }
            }
            line_begin_.push_back(static_cast<std::uint32_t>(members_.size()));
        }
    }

    std::size_t size() const { return members_.size(); }
    // Members built on candidate line k: [line_begin(k), line_begin(k + 1)).
    std::size_t line_begin(std::uint32_t k) const {
        return mode_ == SeparationMode::Relaxed ? k : line_begin_[k];
    }
    const Member& member(std::size_t m) const { return members_[m]; }
    const PointSet& points() const { return points_; }
    const CandidateLines& candidates() const { return candidates_; }

    const FrameLine& frame_line(std::uint32_t line) const {
        return line < candidates_.size() ? candidates_.frame_line(line)
                                         : extra_frame_[line - candidates_.size()];
    }

    int sign(std::size_t m, std::size_t i) const {
        const Member& mb = members_[m];
        int s = points_.frame().sign(frame_line(mb.line), i);
        if (s != 0 || mb.split < 0) return s;
        if (mb.split == 0) return mb.lead;
        auto inc = incident(mb.line);
        std::size_t pos = static_cast<std::size_t>(std::find(inc.begin(), inc.end(), i) - inc.begin());
        return pos < static_cast<std::size_t>(mb.split) ? mb.lead : -mb.lead;
    }

    // Signs of member m at pts[0..count).
    void signs(std::size_t m, const std::uint32_t* pts, std::size_t count, std::int8_t* out) const {
        const Member& mb = members_[m];
        const FrameLine& l = frame_line(mb.line);
        const IntegerFrame& f = points_.frame();
        f.signs(l, pts, count, out);
        if (mb.split < 0) return;
        auto inc = incident(mb.line);
        for (std::size_t k = 0; k < count; ++k) {
            if (out[k] != 0) continue;
            if (mb.split == 0) {
                out[k] = mb.lead;
                continue;
            }
            auto pos = static_cast<std::size_t>(std::find(inc.begin(), inc.end(), pts[k]) - inc.begin());
            out[k] = static_cast<std::int8_t>(pos < static_cast<std::size_t>(mb.split) ? mb.lead : -mb.lead);
        }
    }

    CanonicalLine realize(std::size_t m) const {
        const Member& mb = members_[m];
        if (mb.line >= candidates_.size()) return extra_lines_[mb.line - candidates_.size()];
        const CanonicalLine& base = candidates_.line(mb.line);
        if (mb.split < 0) return base;
        auto inc = incident(mb.line);
        std::vector<int> signs(inc.size());
        for (std::size_t p = 0; p < inc.size(); ++p)
            signs[p] = (mb.split == 0 || p < static_cast<std::size_t>(mb.split)) ? mb.lead : -mb.lead;
        return realize_assignment(points_, base, inc, signs);
    }

    std::span<const std::uint32_t> incident(std::uint32_t line) const {
        if (line >= candidates_.size()) return {};
        return {inc_points_.data() + inc_offsets_[line], inc_points_.data() + inc_offsets_[line + 1]};
    }

private:
    void build_incidence() {
        const IntegerFrame& f = points_.frame();
        const std::size_t lines = candidates_.size();
        inc_offsets_.assign(lines + 1, 0);
        inc_points_.reserve(2 * lines);
        for (std::uint32_t k = 0; k < lines; ++k) {
            auto pairs = candidates_.incident_pairs(k);
            if (pairs.size() == 1 && f.fast() && candidates_.frame_line(k).fast) {
                // a * dX - b * dY stays below 2^127 for 62-bit lattice coordinates.
                const FrameLine& l = candidates_.frame_line(k);
                std::uint32_t i = pairs[0].i, j = pairs[0].j;
                i128 t = l.b * (f.x128(i) - f.x128(j)) - l.a * (f.y128(i) - f.y128(j));
                if (t > 0) std::swap(i, j);
                inc_points_.push_back(i);
                inc_points_.push_back(j);
            } else {
                for (std::uint32_t p : candidates_.incident_points(k, points_)) inc_points_.push_back(p);
            }
            inc_offsets_[k + 1] = inc_points_.size();
        }
    }

    void add_collinear_extras() {
        // Every candidate misses every pair here; bisectors of neighbours along the line fill in.
        auto order = candidates_.incident_points(0, points_);
        for (std::size_t p = 1; p < order.size(); ++p) {
            CanonicalLine l = perpendicular_bisector(points_[order[p - 1]], points_[order[p]]);
            extra_frame_.push_back(points_.frame().to_frame(l));
            extra_lines_.push_back(std::move(l));
            members_.push_back({static_cast<std::uint32_t>(candidates_.size() + p - 1), -1, 0});
        }
    }

    const PointSet& points_;
    CandidateLines candidates_;
    SeparationMode mode_;
    std::vector<Member> members_;
    std::vector<std::uint32_t> line_begin_;
    std::vector<std::size_t> inc_offsets_;
    std::vector<std::uint32_t> inc_points_;
    std::vector<CanonicalLine> extra_lines_;
    std::vector<FrameLine> extra_frame_;
};

// ---------------------------------------------------------------------------
// Partition of the points into groups not yet separated from each other. In
// both families "unseparated" is an equivalence: equal sign vectors.

class PointClasses {
public:
    // Unresolved points are kept grouped by class: order_[starts_[c], starts_[c + 1]).
    explicit PointClasses(std::size_t n) {
        if (n < 2) return;
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0u);
        starts_ = {0, static_cast<std::uint32_t>(n)};
    }

    bool done() const { return order_.empty(); }

    std::uint64_t gain(const HittingFamily& family, std::size_t m) {
        buffer_.resize(order_.size());
        family.signs(m, order_.data(), order_.size(), buffer_.data());
        std::uint64_t total = 0;
        for (std::size_t c = 0; c + 1 < starts_.size(); ++c) {
            std::uint64_t plus = 0, zero = 0;
            for (std::uint32_t k = starts_[c]; k < starts_[c + 1]; ++k) {
                plus += buffer_[k] > 0;
                zero += buffer_[k] == 0;
            }
            const std::uint64_t sz = starts_[c + 1] - starts_[c], minus = sz - plus - zero;
            total += pairs(sz) - pairs(plus) - pairs(zero) - pairs(minus);
        }
        return total;
    }

    void apply(const HittingFamily& family, std::size_t m) {
        buffer_.resize(order_.size());
        family.signs(m, order_.data(), order_.size(), buffer_.data());
        std::vector<std::uint32_t> next, next_starts{0};
        std::array<std::vector<std::uint32_t>, 3> parts;
        for (std::size_t c = 0; c + 1 < starts_.size(); ++c) {
            for (auto& p : parts) p.clear();
            for (std::uint32_t k = starts_[c]; k < starts_[c + 1]; ++k) parts[buffer_[k] + 1].push_back(order_[k]);
            for (const auto& p : parts) {
                if (p.size() < 2) continue;
                next.insert(next.end(), p.begin(), p.end());
                next_starts.push_back(static_cast<std::uint32_t>(next.size()));
            }
        }
        order_ = std::move(next);
        starts_ = next_starts.size() > 1 ? std::move(next_starts) : std::vector<std::uint32_t>{};
    }

    // Class of every point (kNone once a point is separated from all others) and class sizes.
    static constexpr std::uint32_t kNone = 0xffffffffu;
    void labels(std::size_t n, std::vector<std::uint32_t>& cls, std::vector<std::uint32_t>& sizes) const {
        cls.assign(n, kNone);
        sizes.clear();
        for (std::size_t c = 0; c + 1 < starts_.size(); ++c) {
            for (std::uint32_t k = starts_[c]; k < starts_[c + 1]; ++k) cls[order_[k]] = static_cast<std::uint32_t>(c);
            sizes.push_back(starts_[c + 1] - starts_[c]);
        }
    }

    static std::uint64_t pairs(std::uint64_t k) { return k * (k - (k > 0)) / 2; }

private:

    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> starts_;
    std::vector<std::int8_t> buffer_;
};

// Gains of all members at once. A line rotates half a turn around each point;
// every other point flips side exactly when the line passes through it, so
// the per-class side counts are updated in O(1) per point.
class SweepGains {
public:
    static constexpr std::size_t kMaxPoints = 4096;

    static bool applicable(const HittingFamily& family) {
        const PointSet& P = family.points();
        return P.size() <= kMaxPoints && !P.collinear() && P.frame().fast() && P.frame().coord_bits() <= 60;
    }

    explicit SweepGains(const HittingFamily& family)
        : family_(family), n_(family.points().size()), strict_(family.size() != family.candidates().size()) {
        const IntegerFrame& f = family.points().frame();
        order_.resize(n_ * (n_ - 1));
        std::vector<std::pair<i128, i128>> dir(n_);
        for (std::size_t p = 0; p < n_; ++p) {
            std::uint32_t* row = order_.data() + p * (n_ - 1);
            std::size_t w = 0;
            for (std::size_t q = 0; q < n_; ++q) {
                if (q == p) continue;
                i128 dx = f.x128(q) - f.x128(p), dy = f.y128(q) - f.y128(p);
                bool upper = dy > 0 || (dy == 0 && dx > 0);
                dir[q] = upper ? std::pair{dx, dy} : std::pair{-dx, -dy};
                row[w++] = static_cast<std::uint32_t>(q) | (upper ? kUpper : 0);
            }
            auto cross = [&](std::uint32_t u, std::uint32_t v) {
                const auto& [ux, uy] = dir[u & kIndex];
                const auto& [vx, vy] = dir[v & kIndex];
                return ux * vy - uy * vx;
            };
            std::sort(row, row + (n_ - 1), [&](std::uint32_t u, std::uint32_t v) {
                i128 c = cross(u, v);
                return c != 0 ? c > 0 : (u & kIndex) < (v & kIndex);
            });
            row[0] |= kGroupStart;
            for (std::size_t k = 1; k + 1 < n_; ++k)
                if (cross(row[k - 1], row[k]) != 0) row[k] |= kGroupStart;

            // Each line is scored once, from its lowest-index point.
            for (std::size_t begin = 0; begin + 1 < n_;) {
                std::size_t end = begin + 1;
                while (end + 1 < n_ && !(row[end] & kGroupStart)) ++end;
                bool first = true;
                for (std::size_t k = begin; k < end; ++k) first = first && (row[k] & kIndex) > p;
                if (first) {
                    std::uint32_t q = row[begin] & kIndex;
                    std::uint32_t line = family.candidates().line_of_pair(static_cast<std::uint32_t>(p), q);
                    const FrameLine& l = family.candidates().frame_line(line);
                    const auto& [ux, uy] = dir[q];
                    auto inc = family.incident(line);
                    Visit v;
                    v.line = line;
                    v.member = static_cast<std::uint32_t>(family.line_begin(line));
                    v.aligned = l.b * ux - l.a * uy > 0;
                    v.pivot_leads = inc.size() == 2 && inc[0] == p;
                    v.wide = inc.size() > 2;
                    visits_.push_back(v);
                }
                begin = end;
            }
        }
    }

    void compute(const std::vector<std::uint32_t>& cls, const std::vector<std::uint32_t>& sizes,
                 std::vector<std::uint64_t>& gains) {
        gains.assign(family_.size(), 0);
        std::uint64_t total = 0;
        for (std::uint32_t sz : sizes) total += PointClasses::pairs(sz);
        count_.assign(2 * sizes.size(), 0);
        delta_plus_.assign(sizes.size(), 0);
        delta_minus_.assign(sizes.size(), 0);
        zero_.assign(sizes.size(), 0);
        side_.assign(n_, 0);
        const Visit* visit = visits_.data();

        for (std::size_t p = 0; p < n_; ++p) {
            const std::uint32_t* row = order_.data() + p * (n_ - 1);
            const std::uint32_t cp = cls[p];
            // Direction just below angle 0: the upper half-plane is on the positive side.
            std::fill(count_.begin(), count_.end(), 0u);
            for (std::size_t k = 0; k + 1 < n_; ++k) {
                std::uint32_t q = row[k] & kIndex;
                side_[q] = (row[k] & kUpper) ? 1 : 0;
                if (cls[q] != PointClasses::kNone) ++count_[2 * cls[q] + side_[q]];
            }
            std::uint64_t same = 0;
            for (std::uint32_t c : count_) same += PointClasses::pairs(c);

            for (std::size_t begin = 0; begin + 1 < n_;) {
                std::size_t end = begin + 1;
                while (end + 1 < n_ && !(row[end] & kGroupStart)) ++end;
                bool first = true;
                for (std::size_t k = begin; k < end; ++k) {
                    std::uint32_t q = row[k] & kIndex;
                    first = first && q > p;
                    if (cls[q] != PointClasses::kNone) same -= --count_[2 * cls[q] + side_[q]];
                }
                if (first) {
                    const Visit& v = *visit++;
                    if (v.wide)
                        score_wide(v, cls, total - same, gains);
                    else
                        score_pair(v, cp, cls[row[begin] & kIndex], total - same, gains);
                }
                for (std::size_t k = begin; k < end; ++k) {
                    std::uint32_t q = row[k] & kIndex;
                    side_[q] ^= 1;
                    if (cls[q] != PointClasses::kNone) same += count_[2 * cls[q] + side_[q]]++;
                }
                begin = end;
            }
        }
    }

private:
    static constexpr std::uint32_t kUpper = 1u << 31, kGroupStart = 1u << 30, kIndex = kGroupStart - 1;

    struct Visit {
        std::uint32_t line = 0;
        std::uint32_t member = 0;
        bool aligned = false;      // sweep's positive side is the line's positive side
        bool pivot_leads = false;  // the pivot comes first along the line
        bool wide = false;         // three or more points on the line
    };

    // Same-side pairs gained by putting a point of class c on side s.
    std::uint64_t placed(std::uint32_t c, int s) const {
        return c == PointClasses::kNone ? 0 : count_[2 * c + (s > 0)];
    }

    void score_pair(const Visit& v, std::uint32_t cp, std::uint32_t cq, std::uint64_t base, std::vector<std::uint64_t>& gains) const {
        const bool together = cp == cq && cp != PointClasses::kNone;
        if (!strict_) {
            gains[v.member] = base - (together ? 1 : 0);
            return;
        }
        // Sides in sweep orientation; c1 is first along the line.
        const std::uint32_t c1 = v.pivot_leads ? cp : cq, c2 = v.pivot_leads ? cq : cp;
        const int o = v.aligned ? 1 : -1;
        const int s1[4] = {o, -o, o, -o}, s2[4] = {o, -o, -o, o};
        for (int k = 0; k < 4; ++k) {
            std::uint64_t extra = placed(c1, s1[k]) + placed(c2, s2[k]) + (together && s1[k] == s2[k] ? 1 : 0);
            gains[v.member + k] = base - extra;
        }
    }

    void score_wide(const Visit& v, const std::vector<std::uint32_t>& cls, std::uint64_t base,
                    std::vector<std::uint64_t>& gains) {
        auto inc = family_.incident(v.line);
        for (std::size_t m = v.member; m < family_.line_begin(v.line + 1); ++m) {
            const Member& mb = family_.member(m);
            std::uint64_t extra = 0;
            touched_.clear();
            for (std::size_t pos = 0; pos < inc.size(); ++pos) {
                std::uint32_t c = cls[inc[pos]];
                if (c == PointClasses::kNone) continue;
                int s = mb.split < 0 ? 0 : (mb.split == 0 || pos < static_cast<std::size_t>(mb.split)) ? mb.lead : -mb.lead;
                if (!v.aligned) s = -s;
                if (delta_plus_[c] == 0 && delta_minus_[c] == 0 && zero_[c] == 0) touched_.push_back(c);
                if (s > 0) {
                    extra += count_[2 * c + 1] + delta_plus_[c]++;
                } else if (s < 0) {
                    extra += count_[2 * c] + delta_minus_[c]++;
                } else {
                    extra += zero_[c]++;
                }
            }
            for (std::uint32_t c : touched_) delta_plus_[c] = delta_minus_[c] = zero_[c] = 0;
            gains[m] = base - extra;
        }
    }

    const HittingFamily& family_;
    std::size_t n_;
    bool strict_;
    std::vector<std::uint32_t> order_;
    std::vector<Visit> visits_;
    std::vector<std::uint32_t> count_;  // per class: [2c] negative side, [2c + 1] positive side
    std::vector<std::uint32_t> delta_plus_, delta_minus_, zero_, touched_;
    std::vector<std::uint8_t> side_;
};

std::vector<CanonicalLine> checked(const PointSet& points, std::vector<CanonicalLine> lines, SeparationMode mode,
                                   const char* who) {
    if (!verify(points, lines, mode))
        throw verification_error(std::string(who) + ": output does not separate the input (" + to_string(mode) + ")");
    return lines;
}

// ---------------------------------------------------------------------------
// Exact search

struct ExactSearch {
    std::size_t n = 0;
    std::size_t pair_count = 0;
    std::vector<u128> masks;            // pairs separated by each kept member
    std::vector<std::uint32_t> origin;  // family index of each kept member
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_points;
    SeparationMode mode = SeparationMode::Strict;
    std::uint64_t nodes = 0;
    std::vector<std::uint32_t> chosen;

    using Forbidden = std::bitset<1024>;

    // Sizes of the groups of points joined by uncovered pairs.
    void class_sizes(u128 uncovered, std::vector<std::uint32_t>& sizes) const {
        std::vector<std::uint32_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0u);
        auto find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t p = 0; p < pair_count; ++p) {
            if (!((uncovered >> p) & 1)) continue;
            std::uint32_t a = find(pair_points[p].first), b = find(pair_points[p].second);
            if (a != b) parent[a] = b;
        }
        sizes.assign(n, 0);
        for (std::uint32_t i = 0; i < n; ++i) ++sizes[find(i)];
    }

    bool feasible_bound(u128 uncovered, int depth_left) const {
        std::vector<std::uint32_t> sizes;
        class_sizes(uncovered, sizes);
        std::uint32_t largest = 0, classes = 0;
        for (std::uint32_t s : sizes) {
            if (s == 0) continue;
            ++classes;
            largest = std::max(largest, s);
        }
        // Each line splits a group into at most 2 (strict) or 3 (relaxed) parts.
        const std::uint64_t base = mode == SeparationMode::Strict ? 2 : 3;
        std::uint64_t reach = 1;
        for (int r = 0; r < depth_left && reach < largest; ++r) reach *= base;
        if (reach < largest) return false;
        if (mode == SeparationMode::Strict) {
            // The j-th line of an arrangement crosses at most j faces.
            std::uint64_t t = chosen.size();
            std::uint64_t extra = 0;
            for (int r = 1; r <= depth_left; ++r) extra += t + static_cast<std::uint64_t>(r);
            if (classes + extra < n) return false;
        }
        return true;
    }

    bool dfs(u128 uncovered, int depth_left, Forbidden forbidden) {
        ++nodes;
        if (uncovered == 0) return true;
        if (depth_left == 0) return false;
        if (!feasible_bound(uncovered, depth_left)) return false;

        // Fail-first: the uncovered pair with the fewest available members.
        std::vector<std::uint32_t> cover(pair_count, 0);
        for (std::size_t m = 0; m < masks.size(); ++m) {
            if (forbidden[m]) continue;
            u128 c = masks[m] & uncovered;
            while (c != 0) {
                int bit = c_tz(c);
                ++cover[bit];
                c &= c - 1;
            }
        }
        std::size_t pick = pair_count;
        for (std::size_t p = 0; p < pair_count; ++p) {
            if (!((uncovered >> p) & 1)) continue;
            if (pick == pair_count || cover[p] < cover[pick]) pick = p;
        }
        if (cover[pick] == 0) return false;

        std::vector<std::pair<int, std::uint32_t>> options;
        for (std::uint32_t m = 0; m < masks.size(); ++m) {
            if (forbidden[m] || !((masks[m] >> pick) & 1)) continue;
            options.emplace_back(-popcount(masks[m] & uncovered), m);
        }
        std::sort(options.begin(), options.end());
        for (auto [neg, m] : options) {
            chosen.push_back(m);
            if (dfs(uncovered & ~masks[m], depth_left - 1, forbidden)) return true;
            chosen.pop_back();
            forbidden.set(m);
        }
        return false;
    }

    static int c_tz(u128 v) {
        auto lo = static_cast<std::uint64_t>(v);
        if (lo != 0) return __builtin_ctzll(lo);
        return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
    }
    static int popcount(u128 v) {
        return __builtin_popcountll(static_cast<std::uint64_t>(v)) +
               __builtin_popcountll(static_cast<std::uint64_t>(v >> 64));
    }
};

// ---------------------------------------------------------------------------
// Pruning a separating sample down to an inclusion-minimal subset (relaxed).

std::uint64_t prune_key(std::size_t line, int s) {
    return splitmix64(static_cast<std::uint64_t>(line) * 3 + static_cast<std::uint64_t>(s + 1) + 0xa11ceULL);
}

std::vector<std::uint32_t> prune_redundant(const HittingFamily& family, std::vector<std::uint32_t> sample,
                                           const WeightState& weights) {
    const std::size_t n = family.points().size();
    const std::size_t m = sample.size();
    std::vector<std::int8_t> signs(m * n);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i) signs[k * n + i] = static_cast<std::int8_t>(family.sign(sample[k], i));

    std::vector<std::uint64_t> hash(n, 0);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i) hash[i] ^= prune_key(k, signs[k * n + i]);

    // Try the lightest lines first; heavy lines carry the hard pairs.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
        return weights.hit_count(sample[u]) < weights.hit_count(sample[v]);
    });

    std::vector<char> kept(m, 1);
    std::vector<std::uint64_t> trial(n);
    std::vector<std::uint32_t> idx(n);
    for (std::size_t k : order) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = hash[i] ^ prune_key(k, signs[k * n + i]);
        std::iota(idx.begin(), idx.end(), 0u);
        std::sort(idx.begin(), idx.end(), [&](std::uint32_t u, std::uint32_t v) { return trial[u] < trial[v]; });
        bool removable = true;
        for (std::size_t t = 1; t < n && removable; ++t) {
            if (trial[idx[t]] != trial[idx[t - 1]]) continue;
            // Hash match: compare the remaining sign vectors exactly.
            bool equal = true;
            for (std::size_t q = 0; q < m && equal; ++q) {
                if (q == k || !kept[q]) continue;
                equal = signs[q * n + idx[t]] == signs[q * n + idx[t - 1]];
            }
            if (equal) removable = false;
        }
        if (removable) {
            kept[k] = 0;
            hash.swap(trial);
        }
    }
    std::vector<std::uint32_t> out;
    for (std::size_t k = 0; k < m; ++k)
        if (kept[k]) out.push_back(sample[k]);
    return out;
}

// ---------------------------------------------------------------------------
// Halving construction helpers

// Line realizing sides `want` (+1 / -1) for the points in `group`; all other
// points keep whatever side the base line gives them.
CanonicalLine realize_variant(const PointSet& points, std::uint32_t u, std::uint32_t v, int su, int sv) {
    CanonicalLine base = line_through(points[u], points[v]);
    std::vector<std::uint32_t> on{u, v};
    std::vector<int> signs{su, sv};
    return realize_assignment(points, base, on, signs);
}

// Same line with (a, b) flipped to the canonical sign, so sides match line_through.
FrameLine canonically_oriented(FrameLine l) {
    bool flip = false;
    if (l.fast) {
        flip = l.a < 0 || (l.a == 0 && l.b < 0);
        if (flip) {
            l.a = -l.a;
            l.b = -l.b;
            l.c = -l.c;
        }
    } else {
        const auto& w = *l.wide;
        flip = w[0] < 0 || (w[0] == 0 && w[1] < 0);
        if (flip) l.wide = std::make_shared<const std::array<Integer, 3>>(std::array<Integer, 3>{-w[0], -w[1], -w[2]});
    }
    return l;
}

struct SplitChoice {
    std::uint32_t u = 0, v = 0;
    int su = 0, sv = 0;
};

// First line through two points of `a` or `b` (perturbed off them) that cuts
// exactly `cut_a` points of `a` to one side, and `cut_b` of `b` when cut_b > 0.
std::optional<SplitChoice> find_split(const PointSet& points, std::span<const std::uint32_t> a,
                                      std::span<const std::uint32_t> b, std::size_t cut_a, std::size_t cut_b) {
    const IntegerFrame& f = points.frame();
    std::vector<std::uint32_t> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<char> in_a(points.size(), 0);
    for (std::uint32_t i : a) in_a[i] = 1;

    auto cut_ok = [](std::size_t plus, std::size_t total, std::size_t want) {
        return plus == want || total - plus == want;
    };
    for (std::size_t x = 0; x < all.size(); ++x) {
        for (std::size_t y = x + 1; y < all.size(); ++y) {
            std::uint32_t u = all[x], v = all[y];
            FrameLine l = canonically_oriented(f.through(u, v));
            std::size_t plus_a = 0, plus_b = 0;
            for (std::uint32_t w : all) {
                if (w == u || w == v) continue;
                if (f.sign(l, w) > 0) ++(in_a[w] ? plus_a : plus_b);
            }
            for (int su : {1, -1}) {
                for (int sv : {1, -1}) {
                    std::size_t pa = plus_a, pb = plus_b;
                    if (su > 0) ++(in_a[u] ? pa : pb);
                    if (sv > 0) ++(in_a[v] ? pa : pb);
                    if (!cut_ok(pa, a.size(), cut_a)) continue;
                    if (cut_b > 0 && !cut_ok(pb, b.size(), cut_b)) continue;
                    return SplitChoice{u, v, su, sv};
                }
            }
        }
    }
    return std::nullopt;
}

// Points of `group` on the side of `line` holding exactly `count` of them.
std::vector<std::uint32_t> cut_side(const PointSet& points, const CanonicalLine& line,
                                    std::span<const std::uint32_t> group, std::size_t count) {
    std::vector<std::uint32_t> plus, minus;
    for (std::uint32_t i : group) (side(line, points[i]) == Sign::Positive ? plus : minus).push_back(i);
    return plus.size() == count ? plus : minus;
}

// One line strictly separating p1 from p2 and q1 from q2.
CanonicalLine split_two_pairs(const PointSet& points, std::uint32_t p1, std::uint32_t p2, std::uint32_t q1,
                              std::uint32_t q2) {
    auto splits = [&](const CanonicalLine& l) {
        return to_int(side(l, points[p1])) * to_int(side(l, points[p2])) == -1 &&
               to_int(side(l, points[q1])) * to_int(side(l, points[q2])) == -1;
    };
    Point mp((points[p1].x + points[p2].x) / 2, (points[p1].y + points[p2].y) / 2);
    Point mq((points[q1].x + points[q2].x) / 2, (points[q1].y + points[q2].y) / 2);
    if (mp != mq) {
        CanonicalLine l = line_through(mp, mq);
        if (splits(l)) return l;
    }
    std::vector<std::uint32_t> a{p1, p2}, b{q1, q2};
    auto choice = find_split(points, a, b, 1, 1);
    if (!choice) throw verification_error("halving_separator: no line splits both pairs");
    return realize_variant(points, choice->u, choice->v, choice->su, choice->sv);
}

// Line putting the lexicographically first `count` points (by x, then y) on one side.
CanonicalLine lexicographic_split(const PointSet& points, std::span<const std::uint32_t> sorted, std::size_t count) {
    const Point& last = points[sorted[count - 1]];
    const Point& next = points[sorted[count]];
    if (last.x != next.x) return CanonicalLine::vertical((last.x + next.x) / 2);
    CanonicalLine base = CanonicalLine::vertical(last.x);
    std::vector<std::uint32_t> on{sorted[count - 1], sorted[count]};
    std::vector<int> signs{-1, 1};
    return realize_assignment(points, base, on, signs);
}

std::uint64_t choose2(std::uint64_t k) { return k * (k - (k > 0 ? 1 : 0)) / 2; }

}  // namespace

// ---------------------------------------------------------------------------

bool verify(const PointSet& points, std::span<const CanonicalLine> lines, SeparationMode mode) {
    return !find_unseparated_pair(points, lines, mode).has_value();
}

int cell_count_lower_bound(std::size_t n, SeparationMode mode) {
    if (n <= 1) return 0;
    for (std::uint64_t k = 1;; ++k) {
        std::uint64_t cells = mode == SeparationMode::Strict ? 1 + k * (k + 1) / 2 : 1 + 2 * k * k;
        if (cells >= n) return static_cast<int>(k);
    }
}

ExactResult exact_separability(const PointSet& points, SeparationMode mode) {
    const std::size_t n = points.size();
    if (n < 2) throw precondition_error("exact_separability needs at least 2 points");
    if (n > kExactMaxPoints)
        throw precondition_error("exact_separability is capped at " + std::to_string(kExactMaxPoints) +
                                 " points (got " + std::to_string(n) + ")");

    HittingFamily family(points, mode);
    ExactSearch search;
    search.n = n;
    search.mode = mode;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) search.pair_points.emplace_back(i, j);
    search.pair_count = search.pair_points.size();

    // Masks, deduplicated, then drop members strictly dominated by another.
    std::vector<std::pair<u128, std::uint32_t>> raw;
    for (std::uint32_t m = 0; m < family.size(); ++m) {
        std::vector<int> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = family.sign(m, i);
        u128 mask = 0;
        for (std::size_t p = 0; p < search.pair_count; ++p) {
            auto [i, j] = search.pair_points[p];
            if (separated(s[i], s[j], mode)) mask |= u128{1} << p;
        }
        if (mask != 0) raw.emplace_back(mask, m);
    }
    std::vector<std::pair<u128, std::uint32_t>> unique;
    {
        std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> seen;
        for (auto& [mask, m] : raw) {
            auto key = std::make_pair(static_cast<std::uint64_t>(mask >> 64), static_cast<std::uint64_t>(mask));
            if (seen.emplace(key, m).second) unique.emplace_back(mask, m);
        }
    }
    for (std::size_t a = 0; a < unique.size(); ++a) {
        bool dominated = false;
        for (std::size_t b = 0; b < unique.size() && !dominated; ++b) {
            if (a == b) continue;
            dominated = (unique[a].first & ~unique[b].first) == 0 && unique[a].first != unique[b].first;
        }
        if (!dominated) {
            search.masks.push_back(unique[a].first);
            search.origin.push_back(unique[a].second);
        }
    }
    if (search.masks.size() > ExactSearch::Forbidden().size())
        throw precondition_error("exact_separability: candidate family too large");

    const u128 all = search.pair_count == 128 ? ~u128{0} : ((u128{1} << search.pair_count) - 1);
    ExactResult result;
    for (int k = std::max(1, cell_count_lower_bound(n, mode));; ++k) {
        search.chosen.clear();
        if (search.dfs(all, k, {})) {
            result.sigma = k;
            for (std::uint32_t m : search.chosen) result.witness.push_back(family.realize(search.origin[m]));
            break;
        }
        if (k > static_cast<int>(n)) throw verification_error("exact_separability: search exhausted");
    }
    result.nodes = search.nodes;
    result.witness = checked(points, std::move(result.witness), mode, "exact_separability");
    return result;
}

std::vector<CanonicalLine> greedy_hitting_set(const PointSet& points, SeparationMode mode) {
    const std::size_t n = points.size();
    if (n < 2) throw precondition_error("greedy_hitting_set needs at least 2 points");
    HittingFamily family(points, mode);
    PointClasses classes(n);

    std::vector<std::uint32_t> chosen;
    if (SweepGains::applicable(family)) {
        SweepGains sweep(family);
        std::vector<std::uint32_t> cls, sizes;
        std::vector<std::uint64_t> gains;
        while (!classes.done()) {
            classes.labels(n, cls, sizes);
            sweep.compute(cls, sizes, gains);
            auto best = std::max_element(gains.begin(), gains.end());  // first maximum: lowest member index
            if (*best == 0) throw verification_error("greedy_hitting_set: candidates exhausted");
            auto m = static_cast<std::uint32_t>(best - gains.begin());
            classes.apply(family, m);
            chosen.push_back(m);
        }
    } else {
        struct Entry {
            std::uint64_t gain;
            std::uint32_t member;
            std::uint32_t stamp;
        };
        auto worse = [](const Entry& x, const Entry& y) {
            if (x.gain != y.gain) return x.gain < y.gain;
            return x.member > y.member;
        };
        std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
        for (std::uint32_t m = 0; m < family.size(); ++m) {
            std::uint64_t g = classes.gain(family, m);
            if (g > 0) heap.push({g, m, 0});
        }

        std::uint32_t iteration = 0;
        while (!classes.done()) {
            if (heap.empty()) throw verification_error("greedy_hitting_set: candidates exhausted");
            Entry top = heap.top();
            heap.pop();
            if (top.stamp != iteration) {
                // Gains only shrink, so a stale entry is an upper bound.
                std::uint64_t g = classes.gain(family, top.member);
                if (g > 0) heap.push({g, top.member, iteration});
                continue;
            }
            classes.apply(family, top.member);
            chosen.push_back(top.member);
            ++iteration;
        }
    }
    std::vector<CanonicalLine> lines;
    lines.reserve(chosen.size());
    for (std::uint32_t m : chosen) lines.push_back(family.realize(m));
    return checked(points, std::move(lines), mode, "greedy_hitting_set");
}

// ---------------------------------------------------------------------------

WeightState::WeightState(std::size_t count) : hit_count_(count, 0) { reset(); }

void WeightState::reset() {
    std::fill(hit_count_.begin(), hit_count_.end(), 0u);
    rescale_exponent_ = 0;
    doublings_ = 0;
    total_ = static_cast<double>(hit_count_.size());
    prefix_.assign(hit_count_.size(), 0.0);
    dirty_from_ = 0;
}

double WeightState::weight(std::size_t k) const {
    return std::ldexp(1.0, static_cast<int>(hit_count_[k]) - rescale_exponent_);
}

void WeightState::double_weights(std::span<const std::uint32_t> lines) {
    for (std::uint32_t k : lines) {
        total_ += weight(k);
        ++hit_count_[k];
        dirty_from_ = std::min<std::size_t>(dirty_from_, k);
    }
    ++doublings_;
    if (total_ > std::ldexp(1.0, kRescaleThresholdExponent)) {
        rescale_exponent_ += kRescaleThresholdExponent;
        resum();
        dirty_from_ = 0;
    } else if (doublings_ % kResumPeriod == 0) {
        resum();
    }
}

double WeightState::resum() {
    double exact = 0.0;
    for (std::size_t k = 0; k < hit_count_.size(); ++k) exact += weight(k);
    double drift = exact == 0.0 ? 0.0 : std::abs(total_ - exact) / exact;
    total_ = exact;
    return drift;
}

void WeightState::rebuild_prefix() {
    double acc = dirty_from_ == 0 ? 0.0 : prefix_[dirty_from_ - 1];
    for (std::size_t k = dirty_from_; k < hit_count_.size(); ++k) {
        acc += weight(k);
        prefix_[k] = acc;
    }
    dirty_from_ = hit_count_.size();
}

std::size_t WeightState::sample(Rng& rng) {
    if (hit_count_.empty()) throw precondition_error("WeightState::sample on an empty state");
    if (dirty_from_ < hit_count_.size()) rebuild_prefix();
    double target = uniform01(rng) * prefix_.back();
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), target);
    if (it == prefix_.end()) --it;
    return static_cast<std::size_t>(it - prefix_.begin());
}

SolveResult reweight_approx(const PointSet& points, const SolverConfig& config) {
    const std::size_t n = points.size();
    if (n < 2) throw precondition_error("reweight_approx needs at least 2 points");
    if (!(config.epsilon_constant > 0) || !(config.max_rounds_constant > 0) ||
        (config.initial_guess && *config.initial_guess <= 0))
        throw precondition_error("reweight_approx: configuration constants must be positive");

    HittingFamily family(points, SeparationMode::Relaxed);
    const IntegerFrame& f = points.frame();
    WeightState weights(family.size());
    Rng rng(config.rng_seed);

    SolveResult result;
    result.mode = SeparationMode::Relaxed;
    int k = config.initial_guess ? *config.initial_guess
                                 : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    std::vector<std::uint32_t> success;
    std::vector<std::uint32_t> hitting;
    std::vector<FrameLine> sample_lines;

    while (success.empty()) {
        if (k > static_cast<int>(n)) break;
        weights.reset();
        const double eps = 1.0 / (4.0 * k);
        const auto sample_size =
            static_cast<std::size_t>(std::ceil(config.epsilon_constant * (1.0 / eps) * std::log(1.0 / eps + 2.0)));
        const int max_rounds =
            static_cast<int>(std::ceil(config.max_rounds_constant * k * std::log(static_cast<double>(n) + 2.0)));
        GuessRecord record{k, 0, false};
        for (int round = 0; round < max_rounds; ++round) {
            ++record.rounds;
            ++result.rounds_used;
            std::vector<std::uint32_t> sample;
            sample.reserve(sample_size);
            for (std::size_t s = 0; s < sample_size; ++s) sample.push_back(static_cast<std::uint32_t>(weights.sample(rng)));
            std::sort(sample.begin(), sample.end());
            sample.erase(std::unique(sample.begin(), sample.end()), sample.end());

            sample_lines.clear();
            for (std::uint32_t m : sample) sample_lines.push_back(family.frame_line(family.member(m).line));
            auto pair = find_unseparated_pair(points, std::span<const FrameLine>(sample_lines), SeparationMode::Relaxed);
            if (!pair) {
                success = std::move(sample);
                record.succeeded = true;
                break;
            }
            hitting.clear();
            double hit_weight = 0.0;
            for (std::uint32_t m = 0; m < family.size(); ++m) {
                const FrameLine& l = family.frame_line(family.member(m).line);
                if (f.sign(l, pair->i) != f.sign(l, pair->j)) {
                    hitting.push_back(m);
                    hit_weight += weights.weight(m);
                }
            }
            if (hit_weight <= eps * weights.total_weight()) weights.double_weights(hitting);
        }
        result.weight_doublings += weights.doublings();
        result.guess_history.push_back(record);
        if (success.empty()) k *= 2;
    }

    if (success.empty()) {
        result.fell_back_to_greedy = true;
        result.lines = greedy_hitting_set(points, SeparationMode::Relaxed);
        result.sampled_size = result.lines.size();
        return result;
    }

    result.sampled_size = success.size();
    if (config.prune) success = prune_redundant(family, std::move(success), weights);
    for (std::uint32_t m : success) result.lines.push_back(family.realize(m));
    result.lines = checked(points, std::move(result.lines), SeparationMode::Relaxed, "reweight_approx");
    return result;
}

// ---------------------------------------------------------------------------

std::vector<CanonicalLine> halving_separator(const PointSet& points) {
    const std::size_t n = points.size();
    if (n < 2) throw precondition_error("halving_separator needs at least 2 points");
    if (points.general_position() == GeneralPosition::No ||
        (points.general_position() == GeneralPosition::Assumed && has_collinear_triple(points)))
        throw precondition_error("halving_separator requires general position (three collinear points found)");

    std::vector<std::uint32_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), 0u);
    std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t u, std::uint32_t v) { return points[u] < points[v]; });

    const std::size_t left_size = (n + 1) / 2;
    std::vector<CanonicalLine> lines;
    lines.push_back(lexicographic_split(points, sorted, left_size));
    std::vector<std::uint32_t> left(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(left_size));
    std::vector<std::uint32_t> right(sorted.begin() + static_cast<std::ptrdiff_t>(left_size), sorted.end());

    auto remove = [](std::vector<std::uint32_t>& from, std::span<const std::uint32_t> gone) {
        std::erase_if(from, [&](std::uint32_t i) { return std::find(gone.begin(), gone.end(), i) != gone.end(); });
    };

    while (right.size() >= 3) {
        auto choice = find_split(points, left, right, 2, 2);
        if (!choice) throw verification_error("halving_separator: no simultaneous 2-2 split found");
        CanonicalLine cut = realize_variant(points, choice->u, choice->v, choice->su, choice->sv);
        auto cut_left = cut_side(points, cut, left, 2);
        auto cut_right = cut_side(points, cut, right, 2);
        lines.push_back(cut);
        lines.push_back(split_two_pairs(points, cut_left[0], cut_left[1], cut_right[0], cut_right[1]));
        remove(left, cut_left);
        remove(right, cut_right);
    }

    if (left.size() == 3 && right.size() == 2) {
        auto choice = find_split(points, left, {}, 1, 0);
        if (!choice) throw verification_error("halving_separator: no split of the last three points");
        CanonicalLine cut = realize_variant(points, choice->u, choice->v, choice->su, choice->sv);
        auto pair = cut_side(points, cut, left, 2);
        lines.push_back(cut);
        lines.push_back(split_two_pairs(points, pair[0], pair[1], right[0], right[1]));
    } else if (left.size() == 2 && right.size() == 2) {
        lines.push_back(split_two_pairs(points, left[0], left[1], right[0], right[1]));
    } else if (left.size() == 2 && right.size() == 1) {
        lines.push_back(separating_line(points, left[0], left[1]));
    }

    return checked(points, std::move(lines), SeparationMode::Strict, "halving_separator");
}

int default_grid_n(std::size_t n) {
    if (n <= 1) return 1;
    // Smallest N with N^3 >= n^2.
    const auto target = static_cast<unsigned __int128>(n) * n;
    auto guess = static_cast<std::uint64_t>(std::ceil(std::cbrt(static_cast<double>(n) * static_cast<double>(n))));
    while (guess > 1 && static_cast<unsigned __int128>(guess - 1) * (guess - 1) * (guess - 1) >= target) --guess;
    while (static_cast<unsigned __int128>(guess) * guess * guess < target) ++guess;
    return static_cast<int>(guess);
}

GridSeparation grid_separator(const PointSet& points, int grid_n) {
    if (grid_n < 1) throw precondition_error("grid_separator: N must be positive");
    const std::size_t n = points.size();
    const IntegerFrame& f = points.frame();
    const Integer& scale = f.scale();

    GridSeparation out;
    out.grid_n = grid_n;
    for (int i = 1; i < grid_n; ++i) out.lines.push_back(CanonicalLine::vertical(Rational(i) / grid_n));
    for (int i = 1; i < grid_n; ++i) out.lines.push_back(CanonicalLine::horizontal(Rational(i) / grid_n));

    // Cell of a lattice coordinate; values on a grid line go to the lower cell.
    bool flagged_any = false;
    auto cell_of = [&](const Integer& v, bool& on_line) {
        if (v < 0 || v > scale) throw precondition_error("grid_separator: points must lie in [0,1]^2");
        Integer scaled = v * grid_n;
        Integer q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_mpz_t(), scale.get_mpz_t());
        long cell = q.get_si();
        if (r == 0 && cell > 0) {
            if (cell < grid_n) on_line = true;
            --cell;
        }
        return std::min<long>(cell, grid_n - 1);
    };

    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
    for (std::uint32_t i = 0; i < n; ++i) {
        bool on_line = false;
        long cx = cell_of(f.x(i), on_line);
        long cy = cell_of(f.y(i), on_line);
        if (on_line) {
            ++out.flagged_points;
            flagged_any = true;
        }
        cells[static_cast<std::uint64_t>(cx) * static_cast<std::uint64_t>(grid_n) + static_cast<std::uint64_t>(cy)]
            .push_back(i);
    }

    std::vector<std::uint64_t> crowded;
    for (auto& [id, members] : cells) {
        if (members.size() >= 2) crowded.push_back(id);
    }
    std::sort(crowded.begin(), crowded.end());
    for (std::uint64_t id : crowded) {
        const auto& members = cells[id];
        ++out.active_cells;
        out.colliding_pairs += choose2(members.size());
        if (members.size() == 2) {
            out.lines.push_back(separating_line(points, members[0], members[1]));
            ++out.extra_lines;
            continue;
        }
        PointSet local = points.subset(members);
        std::vector<CanonicalLine> local_lines;
        if (local.general_position() == GeneralPosition::Yes) {
            local_lines = halving_separator(local);
        } else {
            // Degenerate cell: pairwise separators until the cell is separated.
            while (auto pair = find_unseparated_pair(local, local_lines, SeparationMode::Strict))
                local_lines.push_back(separating_line(local, pair->i, pair->j));
        }
        out.extra_lines += local_lines.size();
        for (auto& l : local_lines) out.lines.push_back(std::move(l));
    }

    if (flagged_any) {
        // A point on a grid line is not strictly split from its neighbour cell.
        while (auto pair = find_unseparated_pair(points, out.lines, SeparationMode::Strict)) {
            out.lines.push_back(separating_line(points, pair->i, pair->j));
            ++out.extra_lines;
        }
    }
    return out;
}

}  // namespace linesep
