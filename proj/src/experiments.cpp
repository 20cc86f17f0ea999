#include "linesep/experiments.hpp"

#include "linesep/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace linesep {

namespace {

constexpr std::uint64_t kDenseBinLimit = 10'000'000;
constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

std::uint64_t choose2(std::uint64_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
        return splitmix64(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
    }
};

// Seed of trial `trial` at size n.
std::uint64_t row_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t trial) {
    return trial_seed(seed ^ splitmix64(n), trial);
}

template <typename F>
void for_each_occupancy(std::uint64_t n_balls, std::uint64_t n_bins, std::uint64_t seed, F&& visit) {
    Rng rng(seed);
    if (n_bins <= kDenseBinLimit) {
        std::vector<std::uint32_t> occ(n_bins, 0);
        std::vector<std::uint64_t> used;
        for (std::uint64_t b = 0; b < n_balls; ++b) {
            std::uint64_t bin = uniform_below(rng, n_bins);
            if (occ[bin]++ == 0) used.push_back(bin);
        }
        std::sort(used.begin(), used.end());
        for (std::uint64_t bin : used) visit(bin, occ[bin]);
        return;
    }
    // Sparse: sort the draws and count runs.
    std::vector<std::uint64_t> draws(n_balls);
    for (auto& d : draws) d = uniform_below(rng, n_bins);
    std::sort(draws.begin(), draws.end());
    for (std::size_t lo = 0; lo < draws.size();) {
        std::size_t hi = lo + 1;
        while (hi < draws.size() && draws[hi] == draws[lo]) ++hi;
        visit(draws[lo], hi - lo);
        lo = hi;
    }
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------

std::uint64_t BallsBinsStats::heavy(int i) const {
    switch (i) {
        case 2: return L2;
        case 3: return L3;
        case 4: return L4;
        default: throw precondition_error("heavy-ball index must be 2, 3 or 4");
    }
}

BallsBinsStats throw_balls(std::uint64_t n_balls, std::uint64_t n_bins, std::uint64_t seed) {
    if (n_bins == 0) throw precondition_error("throw_balls needs at least one bin");
    BallsBinsStats s;
    s.n_balls = n_balls;
    s.n_bins = n_bins;
    for_each_occupancy(n_balls, n_bins, seed, [&](std::uint64_t, std::uint64_t k) {
        if (k >= 2) {
            s.L2 += k;
            ++s.bins_ge2;
            s.colliding_pairs += choose2(k);
        }
        if (k >= 3) s.L3 += k;
        if (k >= 4) s.L4 += k;
        s.max_occupancy = std::max(s.max_occupancy, k);
    });
    return s;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> bin_occupancy(std::uint64_t n_balls, std::uint64_t n_bins,
                                                                   std::uint64_t seed) {
    if (n_bins == 0) throw precondition_error("bin_occupancy needs at least one bin");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for_each_occupancy(n_balls, n_bins, seed, [&](std::uint64_t bin, std::uint64_t k) { out.emplace_back(bin, k); });
    return out;
}

MeanCI mean_ci99(std::span<const double> samples) {
    MeanCI r;
    if (samples.empty()) return r;
    const auto n = static_cast<double>(samples.size());
    r.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : samples) ss += (v - r.mean) * (v - r.mean);
    r.sd = samples.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    double half = kZ99 * r.sd / std::sqrt(n);
    r.low = r.mean - half;
    r.high = r.mean + half;
    return r;
}

HeavyBallReport heavy_ball_bounds_check(std::uint64_t n_balls, std::uint64_t n_bins, int i, int trials,
                                        std::uint64_t seed, unsigned threads) {
    if (i < 2 || i > 4) throw precondition_error("heavy_ball_bounds_check: i must be 2, 3 or 4");
    if (trials < 1) throw precondition_error("heavy_ball_bounds_check: trials must be positive");
    if (n_bins < 3 * n_balls || n_bins == 0)
        throw precondition_error("heavy_ball_bounds_check: needs n_bins >= 3 n_balls");
    HeavyBallReport r;
    r.n_balls = n_balls;
    r.n_bins = n_bins;
    r.i = i;
    r.trials = trials;
    const auto n = static_cast<double>(n_balls);
    r.F = n * std::pow(n / (i * static_cast<double>(n_bins)), i - 1);
    r.lower = std::exp(-2.0) * r.F;
    r.upper = 6.0 * std::exp(static_cast<double>(i - 1)) * r.F;
    if (n_balls == 0) {
        r.skipped = true;
        return r;
    }
    std::vector<double> samples(static_cast<std::size_t>(trials));
    parallel_for(samples.size(), threads, [&](std::size_t t) {
        samples[t] = static_cast<double>(throw_balls(n_balls, n_bins, trial_seed(seed, t)).heavy(i));
    });
    r.heavy = mean_ci99(samples);
    r.within = r.heavy.low >= r.lower && r.heavy.high <= r.upper;
    return r;
}

BirthdayReport birthday_max_check(std::uint64_t n_balls, double c, int trials, std::uint64_t seed,
                                  unsigned threads) {
    if (!(c > 0)) throw precondition_error("birthday_max_check: c must be positive");
    if (trials < 1) throw precondition_error("birthday_max_check: trials must be positive");
    BirthdayReport r;
    r.n_balls = n_balls;
    r.c = c;
    r.trials = trials;
    const auto n = static_cast<double>(n_balls);
    r.n_bins = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(c * n * n)));
    std::vector<BallsBinsStats> stats(static_cast<std::size_t>(trials));
    parallel_for(stats.size(), threads,
                 [&](std::size_t t) { stats[t] = throw_balls(n_balls, r.n_bins, trial_seed(seed, t)); });
    double sum_bins = 0.0, sum_pairs = 0.0;
    for (const auto& s : stats) {
        r.per_trial_bins_ge2.push_back(s.bins_ge2);
        r.max_bins_ge2 = std::max(r.max_bins_ge2, s.bins_ge2);
        r.max_colliding_pairs = std::max(r.max_colliding_pairs, s.colliding_pairs);
        sum_bins += static_cast<double>(s.bins_ge2);
        sum_pairs += static_cast<double>(s.colliding_pairs);
    }
    r.mean_bins_ge2 = sum_bins / trials;
    r.mean_colliding_pairs = sum_pairs / trials;
    if (n_balls >= 3) {
        r.scale = std::log(n) / std::log(std::log(n));
        r.ratio = static_cast<double>(r.max_bins_ge2) / *r.scale;
    }
    return r;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::uint64_t, std::uint64_t>> random_lattice_points(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.reserve(n);
    std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> seen;
    seen.reserve(n);
    while (out.size() < n) {
        std::uint64_t x = rng() >> (64 - kLatticeBits);
        std::uint64_t y = rng() >> (64 - kLatticeBits);
        if (seen.emplace(x, y).second) out.emplace_back(x, y);
    }
    return out;
}

PointSet lattice_point_set(std::span<const std::pair<std::uint64_t, std::uint64_t>> lattice) {
    const Integer denom = Integer(1) << kLatticeBits;
    std::vector<Point> pts;
    pts.reserve(lattice.size());
    for (auto [x, y] : lattice)
        pts.emplace_back(Rational(Integer(static_cast<unsigned long>(x)), denom),
                         Rational(Integer(static_cast<unsigned long>(y)), denom));
    return PointSet(std::move(pts));
}

PointSet random_points(std::size_t n, std::uint64_t seed) {
    auto lattice = random_lattice_points(n, seed);
    return lattice_point_set(lattice);
}

namespace {

// Grid cell of a lattice numerator; exact grid values go to the lower cell.
std::uint64_t lattice_cell(std::uint64_t v, int grid_n) {
    auto scaled = static_cast<unsigned __int128>(v) * static_cast<unsigned>(grid_n);
    auto cell = static_cast<std::uint64_t>(scaled >> kLatticeBits);
    bool exact = (scaled & ((static_cast<unsigned __int128>(1) << kLatticeBits) - 1)) == 0;
    if (exact && cell > 0) --cell;
    return std::min<std::uint64_t>(cell, static_cast<std::uint64_t>(grid_n - 1));
}

std::unordered_map<std::uint64_t, std::uint32_t> occupancy(
    std::span<const std::pair<std::uint64_t, std::uint64_t>> lattice, int grid_n) {
    std::unordered_map<std::uint64_t, std::uint32_t> occ;
    occ.reserve(lattice.size());
    for (auto [x, y] : lattice)
        ++occ[lattice_cell(x, grid_n) * static_cast<std::uint64_t>(grid_n) + lattice_cell(y, grid_n)];
    return occ;
}

}  // namespace

GridCollisions grid_collisions(std::span<const std::pair<std::uint64_t, std::uint64_t>> lattice, int grid_n) {
    if (grid_n < 1) throw precondition_error("grid_collisions: N must be positive");
    GridCollisions g;
    g.grid_n = grid_n;
    for (auto [cell, k] : occupancy(lattice, grid_n)) {
        if (k >= 2) ++g.active_cells;
        g.colliding_pairs += choose2(k);
        g.max_occupancy = std::max<std::uint64_t>(g.max_occupancy, k);
    }
    return g;
}

std::uint64_t max_active_cells_per_line(std::span<const std::pair<std::uint64_t, std::uint64_t>> lattice,
                                        int grid_n, int lines, Rng& rng) {
    std::unordered_set<std::uint64_t> active;
    for (auto [cell, k] : occupancy(lattice, grid_n))
        if (k >= 2) active.insert(cell);
    if (active.empty()) {
        for (int l = 0; l < lines; ++l) (void)uniform01(rng);
        return 0;
    }
    const double N = grid_n;
    auto boundary = [](int s, double u) -> std::pair<double, double> {
        switch (s) {
            case 0: return {u, 0.0};
            case 1: return {1.0, u};
            case 2: return {1.0 - u, 1.0};
            default: return {0.0, 1.0 - u};
        }
    };
    std::uint64_t best = 0;
    std::vector<double> tx, ty, ts;
    for (int l = 0; l < lines; ++l) {
        int s1, s2;
        double u1, u2;
        do {
            double a = 4.0 * uniform01(rng), b = 4.0 * uniform01(rng);
            s1 = std::min(3, static_cast<int>(a));
            s2 = std::min(3, static_cast<int>(b));
            u1 = a - s1;
            u2 = b - s2;
        } while (s1 == s2);
        auto [x0, y0] = boundary(s1, u1);
        auto [x1, y1] = boundary(s2, u2);
        // Parameters where the chord meets grid lines; each list is monotone.
        auto crossings = [&](double p0, double p1, std::vector<double>& out) {
            out.clear();
            if (p0 == p1) return;
            if (p0 < p1) {
                for (int i = static_cast<int>(std::floor(p0 * N)) + 1; i < grid_n && i / N < p1; ++i)
                    out.push_back((i / N - p0) / (p1 - p0));
            } else {
                for (int i = static_cast<int>(std::ceil(p0 * N)) - 1; i > 0 && i / N > p1; --i)
                    out.push_back((i / N - p0) / (p1 - p0));
            }
        };
        crossings(x0, x1, tx);
        crossings(y0, y1, ty);
        ts.clear();
        ts.push_back(0.0);
        std::merge(tx.begin(), tx.end(), ty.begin(), ty.end(), std::back_inserter(ts));
        ts.push_back(1.0);
        std::uint64_t hit = 0;
        for (std::size_t k = 1; k < ts.size(); ++k) {
            if (ts[k] - ts[k - 1] <= 1e-15) continue;
            double t = 0.5 * (ts[k] + ts[k - 1]);
            double x = x0 + t * (x1 - x0), y = y0 + t * (y1 - y0);
            auto cx = std::clamp<long>(static_cast<long>(std::floor(x * N)), 0, grid_n - 1);
            auto cy = std::clamp<long>(static_cast<long>(std::floor(y * N)), 0, grid_n - 1);
            if (active.count(static_cast<std::uint64_t>(cx) * static_cast<std::uint64_t>(grid_n) +
                             static_cast<std::uint64_t>(cy)))
                ++hit;
        }
        best = std::max(best, hit);
    }
    return best;
}

std::optional<double> fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
    double mx = 0, my = 0;
    const auto k = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= k;
    my /= k;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

// ---------------------------------------------------------------------------

ScalingStudy scaling_study(std::span<const std::uint64_t> n_list, int trials, std::uint64_t seed,
                           const ScalingOptions& options) {
    if (trials < 1) throw precondition_error("scaling_study: trials must be positive");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw precondition_error("scaling_study: n list must be ascending");
    ScalingStudy study;
    const std::size_t T = static_cast<std::size_t>(trials);
    study.rows.resize(n_list.size() * T);
    parallel_for(study.rows.size(), options.threads, [&](std::size_t task) {
        const std::uint64_t n = n_list[task / T];
        const int trial = static_cast<int>(task % T);
        StudyRow& row = study.rows[task];
        row.n = n;
        row.trial = trial;
        row.seed = row_seed(seed, n, static_cast<std::uint64_t>(trial));
        auto start = std::chrono::steady_clock::now();
        auto lattice = random_lattice_points(n, row.seed);
        PointSet points = lattice_point_set(lattice);
        row.grid_n = default_grid_n(n);
        if (n >= 2) {
            GridSeparation g = grid_separator(points, row.grid_n);
            if (options.verify) {
                std::vector<FrameLine> frame;
                frame.reserve(g.lines.size());
                for (const auto& l : g.lines) frame.push_back(points.frame().to_frame(l));
                if (find_unseparated_pair(points, std::span<const FrameLine>(frame), SeparationMode::Strict))
                    throw verification_error("scaling_study: grid separator failed for n = " + std::to_string(n));
            }
            row.separator_size = g.lines.size();
            row.colliding_pairs = g.colliding_pairs;
            row.active_cells = g.active_cells;
        } else {
            row.separator_size = 2 * static_cast<std::uint64_t>(row.grid_n - 1);
        }
        Rng line_rng(splitmix64(row.seed));
        row.max_active_per_line = max_active_cells_per_line(lattice, row.grid_n, options.test_lines, line_rng);
        if (options.timing)
            row.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    });

    std::vector<double> xs, ys;
    for (std::size_t a = 0; a < n_list.size(); ++a) {
        ScalingSummary s;
        s.n = n_list[a];
        std::vector<double> sizes;
        double coll = 0, active = 0;
        for (std::size_t t = 0; t < T; ++t) {
            const StudyRow& row = study.rows[a * T + t];
            s.grid_n = row.grid_n;
            sizes.push_back(static_cast<double>(row.separator_size));
            coll += static_cast<double>(row.colliding_pairs);
            active += static_cast<double>(row.active_cells);
            s.max_active_per_line = std::max(s.max_active_per_line, row.max_active_per_line);
        }
        s.size = mean_ci99(sizes);
        s.mean_colliding_pairs = coll / static_cast<double>(T);
        s.mean_active_cells = active / static_cast<double>(T);
        const double N = s.grid_n;
        const double n = static_cast<double>(s.n);
        s.expected_size = 2.0 * (N - 1.0) + n * (n - 1.0) / 2.0 / (N * N);
        study.summary.push_back(s);
        if (xs.empty() || xs.back() != n) {
            xs.push_back(n);
            ys.push_back(s.size.mean);
        }
    }
    study.exponent = fit_loglog_slope(xs, ys);
    return study;
}

// ---------------------------------------------------------------------------

HyperPointSet random_hyper_points(std::size_t n, int d, std::uint64_t seed) {
    if (d < 2) throw precondition_error("random_hyper_points: d must be at least 2");
    HyperPointSet h;
    h.d = d;
    h.n = n;
    h.coords.resize(n * static_cast<std::size_t>(d));
    Rng rng(seed);
    for (double& c : h.coords) c = uniform01(rng);
    return h;
}

int default_grid_n_d(std::size_t n, int d) {
    if (d < 2) throw precondition_error("default_grid_n_d: d must be at least 2");
    if (n <= 1) return 1;
    // Smallest N with N^(d+1) >= n^2.
    const Integer target = Integer(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
    auto guess = static_cast<long>(std::ceil(std::pow(static_cast<double>(n), 2.0 / (d + 1))));
    auto power = [&](long v) {
        Integer r;
        mpz_pow_ui(r.get_mpz_t(), Integer(v).get_mpz_t(), static_cast<unsigned long>(d + 1));
        return r;
    };
    while (guess > 1 && power(guess - 1) >= target) --guess;
    while (power(guess) < target) ++guess;
    return static_cast<int>(guess);
}

namespace {

double plane_value(const Hyperplane& h, const double* x, int d) {
    double v = -h.offset;
    for (int k = 0; k < d; ++k) v += h.normal[static_cast<std::size_t>(k)] * x[k];
    return v;
}

int plane_sign(const Hyperplane& h, const double* x, int d) {
    double v = plane_value(h, x, d);
    if (std::abs(v) <= kHyperTolerance) throw verification_error("point within tolerance of a hyperplane");
    return v > 0 ? 1 : -1;
}

}  // namespace

bool verify_hyper(const HyperPointSet& points, std::span<const Hyperplane> planes) {
    std::vector<std::vector<std::int8_t>> signs(points.n);
    for (std::size_t i = 0; i < points.n; ++i) {
        signs[i].reserve(planes.size());
        for (const auto& h : planes) signs[i].push_back(static_cast<std::int8_t>(plane_sign(h, points.point(i), points.d)));
    }
    std::sort(signs.begin(), signs.end());
    return std::adjacent_find(signs.begin(), signs.end()) == signs.end();
}

GridSeparationD grid_separator_d(const HyperPointSet& points) {
    const int d = points.d;
    if (d < 2) throw precondition_error("grid_separator_d: d must be at least 2");
    GridSeparationD out;
    out.grid_n = default_grid_n_d(points.n, d);
    const int N = out.grid_n;
    for (int k = 0; k < d; ++k) {
        for (int i = 1; i < N; ++i) {
            Hyperplane h;
            h.normal.assign(static_cast<std::size_t>(d), 0.0);
            h.normal[static_cast<std::size_t>(k)] = 1.0;
            h.offset = static_cast<double>(i) / N;
            out.hyperplanes.push_back(std::move(h));
        }
    }
    std::map<std::vector<int>, std::vector<std::uint32_t>> cells;
    std::vector<int> key(static_cast<std::size_t>(d));
    for (std::uint32_t i = 0; i < points.n; ++i) {
        const double* x = points.point(i);
        for (int k = 0; k < d; ++k) {
            double s = x[k] * N;
            double r = std::round(s);
            if (r >= 1 && r <= N - 1 && std::abs(s - r) <= kHyperTolerance * N)
                throw verification_error("grid_separator_d: point within tolerance of a grid hyperplane");
            key[static_cast<std::size_t>(k)] = std::clamp(static_cast<int>(std::floor(s)), 0, N - 1);
        }
        cells[key].push_back(i);
    }
    for (auto& [cell, members] : cells) {
        if (members.size() < 2) continue;
        ++out.active_cells;
        out.colliding_pairs += choose2(members.size());
        // Bisect the first two points of any unsplit group until all are alone.
        std::vector<std::vector<std::uint32_t>> groups{members};
        while (true) {
            auto it = std::find_if(groups.begin(), groups.end(), [](const auto& g) { return g.size() >= 2; });
            if (it == groups.end()) break;
            const double* p = points.point((*it)[0]);
            const double* q = points.point((*it)[1]);
            Hyperplane h;
            h.normal.resize(static_cast<std::size_t>(d));
            double pp = 0, qq = 0;
            for (int k = 0; k < d; ++k) {
                h.normal[static_cast<std::size_t>(k)] = q[k] - p[k];
                pp += p[k] * p[k];
                qq += q[k] * q[k];
            }
            h.offset = (qq - pp) / 2.0;
            std::vector<std::vector<std::uint32_t>> next;
            for (auto& g : groups) {
                std::vector<std::uint32_t> neg, pos;
                for (std::uint32_t i : g) (plane_sign(h, points.point(i), d) > 0 ? pos : neg).push_back(i);
                if (!neg.empty()) next.push_back(std::move(neg));
                if (!pos.empty()) next.push_back(std::move(pos));
            }
            groups = std::move(next);
            out.hyperplanes.push_back(std::move(h));
            ++out.extra;
        }
    }
    if (!verify_hyper(points, out.hyperplanes)) throw verification_error("grid_separator_d: output does not separate");
    return out;
}

std::vector<HyperRow> hyper_study(std::span<const std::uint64_t> n_list, int d, int trials, std::uint64_t seed,
                                  unsigned threads) {
    if (trials < 1) throw precondition_error("hyper_study: trials must be positive");
    const std::size_t T = static_cast<std::size_t>(trials);
    std::vector<HyperRow> rows(n_list.size() * T);
    parallel_for(rows.size(), threads, [&](std::size_t task) {
        HyperRow& row = rows[task];
        row.n = n_list[task / T];
        row.d = d;
        row.trial = static_cast<int>(task % T);
        row.seed = row_seed(seed ^ static_cast<std::uint64_t>(d), row.n, static_cast<std::uint64_t>(row.trial));
        for (int attempt = 0;; ++attempt) {
            try {
                auto points = random_hyper_points(row.n, d, attempt == 0 ? row.seed : trial_seed(row.seed, static_cast<std::uint64_t>(attempt)));
                GridSeparationD g = grid_separator_d(points);
                row.grid_n = g.grid_n;
                row.size = g.size();
                row.colliding_pairs = g.colliding_pairs;
                row.redraws = attempt;
                break;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Verification || attempt >= 16) throw;
            }
        }
    });
    return rows;
}

// ---------------------------------------------------------------------------

int t_relaxed_grid_n(std::size_t n, int t) {
    if (t < 1) throw precondition_error("t must be at least 1");
    if (n <= 1) return 1;
    // Smallest N with N^(2t+1) >= n^(t+1).
    Integer target;
    mpz_pow_ui(target.get_mpz_t(), Integer(static_cast<unsigned long>(n)).get_mpz_t(),
               static_cast<unsigned long>(t + 1));
    auto guess = static_cast<long>(
        std::ceil(std::pow(static_cast<double>(n), static_cast<double>(t + 1) / (2 * t + 1))));
    auto power = [&](long v) {
        Integer r;
        mpz_pow_ui(r.get_mpz_t(), Integer(v).get_mpz_t(), static_cast<unsigned long>(2 * t + 1));
        return r;
    };
    while (guess > 1 && power(guess - 1) >= target) --guess;
    while (power(guess) < target) ++guess;
    return static_cast<int>(guess);
}

namespace {

// Recursive halving of one group: a vertical (or horizontal) line between the
// two middle points, moved off every point of P.
class GroupSplitter {
public:
    explicit GroupSplitter(const PointSet& points) : points_(points) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            xs_.push_back(points[i].x);
            ys_.push_back(points[i].y);
        }
        std::sort(xs_.begin(), xs_.end());
        std::sort(ys_.begin(), ys_.end());
    }

    void split(std::vector<std::uint32_t> group, std::size_t t, std::vector<CanonicalLine>& out) const {
        if (group.size() <= t) return;
        bool vertical = true;
        std::sort(group.begin(), group.end(), [&](std::uint32_t u, std::uint32_t v) { return points_[u] < points_[v]; });
        if (points_[group.front()].x == points_[group.back()].x) {
            vertical = false;
            std::sort(group.begin(), group.end(),
                      [&](std::uint32_t u, std::uint32_t v) { return points_[u].y < points_[v].y; });
        }
        auto coord = [&](std::uint32_t i) -> const Rational& { return vertical ? points_[i].x : points_[i].y; };
        // The split index nearest the middle with distinct coordinates on both sides.
        const std::size_t h = group.size() / 2;
        std::size_t cut = 0;
        for (std::size_t off = 0; off < group.size() && cut == 0; ++off) {
            for (std::size_t c : {h - std::min(h, off), h + off}) {
                if (c >= 1 && c < group.size() && coord(group[c - 1]) < coord(group[c])) {
                    cut = c;
                    break;
                }
            }
        }
        Rational lo = coord(group[cut - 1]), hi = coord(group[cut]);
        const auto& sorted = vertical ? xs_ : ys_;
        Rational c = (lo + hi) / 2;
        while (std::binary_search(sorted.begin(), sorted.end(), c)) c = (lo + c) / 2;
        out.push_back(vertical ? CanonicalLine::vertical(c) : CanonicalLine::horizontal(c));
        std::vector<std::uint32_t> left(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(cut));
        std::vector<std::uint32_t> right(group.begin() + static_cast<std::ptrdiff_t>(cut), group.end());
        split(std::move(left), t, out);
        split(std::move(right), t, out);
    }

private:
    const PointSet& points_;
    std::vector<Rational> xs_, ys_;
};

}  // namespace

TRelaxedSeparation t_relaxed_separator(const PointSet& points, int t) {
    if (t < 1) throw precondition_error("t_relaxed_separator: t must be at least 1");
    const IntegerFrame& f = points.frame();
    const Integer& scale = f.scale();
    TRelaxedSeparation out;
    out.grid_n = t_relaxed_grid_n(points.size(), t);
    const int N = out.grid_n;
    for (int i = 1; i < N; ++i) out.lines.push_back(CanonicalLine::vertical(Rational(i) / N));
    for (int i = 1; i < N; ++i) out.lines.push_back(CanonicalLine::horizontal(Rational(i) / N));

    auto cell_of = [&](const Integer& v) {
        if (v < 0 || v > scale) throw precondition_error("t_relaxed_separator: points must lie in [0,1]^2");
        Integer scaled = v * N;
        Integer q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_mpz_t(), scale.get_mpz_t());
        long cell = q.get_si();
        if (r == 0 && cell > 0) --cell;
        return std::min<long>(cell, N - 1);
    };
    std::map<std::pair<long, long>, std::vector<std::uint32_t>> cells;
    for (std::uint32_t i = 0; i < points.size(); ++i) cells[{cell_of(f.x(i)), cell_of(f.y(i))}].push_back(i);

    GroupSplitter splitter(points);
    for (auto& [cell, members] : cells) {
        if (members.size() <= static_cast<std::size_t>(t)) continue;
        std::size_t before = out.lines.size();
        splitter.split(members, static_cast<std::size_t>(t), out.lines);
        out.extra_lines += out.lines.size() - before;
    }
    return out;
}

std::size_t max_points_per_face(const PointSet& points, std::span<const CanonicalLine> lines) {
    const std::size_t n = points.size();
    if (n == 0) return 0;
    const IntegerFrame& f = points.frame();
    std::vector<FrameLine> frame;
    frame.reserve(lines.size());
    for (const auto& l : lines) frame.push_back(f.to_frame(l));
    std::vector<std::uint64_t> hash(n, 0);
    for (std::size_t k = 0; k < frame.size(); ++k) {
        std::uint64_t key[3];
        for (int s = 0; s < 3; ++s) key[s] = splitmix64(k * 3 + static_cast<std::uint64_t>(s) + 0x5eedULL);
        for (std::size_t i = 0; i < n; ++i) hash[i] ^= key[f.sign(frame[k], i) + 1];
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t u, std::uint32_t v) { return hash[u] < hash[v]; });
    std::size_t best = 1;
    for (std::size_t a = 0; a < n;) {
        std::size_t b = a;
        while (b < n && hash[order[b]] == hash[order[a]]) ++b;
        if (b - a > 1) {
            // Exact confirmation inside a hash bucket.
            std::vector<std::vector<std::int8_t>> vecs;
            for (std::size_t q = a; q < b; ++q) {
                std::vector<std::int8_t> s;
                bool on_line = false;
                for (const auto& l : frame) {
                    int v = f.sign(l, order[q]);
                    on_line |= v == 0;
                    s.push_back(static_cast<std::int8_t>(v));
                }
                if (!on_line) vecs.push_back(std::move(s));
            }
            std::sort(vecs.begin(), vecs.end());
            for (std::size_t x = 0; x < vecs.size();) {
                std::size_t y = x;
                while (y < vecs.size() && vecs[y] == vecs[x]) ++y;
                best = std::max(best, y - x);
                x = y;
            }
        }
        a = b;
    }
    return best;
}

TRelaxedStudy t_relaxed_study(std::span<const std::uint64_t> n_list, int t, int trials, std::uint64_t seed,
                              unsigned threads) {
    if (trials < 1) throw precondition_error("t_relaxed_study: trials must be positive");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw precondition_error("t_relaxed_study: n list must be ascending");
    TRelaxedStudy study;
    const std::size_t T = static_cast<std::size_t>(trials);
    study.rows.resize(n_list.size() * T);
    parallel_for(study.rows.size(), threads, [&](std::size_t task) {
        TRelaxedRow& row = study.rows[task];
        row.n = n_list[task / T];
        row.trial = static_cast<int>(task % T);
        row.t = t;
        row.seed = row_seed(seed, row.n, static_cast<std::uint64_t>(row.trial));
        PointSet points = random_points(row.n, row.seed);
        TRelaxedSeparation sep = t_relaxed_separator(points, t);
        row.grid_n = sep.grid_n;
        row.total_lines = sep.lines.size();
        row.extra_lines = sep.extra_lines;
        row.max_points_per_face = max_points_per_face(points, sep.lines);
        if (row.max_points_per_face > static_cast<std::uint64_t>(t))
            throw verification_error("t_relaxed_separator left more than t points in a face");
    });
    std::vector<double> xs, ys;
    for (std::size_t a = 0; a < n_list.size(); ++a) {
        double sum = 0;
        for (std::size_t q = 0; q < T; ++q) sum += static_cast<double>(study.rows[a * T + q].total_lines);
        double mean = sum / static_cast<double>(T);
        study.mean_lines.emplace_back(n_list[a], mean);
        if (xs.empty() || xs.back() != static_cast<double>(n_list[a])) {
            xs.push_back(static_cast<double>(n_list[a]));
            ys.push_back(mean);
        }
    }
    study.exponent = fit_loglog_slope(xs, ys);
    return study;
}

}  // namespace linesep
