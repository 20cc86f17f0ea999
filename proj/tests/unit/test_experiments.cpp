#include "helpers.hpp"

#include "linesep/error.hpp"
#include "linesep/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

using namespace linesep;
using namespace testutil;

namespace {

BallsBinsStats stats_from_occupancy(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& occ) {
    BallsBinsStats s;
    for (auto [bin, k] : occ) {
        if (k >= 2) {
            s.L2 += k;
            ++s.bins_ge2;
            s.colliding_pairs += k * (k - 1) / 2;
        }
        if (k >= 3) s.L3 += k;
        if (k >= 4) s.L4 += k;
        s.max_occupancy = std::max(s.max_occupancy, k);
    }
    return s;
}

// Largest group of points sharing a strict sign vector; on-line points are alone.
std::size_t max_face_load(const PointSet& P, const std::vector<CanonicalLine>& lines) {
    std::map<std::vector<int>, std::size_t> groups;
    std::size_t best = P.size() ? 1 : 0;
    for (const auto& p : P.points()) {
        std::vector<int> key;
        bool on = false;
        for (const auto& l : lines) {
            int s = to_int(side(l, p));
            on = on || s == 0;
            key.push_back(s);
        }
        if (!on) best = std::max(best, ++groups[key]);
    }
    return best;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("throw_balls examples") {
    auto one = throw_balls(1, 50, 3);
    CHECK(one.L2 == 0);
    CHECK(one.colliding_pairs == 0);
    auto two = throw_balls(2, 1, 3);
    CHECK(two.L2 == 2);
    CHECK(two.bins_ge2 == 1);
    CHECK(two.colliding_pairs == 1);
    CHECK(two.max_occupancy == 2);
    auto none = throw_balls(0, 10, 1);
    CHECK(none.L2 == 0);
    CHECK(none.max_occupancy == 0);
    CHECK_THROWS_AS(throw_balls(3, 0, 1), Error);
    CHECK_THROWS_AS(two.heavy(5), Error);
}

TEST_CASE("statistics agree with the occupancy list, dense and sparse") {
    for (auto [n, b] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {1000, 300}, {5000, 100000}, {100, 7}, {20000, 20000000000ULL}, {3000, 50000000}}) {
        for (std::uint64_t seed : {1u, 2u, 99u}) {
            auto occ = bin_occupancy(n, b, seed);
            std::uint64_t total = 0;
            for (std::size_t k = 0; k < occ.size(); ++k) {
                total += occ[k].second;
                CHECK(occ[k].first < b);
                CHECK(occ[k].second >= 1);
                if (k) CHECK(occ[k - 1].first < occ[k].first);
            }
            CHECK(total == n);
            auto s = throw_balls(n, b, seed);
            auto want = stats_from_occupancy(occ);
            CHECK(s.L2 == want.L2);
            CHECK(s.L3 == want.L3);
            CHECK(s.L4 == want.L4);
            CHECK(s.bins_ge2 == want.bins_ge2);
            CHECK(s.colliding_pairs == want.colliding_pairs);
            CHECK(s.max_occupancy == want.max_occupancy);
            CHECK(s.L2 >= s.L3);
            CHECK(s.L3 >= s.L4);
            CHECK(s.bins_ge2 <= s.L2);
            CHECK(throw_balls(n, b, seed).colliding_pairs == s.colliding_pairs);
        }
    }
}

TEST_CASE("mean colliding pairs matches linearity of expectation") {
    const int trials = 1000;
    std::vector<double> z(trials);
    for (int t = 0; t < trials; ++t) z[t] = static_cast<double>(throw_balls(1000, 1000000, 500 + t).colliding_pairs);
    const double expect = 1000.0 * 999 / 2 / 1e6;
    auto ci = mean_ci99(z);
    // Z is close to Poisson, so its variance is about its mean.
    CHECK(std::fabs(ci.mean - expect) <= 3 * std::sqrt(expect / trials));
}

TEST_CASE("mean and interval") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    auto ci = mean_ci99(xs);
    CHECK(ci.mean == doctest::Approx(3.0));
    CHECK(ci.sd == doctest::Approx(std::sqrt(2.5)));
    const double half = 2.5758293035489 * std::sqrt(2.5) / std::sqrt(5.0);
    CHECK(ci.low == doctest::Approx(3.0 - half).epsilon(1e-6));
    CHECK(ci.high == doctest::Approx(3.0 + half).epsilon(1e-6));
}

TEST_CASE("heavy-ball report") {
    auto r = heavy_ball_bounds_check(100, 1000000, 2, 2000, 7);
    CHECK(r.F == doctest::Approx(0.005));
    CHECK(r.lower == doctest::Approx(6.7668e-4).epsilon(1e-3));
    CHECK(r.upper == doctest::Approx(0.081548).epsilon(1e-3));
    CHECK(r.heavy.mean >= r.lower);
    CHECK(r.heavy.mean <= r.upper);

    auto big = heavy_ball_bounds_check(10000, 215444, 2, 30, 11);
    CHECK(big.F == doctest::Approx(1e8 / (2 * 215444.0)));
    CHECK(big.within);

    auto empty = heavy_ball_bounds_check(0, 1, 2, 5, 1);
    CHECK(empty.skipped);
    CHECK_THROWS_AS(heavy_ball_bounds_check(100, 299, 2, 5, 1), Error);
    CHECK_THROWS_AS(heavy_ball_bounds_check(100, 1000, 5, 5, 1), Error);
}

TEST_CASE("birthday report") {
    auto two = birthday_max_check(2, 1.0, 200, 5);
    CHECK(two.n_bins == 4);
    CHECK(two.max_bins_ge2 <= 1);
    CHECK_FALSE(two.scale.has_value());
    auto r = birthday_max_check(1000, 1.0, 100, 9);
    CHECK(r.n_bins == 1000000);
    REQUIRE(r.scale.has_value());
    CHECK(*r.scale == doctest::Approx(std::log(1000.0) / std::log(std::log(1000.0))));
    CHECK(*r.ratio == doctest::Approx(r.max_bins_ge2 / *r.scale));
    CHECK(r.per_trial_bins_ge2.size() == 100);
    CHECK(*std::max_element(r.per_trial_bins_ge2.begin(), r.per_trial_bins_ge2.end()) == r.max_bins_ge2);
    CHECK(r.max_colliding_pairs >= r.max_bins_ge2);
    CHECK_THROWS_AS(birthday_max_check(10, 0.0, 5, 1), Error);
}

TEST_CASE("random points") {
    CHECK(random_points(0, 4).size() == 0);
    auto two = random_points(2, 4);
    CHECK(two.size() == 2);
    CHECK_FALSE(two[0] == two[1]);
    auto a = random_points(10000, 17), b = random_points(10000, 17);
    CHECK(std::equal(a.points().begin(), a.points().end(), b.points().begin()));
    for (const auto& p : a.points()) {
        CHECK(p.x >= 0);
        CHECK(p.x < 1);
        CHECK(p.y >= 0);
        CHECK(p.y < 1);
        CHECK(p.x.get_den() <= (Integer(1) << kLatticeBits));
    }
    CHECK_FALSE(std::equal(a.points().begin(), a.points().end(), random_points(10000, 18).points().begin()));
}

TEST_CASE("grid collisions against direct binning") {
    auto lattice = random_lattice_points(5000, 23);
    for (int N : {1, 7, 64, 300}) {
        std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> cells;
        for (auto [x, y] : lattice) {
            auto cx = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * N) >> kLatticeBits);
            auto cy = static_cast<std::uint64_t>((static_cast<unsigned __int128>(y) * N) >> kLatticeBits);
            ++cells[{cx, cy}];
        }
        std::uint64_t pairs = 0, active = 0, most = 0;
        for (auto& [c, k] : cells) {
            pairs += k * (k - 1) / 2;
            active += k >= 2;
            most = std::max(most, k);
        }
        auto g = grid_collisions(lattice, N);
        CHECK(g.grid_n == N);
        CHECK(g.colliding_pairs == pairs);
        CHECK(g.active_cells == active);
        CHECK(g.max_occupancy == most);
        Rng rng(N);
        auto per_line = max_active_cells_per_line(lattice, N, 100, rng);
        CHECK(per_line <= active);
        CHECK(per_line <= static_cast<std::uint64_t>(2 * N - 1));
    }
}

TEST_CASE("log-log slope") {
    std::vector<double> xs{1, 2, 4, 8, 16}, ys;
    for (double x : xs) ys.push_back(3 * std::pow(x, 0.5));
    CHECK(*fit_loglog_slope(xs, ys) == doctest::Approx(0.5));
    std::vector<double> one{4}, y1{2};
    CHECK_FALSE(fit_loglog_slope(one, y1).has_value());
}

TEST_CASE("scaling study") {
    std::vector<std::uint64_t> single{512};
    ScalingOptions opts;
    opts.test_lines = 50;
    auto s = scaling_study(single, 2, 3, opts);
    CHECK_FALSE(s.exponent.has_value());
    CHECK(s.rows.size() == 2);

    std::vector<std::uint64_t> ns{256, 1024, 4096};
    auto a = scaling_study(ns, 10, 5, opts);
    opts.threads = 3;
    auto b = scaling_study(ns, 10, 5, opts);
    REQUIRE(a.rows.size() == 30);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& r = a.rows[i];
        CHECK(r.seed == b.rows[i].seed);
        CHECK(r.separator_size == b.rows[i].separator_size);
        CHECK(r.colliding_pairs == b.rows[i].colliding_pairs);
        CHECK(r.max_active_per_line == b.rows[i].max_active_per_line);
        CHECK(r.grid_n == default_grid_n(r.n));
        CHECK(r.separator_size >= 2 * static_cast<std::uint64_t>(r.grid_n - 1));
        CHECK(r.active_cells <= r.colliding_pairs);
    }
    REQUIRE(a.summary.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        const double n = static_cast<double>(ns[k]), N = a.summary[k].grid_n;
        CHECK(a.summary[k].expected_size == doctest::Approx(2 * (N - 1) + n * (n - 1) / 2 / (N * N)));
        if (k) CHECK(a.summary[k].size.mean >= a.summary[k - 1].size.mean);
    }
    REQUIRE(a.exponent.has_value());
    CHECK(*a.exponent == doctest::Approx(*b.exponent));
}

TEST_CASE("higher-dimensional grids") {
    auto one = random_hyper_points(1, 3, 1);
    auto g1 = grid_separator_d(one);
    CHECK(g1.grid_n == 1);
    CHECK(g1.size() == 0);

    for (std::size_t n : {10u, 100u, 1000u, 65536u}) CHECK(default_grid_n_d(n, 2) == default_grid_n(n));
    CHECK(default_grid_n_d(4096, 3) == 64);
    CHECK(default_grid_n_d(4097, 3) == 65);
    CHECK_THROWS_AS(default_grid_n_d(10, 1), Error);

    double mean = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        auto h = random_hyper_points(4096, 3, 100 + t);
        auto g = grid_separator_d(h);
        CHECK(g.grid_n == 64);
        CHECK(verify_hyper(h, g.hyperplanes));
        CHECK(g.size() == 3 * 63 + g.extra);
        mean += g.colliding_pairs / double(trials);
    }
    const double expect = 4096.0 * 4095 / 2 / (64.0 * 64 * 64);
    CHECK(std::fabs(mean - expect) <= 4 * std::sqrt(expect / trials));

    auto pts2 = random_hyper_points(300, 2, 4);
    auto g2 = grid_separator_d(pts2);
    CHECK(verify_hyper(pts2, g2.hyperplanes));
    // Dropping the bisectors breaks separation once some cell is shared.
    if (g2.extra > 0) {
        std::vector<Hyperplane> grid_only(g2.hyperplanes.begin(), g2.hyperplanes.end() - static_cast<long>(g2.extra));
        CHECK_FALSE(verify_hyper(pts2, grid_only));
    }
}

TEST_CASE("t-relaxed separation") {
    CHECK(t_relaxed_grid_n(10000, 2) == static_cast<int>(std::ceil(std::pow(10000.0, 0.6))));
    CHECK(t_relaxed_grid_n(4096, 1) == 256);
    CHECK_THROWS_AS(t_relaxed_grid_n(10, 0), Error);

    PointSet P = random_points(400, 31);
    auto t1 = t_relaxed_separator(P, 1);
    CHECK(verify(P, t1.lines, SeparationMode::Relaxed));
    CHECK(max_points_per_face(P, t1.lines) == 1);
    for (int t : {2, 3, 5}) {
        auto s = t_relaxed_separator(P, t);
        CHECK(s.lines.size() == 2 * static_cast<std::size_t>(s.grid_n - 1) + s.extra_lines);
        CHECK(max_points_per_face(P, s.lines) == max_face_load(P, s.lines));
        CHECK(max_face_load(P, s.lines) <= static_cast<std::size_t>(t));
    }
    PointSet small = random_points(5, 2);
    auto big_t = t_relaxed_separator(small, 10);
    CHECK(big_t.extra_lines == 0);
    CHECK(big_t.lines.size() == 2 * static_cast<std::size_t>(big_t.grid_n - 1));

    std::vector<std::uint64_t> ns{1024, 2048};
    auto a = t_relaxed_study(ns, 2, 2, 8);
    auto b = t_relaxed_study(ns, 2, 2, 8, 2);
    REQUIRE(a.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.rows[i].total_lines == b.rows[i].total_lines);
        CHECK(a.rows[i].max_points_per_face <= 2);
    }
}

TEST_CASE("parallel_for covers every index once") {
    for (unsigned threads : {1u, 2u, 5u}) {
        std::vector<int> hit(1000, 0);
        parallel_for(hit.size(), threads, [&](std::size_t i) { ++hit[i]; });
        CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
    }
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}

}  // TEST_SUITE
