// sep: separating planar point sets by lines.
//
// Exit codes: 0 ok, 1 verify found an unseparated pair, 2 parse / usage
// error, 3 precondition violated, 4 internal verification failed.

#include "linesep/error.hpp"
#include "linesep/experiments.hpp"
#include "linesep/io.hpp"
#include "linesep/partition2d.hpp"
#include "linesep/sepsys.hpp"
#include "linesep/solvers.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace linesep;
using nlohmann::ordered_json;

namespace {

unsigned threads_from_env() {
    const char* v = std::getenv("SEP_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    unsigned long t = std::strtoul(v, &end, 10);
    if (*end != '\0') throw parse_error("SEP_THREADS must be a non-negative integer");
    return static_cast<unsigned>(t);
}

SeparationMode parse_mode(const std::string& s) {
    if (s == "strict") return SeparationMode::Strict;
    if (s == "relaxed") return SeparationMode::Relaxed;
    throw parse_error("unknown mode '" + s + "'");
}

std::vector<std::uint64_t> parse_n_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        // "2^10" and "1e5" are accepted alongside plain integers.
        if (auto caret = item.find('^'); caret != std::string::npos) {
            Rational base = parse_rational(item.substr(0, caret)), e = parse_rational(item.substr(caret + 1));
            if (base.get_den() != 1 || e.get_den() != 1 || e < 0 || e > 62) throw parse_error("bad size '" + item + "'");
            Integer v;
            mpz_pow_ui(v.get_mpz_t(), base.get_num().get_mpz_t(), e.get_num().get_ui());
            out.push_back(v.get_ui());
            continue;
        }
        Rational v = parse_rational(item);
        if (v.get_den() != 1 || v < 0) throw parse_error("bad size '" + item + "'");
        out.push_back(v.get_num().get_ui());
    }
    if (out.empty()) throw parse_error("empty size list");
    return out;
}

void write_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write '" + path + "'");
    body(out);
}

PointSet load_points(const std::string& path) {
    PointSet P(read_point_file(path));
    if (P.general_position() == GeneralPosition::Assumed)
        std::cerr << "sep: warning: " << P.size() << " points, general position assumed without checking\n";
    return P;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string input;
    std::string algo = "reweight";
    std::string mode = "strict";
    std::uint64_t seed = 0;
    bool json = false;
    bool timing = false;
    int grid_n = 0;
};

int run_solve(const SolveArgs& a) {
    const SeparationMode mode = parse_mode(a.mode);
    PointSet points = load_points(a.input);
    if (points.size() < 2) throw precondition_error("solve needs at least 2 points");
    auto start = std::chrono::steady_clock::now();

    std::vector<CanonicalLine> lines;
    ordered_json extra = ordered_json::object();
    if (a.algo == "exact") {
        ExactResult r = exact_separability(points, mode);
        lines = r.witness;
        extra["sigma"] = r.sigma;
        extra["search_nodes"] = r.nodes;
    } else if (a.algo == "greedy") {
        lines = greedy_hitting_set(points, mode);
    } else if (a.algo == "reweight") {
        SolverConfig cfg;
        cfg.rng_seed = a.seed;
        SolveResult r = reweight_approx(points, cfg);
        lines = r.lines;
        extra["relaxed_size"] = r.lines.size();
        extra["rounds"] = r.rounds_used;
        extra["weight_doublings"] = r.weight_doublings;
        extra["sampled_size"] = r.sampled_size;
        extra["fell_back_to_greedy"] = r.fell_back_to_greedy;
        ordered_json hist = ordered_json::array();
        for (const auto& g : r.guess_history) hist.push_back({{"k", g.k}, {"rounds", g.rounds}, {"succeeded", g.succeeded}});
        extra["guess_history"] = hist;
        if (mode == SeparationMode::Strict) lines = properize(lines, points);
    } else if (a.algo == "halving") {
        lines = halving_separator(points);
    } else if (a.algo == "grid") {
        GridSeparation g = grid_separator(points, a.grid_n > 0 ? a.grid_n : default_grid_n(points.size()));
        lines = g.lines;
        extra["grid_n"] = g.grid_n;
        extra["colliding_pairs"] = g.colliding_pairs;
        extra["active_cells"] = g.active_cells;
        extra["extra_lines"] = g.extra_lines;
        extra["flagged_points"] = g.flagged_points;
    } else {
        throw parse_error("unknown algorithm '" + a.algo + "'");
    }
    if (!verify(points, lines, mode))
        throw verification_error("solve: output of " + a.algo + " does not separate the input");
    double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (!a.json) {
        write_lines(std::cout, lines);
        return 0;
    }
    ordered_json j;
    j["algo"] = a.algo;
    j["mode"] = to_string(mode);
    j["n"] = points.size();
    j["size"] = lines.size();
    j["sigma_lower_bound"] = cell_count_lower_bound(points.size(), mode);
    for (auto& [k, v] : extra.items()) j[k] = v;
    j["seed"] = a.seed;
    j["wall_time_ms"] = a.timing ? ordered_json(elapsed) : ordered_json(nullptr);
    ordered_json out = ordered_json::array();
    for (const auto& l : lines) out.push_back({l.a().get_str(), l.b().get_str(), l.c().get_str()});
    j["lines"] = out;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_verify(const std::string& points_path, const std::string& lines_path, const std::string& mode_text) {
    const SeparationMode mode = parse_mode(mode_text);
    PointSet points = load_points(points_path);
    auto lines = read_line_file(lines_path);
    auto pair = find_unseparated_pair(points, lines, mode);
    if (!pair) {
        std::cout << "separated (" << to_string(mode) << ", " << lines.size() << " lines)\n";
        return 0;
    }
    std::cout << "unseparated pair " << pair->i << ' ' << pair->j << '\n';
    return 1;
}

struct StudyArgs {
    std::string n_list;
    int trials = 5;
    std::uint64_t seed = 0;
    std::string csv;
    std::string json;
};

void emit_summary(const StudyArgs& a, const std::string& summary) {
    if (a.json.empty()) {
        std::cout << summary << '\n';
    } else {
        write_text(a.json, [&](std::ostream& out) { out << summary << '\n'; });
    }
}

int run_partition(const std::string& points_path, const std::string& lines_path, int r, std::uint64_t seed,
                  const std::string& out_path, double alpha, int test_lines) {
    PointSet points = load_points(points_path);
    auto lines = read_line_file(lines_path);
    PartitionOptions opt;
    opt.alpha = alpha;
    Partition part = build_partition(points, lines, r, seed, opt);
    Rng rng(splitmix64(seed));
    auto tests = random_test_lines(part.box, static_cast<std::size_t>(test_lines), rng);
    StabbingStats stab = stabbing_stats(part, tests);
    std::string doc = partition_json(part, points.size(), r, alpha, stab, tests.size());
    write_text(out_path, [&](std::ostream& out) { out << doc << '\n'; });
    if (!out_path.empty() && out_path != "-")
        std::cout << "triangles " << part.triangles.size() << ", max load " << part.max_load << ", conforming "
                  << (part.conforming ? "yes" : "no") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separate planar point sets by lines"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Compute a separating set of lines");
    solve_cmd->add_option("--input", solve.input, "Point file")->required();
    solve_cmd->add_option("--algo", solve.algo, "exact|greedy|reweight|halving|grid")
        ->check(CLI::IsMember({"exact", "greedy", "reweight", "halving", "grid"}));
    solve_cmd->add_option("--mode", solve.mode, "strict|relaxed")->check(CLI::IsMember({"strict", "relaxed"}));
    solve_cmd->add_option("--seed", solve.seed, "Random seed");
    solve_cmd->add_option("--grid-n", solve.grid_n, "Grid resolution for --algo grid (default ceil(n^(2/3)))");
    solve_cmd->add_flag("--json", solve.json, "Print a JSON summary with the lines");
    solve_cmd->add_flag("--timing", solve.timing, "Report wall time (makes output run-dependent)");

    std::string v_points, v_lines, v_mode = "strict";
    auto* verify_cmd = app.add_subcommand("verify", "Check that lines separate points");
    verify_cmd->add_option("--points", v_points, "Point file")->required();
    verify_cmd->add_option("--lines", v_lines, "Line file")->required();
    verify_cmd->add_option("--mode", v_mode, "strict|relaxed")->check(CLI::IsMember({"strict", "relaxed"}));

    auto* study_cmd = app.add_subcommand("study", "Monte-Carlo experiments");
    study_cmd->require_subcommand(1);

    StudyArgs scaling;
    int test_lines = 1000;
    bool timing = false;
    auto* scaling_cmd = study_cmd->add_subcommand("scaling", "Grid separator size on random points");
    scaling_cmd->add_option("--n", scaling.n_list, "Comma-separated sizes")->required();
    scaling_cmd->add_option("--trials", scaling.trials, "Trials per size");
    scaling_cmd->add_option("--seed", scaling.seed, "Random seed");
    scaling_cmd->add_option("--csv", scaling.csv, "CSV output path");
    scaling_cmd->add_option("--json", scaling.json, "JSON summary path (default stdout)");
    scaling_cmd->add_option("--test-lines", test_lines, "Random lines per instance for the active-cell count");
    scaling_cmd->add_flag("--timing", timing, "Record wall time per row");

    StudyArgs balls;
    std::uint64_t n_balls = 10000, n_bins = 0;
    std::string heavy_i = "2,3";
    auto* balls_cmd = study_cmd->add_subcommand("balls-bins", "Heavy-ball counts against their bounds");
    balls_cmd->add_option("--balls", n_balls, "Number of balls");
    balls_cmd->add_option("--bins", n_bins, "Number of bins (default ceil(balls^(4/3)))");
    balls_cmd->add_option("--i", heavy_i, "Comma-separated i values in {2,3,4}");
    balls_cmd->add_option("--trials", balls.trials, "Trials");
    balls_cmd->add_option("--seed", balls.seed, "Random seed");
    balls_cmd->add_option("--csv", balls.csv, "CSV output path");
    balls_cmd->add_option("--json", balls.json, "JSON summary path (default stdout)");

    StudyArgs birthday;
    double c = 1.0;
    auto* birthday_cmd = study_cmd->add_subcommand("birthday", "Bins with two or more balls, c n^2 bins");
    birthday_cmd->add_option("--n", birthday.n_list, "Comma-separated ball counts")->required();
    birthday_cmd->add_option("--c", c, "Bins = ceil(c n^2)");
    birthday_cmd->add_option("--trials", birthday.trials, "Trials per size");
    birthday_cmd->add_option("--seed", birthday.seed, "Random seed");
    birthday_cmd->add_option("--csv", birthday.csv, "CSV output path");
    birthday_cmd->add_option("--json", birthday.json, "JSON summary path (default stdout)");

    StudyArgs trelax;
    int t = 2;
    auto* trelax_cmd = study_cmd->add_subcommand("trelax", "t-relaxed separator size on random points");
    trelax_cmd->add_option("--n", trelax.n_list, "Comma-separated sizes")->required();
    trelax_cmd->add_option("--t", t, "Points allowed per face");
    trelax_cmd->add_option("--trials", trelax.trials, "Trials per size");
    trelax_cmd->add_option("--seed", trelax.seed, "Random seed");
    trelax_cmd->add_option("--csv", trelax.csv, "CSV output path");
    trelax_cmd->add_option("--json", trelax.json, "JSON summary path (default stdout)");

    StudyArgs hyper;
    int d = 3;
    auto* hyper_cmd = study_cmd->add_subcommand("hyper", "Grid separator in [0,1]^d");
    hyper_cmd->add_option("--n", hyper.n_list, "Comma-separated sizes")->required();
    hyper_cmd->add_option("--d", d, "Dimension (2..5)")->check(CLI::Range(2, 5));
    hyper_cmd->add_option("--trials", hyper.trials, "Trials per size");
    hyper_cmd->add_option("--seed", hyper.seed, "Random seed");
    hyper_cmd->add_option("--csv", hyper.csv, "CSV output path");
    hyper_cmd->add_option("--json", hyper.json, "JSON summary path (default stdout)");

    std::string p_points, p_lines, p_out;
    int r = 16, p_tests = 1000;
    std::uint64_t p_seed = 0;
    double alpha = 2.0;
    auto* part_cmd = app.add_subcommand("partition", "Build a simplicial partition from separating lines");
    part_cmd->add_option("--points", p_points, "Point file")->required();
    part_cmd->add_option("--lines", p_lines, "Separating line file")->required();
    part_cmd->add_option("--r", r, "Partition parameter (triangles hold <= n/r points)");
    part_cmd->add_option("--seed", p_seed, "Random seed");
    part_cmd->add_option("--out", p_out, "JSON output path (default stdout)");
    part_cmd->add_option("--alpha", alpha, "Sample size constant");
    part_cmd->add_option("--test-lines", p_tests, "Random lines for stabbing statistics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*solve_cmd) return run_solve(solve);
        if (*verify_cmd) return run_verify(v_points, v_lines, v_mode);
        if (*part_cmd) return run_partition(p_points, p_lines, r, p_seed, p_out, alpha, p_tests);
        const unsigned threads = threads_from_env();
        if (*scaling_cmd) {
            ScalingOptions opt;
            opt.test_lines = test_lines;
            opt.timing = timing;
            opt.threads = threads;
            auto ns = parse_n_list(scaling.n_list);
            ScalingStudy s = scaling_study(ns, scaling.trials, scaling.seed, opt);
            if (!scaling.csv.empty()) write_text(scaling.csv, [&](std::ostream& o) { write_scaling_csv(o, s); });
            emit_summary(scaling, scaling_summary_json(s, scaling.seed, scaling.trials));
            return 0;
        }
        if (*balls_cmd) {
            std::uint64_t bins = n_bins;
            if (bins == 0) bins = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(n_balls), 4.0 / 3.0)));
            std::vector<HeavyBallReport> reports;
            for (std::uint64_t i : parse_n_list(heavy_i))
                reports.push_back(heavy_ball_bounds_check(n_balls, bins, static_cast<int>(i), balls.trials, balls.seed, threads));
            if (!balls.csv.empty()) write_text(balls.csv, [&](std::ostream& o) { write_heavy_csv(o, reports); });
            emit_summary(balls, heavy_summary_json(reports, balls.seed));
            return 0;
        }
        if (*birthday_cmd) {
            std::vector<BirthdayReport> reports;
            for (std::uint64_t n : parse_n_list(birthday.n_list))
                reports.push_back(birthday_max_check(n, c, birthday.trials, trial_seed(birthday.seed, n), threads));
            if (!birthday.csv.empty()) write_text(birthday.csv, [&](std::ostream& o) { write_birthday_csv(o, reports); });
            emit_summary(birthday, birthday_summary_json(reports, birthday.seed));
            return 0;
        }
        if (*trelax_cmd) {
            auto ns = parse_n_list(trelax.n_list);
            TRelaxedStudy s = t_relaxed_study(ns, t, trelax.trials, trelax.seed, threads);
            if (!trelax.csv.empty()) write_text(trelax.csv, [&](std::ostream& o) { write_trelax_csv(o, s); });
            emit_summary(trelax, trelax_summary_json(s, trelax.seed, t, trelax.trials));
            return 0;
        }
        if (*hyper_cmd) {
            auto ns = parse_n_list(hyper.n_list);
            auto rows = hyper_study(ns, d, hyper.trials, hyper.seed, threads);
            if (!hyper.csv.empty()) write_text(hyper.csv, [&](std::ostream& o) { write_hyper_csv(o, rows); });
            emit_summary(hyper, hyper_summary_json(rows, hyper.seed, d, hyper.trials));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "sep: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "sep: internal error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}
