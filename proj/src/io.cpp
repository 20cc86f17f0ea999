#include "linesep/io.hpp"

#include "linesep/error.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace linesep {

using nlohmann::ordered_json;

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer parse_integer(std::string_view s) {
    std::string_view body = s;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) body.remove_prefix(1);
    if (!all_digits(body)) throw parse_error("not an integer: '" + std::string(s) + "'");
    Integer v(std::string(body), 10);
    return s[0] == '-' ? Integer(-v) : v;
}

Integer pow10(unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot read '" + path + "'");
    return in;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw parse_error("empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer p = parse_integer(text.substr(0, slash));
        std::string_view qs = text.substr(slash + 1);
        if (!all_digits(qs)) throw parse_error("bad denominator in '" + std::string(text) + "'");
        Integer q(std::string(qs), 10);
        if (q == 0) throw parse_error("zero denominator in '" + std::string(text) + "'");
        Rational r(p, q);
        r.canonicalize();
        return r;
    }
    std::string_view s = text;
    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = s.substr(e + 1);
        Integer ev = parse_integer(es);
        if (!ev.fits_slong_p() || abs(ev) > 100000) throw parse_error("exponent out of range in '" + std::string(text) + "'");
        exponent = ev.get_si();
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
            throw parse_error("not a number: '" + std::string(text) + "'");
        digits = std::string(ip) + std::string(fp);
        exponent -= static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw parse_error("not a number: '" + std::string(text) + "'");
        digits = std::string(s);
    }
    Integer mant(digits, 10);
    if (negative) mant = -mant;
    Rational r = exponent >= 0 ? Rational(mant * pow10(static_cast<unsigned long>(exponent)))
                               : Rational(mant, pow10(static_cast<unsigned long>(-exponent)));
    r.canonicalize();
    return r;
}

std::string rational_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::vector<Point> parse_points(std::istream& in, const std::string& source) {
    std::vector<Point> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto fields = split_ws(strip_comment(line));
        if (fields.empty()) continue;
        if (fields.size() != 2)
            throw parse_error(source + ":" + std::to_string(number) + ": expected 'x y', got " +
                              std::to_string(fields.size()) + " fields");
        try {
            out.emplace_back(parse_rational(fields[0]), parse_rational(fields[1]));
        } catch (const Error& e) {
            throw parse_error(source + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Point> read_point_file(const std::string& path) {
    auto in = open_input(path);
    return parse_points(in, path);
}

std::vector<CanonicalLine> parse_lines(std::istream& in, const std::string& source) {
    std::vector<CanonicalLine> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto fields = split_ws(strip_comment(line));
        if (fields.empty()) continue;
        if (fields.size() != 3)
            throw parse_error(source + ":" + std::to_string(number) + ": expected 'a b c', got " +
                              std::to_string(fields.size()) + " fields");
        try {
            Integer a = parse_integer(fields[0]), b = parse_integer(fields[1]), c = parse_integer(fields[2]);
            if (a == 0 && b == 0) throw parse_error("a and b are both zero");
            out.emplace_back(a, b, c);
        } catch (const Error& e) {
            throw parse_error(source + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

std::vector<CanonicalLine> read_line_file(const std::string& path) {
    auto in = open_input(path);
    return parse_lines(in, path);
}

void write_lines(std::ostream& out, std::span<const CanonicalLine> lines) {
    for (const auto& l : lines) out << l.a().get_str() << ' ' << l.b().get_str() << ' ' << l.c().get_str() << '\n';
}

void write_points(std::ostream& out, std::span<const Point> points) {
    for (const auto& p : points) out << rational_string(p.x) << ' ' << rational_string(p.y) << '\n';
}

// ---------------------------------------------------------------------------

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    out_ << "# schema=" << kSchemaVersion << "\r\n";
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw precondition_error("CSV row has the wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_field(fields[i]);
    }
    out_ << "\r\n";
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

template <typename T>
std::string str(T v) {
    if constexpr (std::is_floating_point_v<T>) {
        return format_double(v);
    } else {
        return std::to_string(v);
    }
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json ci_json(const MeanCI& ci) {
    return ordered_json{{"mean", ci.mean}, {"sd", ci.sd}, {"ci99_low", ci.low}, {"ci99_high", ci.high}};
}

}  // namespace

void write_scaling_csv(std::ostream& out, const ScalingStudy& study) {
    CsvWriter csv(out, {"n", "trial", "seed", "separator_size", "grid_N", "colliding_pairs", "active_cells",
                        "max_active_per_line", "wall_time_ms"});
    for (const auto& r : study.rows)
        csv.row({str(r.n), str(r.trial), str(r.seed), str(r.separator_size), str(r.grid_n), str(r.colliding_pairs),
                 str(r.active_cells), str(r.max_active_per_line), str(r.wall_time_ms)});
}

std::string scaling_summary_json(const ScalingStudy& study, std::uint64_t seed, int trials) {
    ordered_json j;
    j["study"] = "scaling";
    j["seed"] = seed;
    j["trials"] = trials;
    j["fitted_exponent"] = opt(study.exponent);
    ordered_json rows = ordered_json::array();
    for (const auto& s : study.summary) {
        rows.push_back({{"n", s.n},
                        {"grid_n", s.grid_n},
                        {"separator_size", ci_json(s.size)},
                        {"expected_size", s.expected_size},
                        {"mean_colliding_pairs", s.mean_colliding_pairs},
                        {"mean_active_cells", s.mean_active_cells},
                        {"max_active_per_line", s.max_active_per_line}});
    }
    j["per_n"] = rows;
    return j.dump(2);
}

void write_heavy_csv(std::ostream& out, const std::vector<HeavyBallReport>& reports) {
    CsvWriter csv(out, {"n_balls", "n_bins", "i", "trials", "F", "lower", "upper", "mean", "sd", "ci99_low",
                        "ci99_high", "within", "skipped"});
    for (const auto& r : reports)
        csv.row({str(r.n_balls), str(r.n_bins), str(r.i), str(r.trials), str(r.F), str(r.lower), str(r.upper),
                 str(r.heavy.mean), str(r.heavy.sd), str(r.heavy.low), str(r.heavy.high), r.within ? "1" : "0",
                 r.skipped ? "1" : "0"});
}

std::string heavy_summary_json(const std::vector<HeavyBallReport>& reports, std::uint64_t seed) {
    ordered_json j;
    j["study"] = "balls-bins";
    j["seed"] = seed;
    ordered_json rows = ordered_json::array();
    for (const auto& r : reports) {
        rows.push_back({{"n_balls", r.n_balls},
                        {"n_bins", r.n_bins},
                        {"i", r.i},
                        {"trials", r.trials},
                        {"F", r.F},
                        {"lower", r.lower},
                        {"upper", r.upper},
                        {"heavy", ci_json(r.heavy)},
                        {"skipped", r.skipped},
                        {"within", r.within}});
    }
    j["checks"] = rows;
    return j.dump(2);
}

void write_birthday_csv(std::ostream& out, const std::vector<BirthdayReport>& reports) {
    CsvWriter csv(out, {"n_balls", "n_bins", "trial", "bins_ge2"});
    for (const auto& r : reports)
        for (std::size_t t = 0; t < r.per_trial_bins_ge2.size(); ++t)
            csv.row({str(r.n_balls), str(r.n_bins), str(t), str(r.per_trial_bins_ge2[t])});
}

std::string birthday_summary_json(const std::vector<BirthdayReport>& reports, std::uint64_t seed) {
    ordered_json j;
    j["study"] = "birthday";
    j["seed"] = seed;
    ordered_json rows = ordered_json::array();
    for (const auto& r : reports) {
        rows.push_back({{"n_balls", r.n_balls},
                        {"n_bins", r.n_bins},
                        {"c", r.c},
                        {"trials", r.trials},
                        {"max_bins_ge2", r.max_bins_ge2},
                        {"mean_bins_ge2", r.mean_bins_ge2},
                        {"max_colliding_pairs", r.max_colliding_pairs},
                        {"mean_colliding_pairs", r.mean_colliding_pairs},
                        {"log_ratio_scale", opt(r.scale)},
                        {"max_ratio", opt(r.ratio)}});
    }
    j["per_n"] = rows;
    return j.dump(2);
}

void write_trelax_csv(std::ostream& out, const TRelaxedStudy& study) {
    CsvWriter csv(out, {"n", "trial", "seed", "t", "grid_N", "total_lines", "extra_lines", "max_points_per_face"});
    for (const auto& r : study.rows)
        csv.row({str(r.n), str(r.trial), str(r.seed), str(r.t), str(r.grid_n), str(r.total_lines),
                 str(r.extra_lines), str(r.max_points_per_face)});
}

std::string trelax_summary_json(const TRelaxedStudy& study, std::uint64_t seed, int t, int trials) {
    ordered_json j;
    j["study"] = "trelax";
    j["seed"] = seed;
    j["t"] = t;
    j["trials"] = trials;
    j["fitted_exponent"] = opt(study.exponent);
    ordered_json rows = ordered_json::array();
    for (auto [n, mean] : study.mean_lines) rows.push_back({{"n", n}, {"mean_total_lines", mean}});
    j["per_n"] = rows;
    return j.dump(2);
}

void write_hyper_csv(std::ostream& out, const std::vector<HyperRow>& rows) {
    CsvWriter csv(out, {"n", "d", "trial", "seed", "grid_N", "size", "colliding_pairs", "redraws"});
    for (const auto& r : rows)
        csv.row({str(r.n), str(r.d), str(r.trial), str(r.seed), str(r.grid_n), str(r.size), str(r.colliding_pairs),
                 str(r.redraws)});
}

std::string hyper_summary_json(const std::vector<HyperRow>& rows, std::uint64_t seed, int d, int trials) {
    ordered_json j;
    j["study"] = "hyper";
    j["seed"] = seed;
    j["d"] = d;
    j["trials"] = trials;
    std::vector<double> xs, ys;
    ordered_json per = ordered_json::array();
    for (std::size_t a = 0; a < rows.size();) {
        std::size_t b = a;
        double size = 0, coll = 0;
        while (b < rows.size() && rows[b].n == rows[a].n) {
            size += static_cast<double>(rows[b].size);
            coll += static_cast<double>(rows[b].colliding_pairs);
            ++b;
        }
        const auto k = static_cast<double>(b - a);
        per.push_back({{"n", rows[a].n},
                       {"grid_n", rows[a].grid_n},
                       {"mean_size", size / k},
                       {"mean_colliding_pairs", coll / k}});
        xs.push_back(static_cast<double>(rows[a].n));
        ys.push_back(size / k);
        a = b;
    }
    j["fitted_exponent"] = opt(fit_loglog_slope(xs, ys));
    j["per_n"] = per;
    return j.dump(2);
}

std::string partition_json(const Partition& partition, std::size_t n, int r, double alpha,
                           const StabbingStats& stabbing, std::size_t test_lines) {
    ordered_json j;
    j["n"] = n;
    j["r"] = r;
    j["alpha"] = alpha;
    j["sample_size"] = partition.source_sample_size;
    j["attempts"] = partition.attempts;
    j["conforming"] = partition.conforming;
    j["max_load"] = partition.max_load;
    j["boundary_ties"] = partition.boundary_ties;
    j["faces"] = partition.face_count;
    j["euler_holds"] = partition.euler_holds;
    j["stabbing"] = {{"test_lines", test_lines}, {"max", stabbing.max}, {"mean", stabbing.mean}};
    ordered_json lines = ordered_json::array();
    for (const auto& l : partition.sample) lines.push_back({l.a().get_str(), l.b().get_str(), l.c().get_str()});
    j["sample_lines"] = lines;
    ordered_json tris = ordered_json::array();
    for (const auto& cell : partition.triangles) {
        ordered_json verts = ordered_json::array();
        for (const auto& v : cell.triangle) verts.push_back({rational_string(v.x), rational_string(v.y)});
        tris.push_back({{"vertices", verts}, {"points", cell.points}});
    }
    j["triangles"] = tris;
    return j.dump(2);
}

}  // namespace linesep
