#pragma once

// Text formats: point files, line files, CSV tables and JSON documents.

#include "linesep/experiments.hpp"
#include "linesep/geom.hpp"
#include "linesep/partition2d.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace linesep {

// Exact value of "3", "-0.25", "1.5e-3" or "7/9".
Rational parse_rational(std::string_view text);
std::string rational_string(const Rational& q);  // "p" or "p/q"

// One point per line ("x y"); '#' starts a comment; blank lines skipped.
// Parse errors name the source and line number.
std::vector<Point> parse_points(std::istream& in, const std::string& source = "<input>");
std::vector<Point> read_point_file(const std::string& path);

// One line per row ("a b c", integers).
std::vector<CanonicalLine> parse_lines(std::istream& in, const std::string& source = "<input>");
std::vector<CanonicalLine> read_line_file(const std::string& path);
void write_lines(std::ostream& out, std::span<const CanonicalLine> lines);
void write_points(std::ostream& out, std::span<const Point> points);

// RFC 4180 field quoting.
std::string csv_field(std::string_view field);

class CsvWriter {
public:
    static constexpr int kSchemaVersion = 1;
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
    std::size_t columns_;
};

// Shortest round-trip text of a double; "null" is never produced here.
std::string format_double(double v);

void write_scaling_csv(std::ostream& out, const ScalingStudy& study);
std::string scaling_summary_json(const ScalingStudy& study, std::uint64_t seed, int trials);

void write_heavy_csv(std::ostream& out, const std::vector<HeavyBallReport>& reports);
std::string heavy_summary_json(const std::vector<HeavyBallReport>& reports, std::uint64_t seed);

void write_birthday_csv(std::ostream& out, const std::vector<BirthdayReport>& reports);
std::string birthday_summary_json(const std::vector<BirthdayReport>& reports, std::uint64_t seed);

void write_trelax_csv(std::ostream& out, const TRelaxedStudy& study);
std::string trelax_summary_json(const TRelaxedStudy& study, std::uint64_t seed, int t, int trials);

void write_hyper_csv(std::ostream& out, const std::vector<HyperRow>& rows);
std::string hyper_summary_json(const std::vector<HyperRow>& rows, std::uint64_t seed, int d, int trials);

std::string partition_json(const Partition& partition, std::size_t n, int r, double alpha,
                           const StabbingStats& stabbing, std::size_t test_lines);

}  // namespace linesep
