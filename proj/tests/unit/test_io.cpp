#include "helpers.hpp"

#include "linesep/error.hpp"
#include "linesep/io.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <sstream>

using namespace linesep;
using namespace testutil;

TEST_SUITE("io") {

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-0.25") == Rational(-1) / 4);
    CHECK(parse_rational("1.5e-3") == Rational(3) / 2000);
    CHECK(parse_rational("7/9") == Rational(7) / 9);
    CHECK(parse_rational("-6/8") == Rational(-3) / 4);
    CHECK(parse_rational("+.5") == Rational(1) / 2);
    CHECK(parse_rational("2.") == 2);
    CHECK(parse_rational("1E2") == 100);
    // 0.1 is exactly one tenth, not the nearest double.
    CHECK(parse_rational("0.1") == Rational(1) / 10);
    for (const char* bad : {"", "abc", "1/0", "1/-2", "1..2", ".", "-", "1e", "1e999999", "0x10", "1/2/3", "--1"})
        CHECK_THROWS_AS(parse_rational(bad), Error);
    CHECK(rational_string(Rational(-3) / 4) == "-3/4");
    CHECK(rational_string(Rational(5)) == "5");
}

TEST_CASE("rational text round trip") {
    Rng rng(81);
    for (int it = 0; it < 500; ++it) {
        Rational q = Rational(static_cast<long>(uniform_below(rng, 1u << 30)) - (1 << 29)) /
                     static_cast<long>(1 + uniform_below(rng, 1u << 20));
        CHECK(parse_rational(rational_string(q)) == q);
    }
}

TEST_CASE("point files") {
    std::istringstream in("# corners\n0 0\n\n1/2 0.5   # inline\n  -3 1e1\n");
    auto pts = parse_points(in, "mem");
    REQUIRE(pts.size() == 3);
    CHECK(pts[1] == pq(1, 2, 1, 2));
    CHECK(pts[2] == pt(-3, 10));

    std::istringstream bad("0 0\n1 2 3\n");
    try {
        parse_points(bad, "mem");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("mem:2") != std::string::npos);
    }
    std::istringstream junk("0 0\n1 x\n");
    CHECK_THROWS_AS(parse_points(junk, "mem"), Error);
    CHECK_THROWS_AS(read_point_file("/nonexistent/points.txt"), Error);

    std::ostringstream out;
    write_points(out, pts);
    std::istringstream back(out.str());
    CHECK(parse_points(back) == pts);
}

TEST_CASE("line files") {
    std::istringstream in("2 -2 0\n0 3 -1 # y = 1/3\n");
    auto lines = parse_lines(in, "mem");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == CanonicalLine(1, -1, 0));
    CHECK(lines[1] == CanonicalLine::horizontal(Rational(1) / 3));
    for (const char* bad : {"0 0 1\n", "1 2\n", "1 2 3.5\n", "1 2 x\n"}) {
        std::istringstream b(bad);
        CHECK_THROWS_AS(parse_lines(b), Error);
    }
    std::ostringstream out;
    write_lines(out, lines);
    CHECK(out.str() == "1 -1 0\n0 3 -1\n");
}

TEST_CASE("csv quoting and schema") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    std::ostringstream out;
    CsvWriter w(out, {"x", "y"});
    w.row({"1", "a,b"});
    CHECK(out.str() == "# schema=1\r\nx,y\r\n1,\"a,b\"\r\n");
    CHECK_THROWS_AS(w.row({"1"}), Error);
}

TEST_CASE("doubles print shortest round trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    for (double v : {1.0 / 3, 1e-300, 123456.789, -2.5e17}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("json summaries") {
    std::vector<std::uint64_t> single{256};
    ScalingOptions opts;
    opts.test_lines = 10;
    auto study = scaling_study(single, 2, 1, opts);
    auto j = nlohmann::json::parse(scaling_summary_json(study, 1, 2));
    CHECK(j["study"] == "scaling");
    CHECK(j["fitted_exponent"].is_null());
    CHECK(j["per_n"].size() == 1);
    CHECK(j["per_n"][0]["grid_n"] == default_grid_n(256));

    std::ostringstream csv;
    write_scaling_csv(csv, study);
    std::istringstream lines(csv.str());
    std::string row;
    int count = 0;
    while (std::getline(lines, row)) ++count;
    CHECK(count == 4);  // schema, header, two trials

    auto part = build_partition(make_set({{0, 0}, {4, 1}}), std::vector<CanonicalLine>{CanonicalLine(2, 0, -3)}, 1, 1);
    auto pj = nlohmann::json::parse(partition_json(part, 2, 1, 2.0, StabbingStats{}, 0));
    CHECK(pj["n"] == 2);
    std::size_t assigned = 0;
    for (const auto& t : pj["triangles"]) {
        CHECK(t["vertices"].size() == 3);
        CHECK(t["vertices"][0][0].is_string());
        assigned += t["points"].size();
    }
    CHECK(assigned == 2);
}

}  // TEST_SUITE
