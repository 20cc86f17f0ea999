#include "linesep/cellsample.hpp"
#include "linesep/error.hpp"
#include "linesep/experiments.hpp"
#include "linesep/io.hpp"
#include "linesep/sepsys.hpp"
#include "linesep/solvers.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;
using namespace linesep;

namespace {

// Coordinates arrive as anything whose str() is an integer, decimal or p/q.
Rational to_rational(const py::handle& v) { return parse_rational(py::str(v).cast<std::string>()); }

std::vector<Point> to_points(const py::iterable& pts) {
    std::vector<Point> out;
    for (auto item : pts) {
        auto seq = py::reinterpret_borrow<py::sequence>(item);
        if (py::len(seq) != 2) throw py::value_error("points must be (x, y) pairs");
        out.emplace_back(to_rational(seq[0]), to_rational(seq[1]));
    }
    return out;
}

py::int_ to_pyint(const Integer& v) { return py::int_(py::module_::import("builtins").attr("int")(v.get_str())); }

py::tuple to_py(const CanonicalLine& l) { return py::make_tuple(to_pyint(l.a()), to_pyint(l.b()), to_pyint(l.c())); }

py::list to_py(const std::vector<CanonicalLine>& lines) {
    py::list out;
    for (const auto& l : lines) out.append(to_py(l));
    return out;
}

std::vector<CanonicalLine> to_lines(const py::iterable& lines) {
    std::vector<CanonicalLine> out;
    for (auto item : lines) {
        auto seq = py::reinterpret_borrow<py::sequence>(item);
        if (py::len(seq) != 3) throw py::value_error("lines must be (a, b, c) triples");
        Integer a(py::str(seq[0]).cast<std::string>()), b(py::str(seq[1]).cast<std::string>()),
            c(py::str(seq[2]).cast<std::string>());
        out.emplace_back(a, b, c);
    }
    return out;
}

SeparationMode to_mode(const std::string& m) {
    if (m == "strict") return SeparationMode::Strict;
    if (m == "relaxed") return SeparationMode::Relaxed;
    throw py::value_error("mode must be 'strict' or 'relaxed'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Separating planar point sets by lines";

    static py::exception<Error> base(m, "LinesepError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            switch (e.kind()) {
                case ErrorKind::Parse:
                case ErrorKind::Precondition: PyErr_SetString(PyExc_ValueError, e.what()); return;
                case ErrorKind::Verification: PyErr_SetString(base.ptr(), e.what()); return;
            }
        }
    });

    m.def(
        "verify",
        [](const py::iterable& pts, const py::iterable& lines, const std::string& mode) {
            PointSet P(to_points(pts));
            auto L = to_lines(lines);
            auto pair = find_unseparated_pair(P, L, to_mode(mode));
            return pair ? py::object(py::make_tuple(pair->i, pair->j)) : py::object(py::none());
        },
        py::arg("points"), py::arg("lines"), py::arg("mode") = "strict",
        "First unseparated pair (i, j), or None when the lines separate the points.");

    m.def(
        "exact",
        [](const py::iterable& pts, const std::string& mode) {
            ExactResult r = exact_separability(PointSet(to_points(pts)), to_mode(mode));
            return py::make_tuple(r.sigma, to_py(r.witness));
        },
        py::arg("points"), py::arg("mode") = "strict", "Minimum separating set (at most 14 points).");

    m.def(
        "greedy",
        [](const py::iterable& pts, const std::string& mode) {
            return to_py(greedy_hitting_set(PointSet(to_points(pts)), to_mode(mode)));
        },
        py::arg("points"), py::arg("mode") = "strict");

    m.def(
        "reweight",
        [](const py::iterable& pts, std::uint64_t seed, double c_net, bool prune) {
            SolverConfig cfg;
            cfg.rng_seed = seed;
            cfg.epsilon_constant = c_net;
            cfg.prune = prune;
            SolveResult r = reweight_approx(PointSet(to_points(pts)), cfg);
            py::dict d;
            d["lines"] = to_py(r.lines);
            d["rounds"] = r.rounds_used;
            d["weight_doublings"] = r.weight_doublings;
            d["sampled_size"] = r.sampled_size;
            d["fell_back_to_greedy"] = r.fell_back_to_greedy;
            py::list hist;
            for (const auto& g : r.guess_history) hist.append(py::make_tuple(g.k, g.rounds, g.succeeded));
            d["guess_history"] = hist;
            return d;
        },
        py::arg("points"), py::arg("seed") = 0, py::arg("c_net") = 4.0, py::arg("prune") = true,
        "Relaxed separating set by multiplicative reweighting.");

    m.def(
        "properize",
        [](const py::iterable& pts, const py::iterable& lines) {
            return to_py(properize(to_lines(lines), PointSet(to_points(pts))));
        },
        py::arg("points"), py::arg("lines"));

    m.def(
        "halving", [](const py::iterable& pts) { return to_py(halving_separator(PointSet(to_points(pts)))); },
        py::arg("points"));

    m.def(
        "grid",
        [](const py::iterable& pts, int grid_n) {
            PointSet P(to_points(pts));
            GridSeparation g = grid_separator(P, grid_n > 0 ? grid_n : default_grid_n(P.size()));
            py::dict d;
            d["lines"] = to_py(g.lines);
            d["grid_n"] = g.grid_n;
            d["colliding_pairs"] = g.colliding_pairs;
            d["active_cells"] = g.active_cells;
            d["extra_lines"] = g.extra_lines;
            return d;
        },
        py::arg("points"), py::arg("grid_n") = 0);

    m.def(
        "random_points",
        [](std::size_t n, std::uint64_t seed) {
            py::list out;
            for (auto [x, y] : random_lattice_points(n, seed))
                out.append(py::make_tuple(rational_string(Rational(Integer(static_cast<unsigned long>(x)), Integer(1) << kLatticeBits)),
                                          rational_string(Rational(Integer(static_cast<unsigned long>(y)), Integer(1) << kLatticeBits))));
            return out;
        },
        py::arg("n"), py::arg("seed") = 0, "Random points of the 2^40 lattice in [0,1)^2, as 'p/q' strings.");

    m.def(
        "throw_balls",
        [](std::uint64_t balls, std::uint64_t bins, std::uint64_t seed) {
            BallsBinsStats s = throw_balls(balls, bins, seed);
            py::dict d;
            d["L2"] = s.L2;
            d["L3"] = s.L3;
            d["L4"] = s.L4;
            d["bins_ge2"] = s.bins_ge2;
            d["colliding_pairs"] = s.colliding_pairs;
            d["max_occupancy"] = s.max_occupancy;
            return d;
        },
        py::arg("balls"), py::arg("bins"), py::arg("seed") = 0);

    m.def(
        "count_cell_vertices",
        [](const py::iterable& cell, const py::iterable& lines) {
            return build_index(ConvexCell(to_points(cell)), to_lines(lines)).count_vertices();
        },
        py::arg("cell"), py::arg("lines"), "Arrangement vertices strictly inside a convex cell.");

    m.def(
        "cell_count_lower_bound",
        [](std::size_t n, const std::string& mode) { return cell_count_lower_bound(n, to_mode(mode)); },
        py::arg("n"), py::arg("mode") = "strict");
}
