// Fixtures shared by the test suites.
#pragma once

#include "oracle.hpp"

#include <nodal/cli/parse.hpp>
#include <nodal/singular.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace fixtures {

using nodal::HomPoly;
using nodal::ProjPoint;

inline HomPoly poly(const std::string& text, std::size_t min_vars = 0)
{
    return nodal::parse_polynomial(text, min_vars);
}

inline std::vector<ProjPoint> points(const std::string& text)
{
    std::istringstream in(text);
    return nodal::parse_points(in);
}

inline std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus(const std::string& name) { return slurp(std::string(NODAL_CORPUS_DIR) + "/" + name); }

inline oracle::Terms to_terms(const HomPoly& f)
{
    oracle::Terms t;
    for (const auto& [e, c] : f.terms()) t.emplace_back(std::vector<int>(e.begin(), e.end()), c);
    return t;
}

inline HomPoly from_terms(const oracle::Terms& t, std::size_t vars)
{
    int d = 0;
    for (auto v : t.front().first) d += v;
    HomPoly f(vars, d);
    for (const auto& [e, c] : t) f.add_term(nodal::Exponent(e.begin(), e.end()), c);
    return f;
}

inline nodal::ExactMatrix to_matrix(const oracle::Dense& m)
{
    const std::size_t cols = m.empty() ? 0 : m.front().size();
    return nodal::ExactMatrix::from_dense(m, cols);
}

// Quartic curve with nodes at the three coordinate points.
inline HomPoly three_nodes() { return poly("x^2*y^2 + x^2*z^2 + y^2*z^2"); }
inline std::vector<ProjPoint> three_nodes_points() { return points("1:0:0\n0:1:0\n0:0:1\n"); }

// Four general lines: six nodes.
inline HomPoly four_lines() { return poly("x*y*z*(x+y+z)"); }
inline std::vector<ProjPoint> four_lines_points()
{
    return points("0:0:1\n0:1:0\n1:0:0\n0:1:-1\n1:0:-1\n1:-1:0\n");
}

inline HomPoly fermat_quartic() { return poly("x^4 + y^4 + z^4"); }

// Cayley's four-nodal cubic surface.
inline HomPoly cayley() { return poly("x*y*z + x*y*w + x*z*w + y*z*w"); }
inline std::vector<ProjPoint> cayley_points() { return points("1:0:0:0\n0:1:0:0\n0:0:1:0\n0:0:0:1\n"); }

// Plane cubic with one node at [0:0:1].
inline HomPoly nodal_cubic() { return poly("y^2*z - x^3 - x^2*z"); }
inline std::vector<ProjPoint> nodal_cubic_points() { return points("0:0:1\n"); }

} // namespace fixtures
