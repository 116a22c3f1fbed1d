#include "common.hpp"

#include <nodal/koszul.hpp>
#include <nodal/singular.hpp>

#include <gtest/gtest.h>

using namespace nodal;
using fixtures::points;
using fixtures::poly;

namespace {

struct Nodal {
    HomPoly f;
    std::vector<ProjPoint> pts;
};

std::vector<Nodal> nodal_inputs()
{
    return {{fixtures::three_nodes(), fixtures::three_nodes_points()},
            {fixtures::four_lines(), fixtures::four_lines_points()},
            {fixtures::nodal_cubic(), fixtures::nodal_cubic_points()},
            {fixtures::cayley(), fixtures::cayley_points()}};
}

} // namespace

TEST(ProjPoint, NormalizesFirstNonzeroCoordinate)
{
    const ProjPoint p({0, 2, -4});
    EXPECT_EQ(p.chart(), 1u);
    EXPECT_EQ(p.to_string(), "0:1:-2");
    EXPECT_EQ(p, ProjPoint({0, Rational(-1, 2), 1}));
    EXPECT_THROW(ProjPoint({0, 0, 0}), Error);
    const auto q = p.with_chart(2);
    EXPECT_EQ(q.chart(), 2u);
    EXPECT_EQ(q[2], 1);
    EXPECT_EQ(q[1], Rational(-1, 2));
    EXPECT_THROW(p.with_chart(0), BadChart);
}

TEST(PointFile, ParsesRationalsCommentsAndBlankLines)
{
    const auto pts = points("# nodes\n\n 1/2 : 1 : 0 \n0:1:-1  # second\n+3:0:1\n");
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0].to_string(), "1:2:0");
    EXPECT_EQ(pts[1].to_string(), "0:1:-1");
    EXPECT_EQ(pts[2].to_string(), "1:0:1/3");
}

TEST(PointFile, ReportsTheOffendingLine)
{
    auto line_of = [](const std::string& text, std::optional<std::size_t> nv = std::nullopt) -> std::size_t {
        std::istringstream in(text);
        try {
            parse_points(in, nv);
        } catch (const PointParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("1:0:0\n1:a:0\n"), 2u);
    EXPECT_EQ(line_of("1:0:0\n\n0:0:0\n"), 3u);
    EXPECT_EQ(line_of("1::0\n"), 1u);
    EXPECT_EQ(line_of("1:0:\n"), 1u);
    EXPECT_EQ(line_of("1/0:1:0\n"), 1u);
    EXPECT_EQ(line_of("1:0:0\n1:0\n", 3), 2u);
}

TEST(Certificate, ThreeNodes)
{
    const auto c = certify_condition_A(fixtures::three_nodes(), fixtures::three_nodes_points());
    EXPECT_EQ(c.tau, 3u);
    EXPECT_EQ(c.hessian_ranks, (std::vector<std::size_t>{2, 2, 2}));
    EXPECT_EQ(c.stabilization_window, (std::pair<long, long>{7, 10}));
    EXPECT_EQ(c.rj_dims_on_window, (std::vector<std::size_t>{3, 3, 3, 3}));
}

TEST(Certificate, FourLines)
{
    EXPECT_EQ(certify_condition_A(fixtures::four_lines(), fixtures::four_lines_points()).tau, 6u);
}

TEST(Certificate, SmoothCurveWithEmptyList)
{
    EXPECT_EQ(certify_condition_A(fixtures::fermat_quartic(), {}).tau, 0u);
}

TEST(Certificate, CayleyCubicAndNodalCubic)
{
    EXPECT_EQ(certify_condition_A(fixtures::cayley(), fixtures::cayley_points()).tau, 4u);
    EXPECT_EQ(certify_condition_A(fixtures::nodal_cubic(), fixtures::nodal_cubic_points()).tau, 1u);
}

TEST(Certificate, Failures)
{
    EXPECT_THROW(certify_condition_A(fixtures::three_nodes(), points("1:0:0\n1:1:0\n0:0:1\n")), NotSingular);
    // y^2 z = x^3 has a cusp, not a node, at [0:0:1].
    EXPECT_THROW(certify_condition_A(poly("y^2*z - x^3"), points("0:0:1\n")), Degenerate);
    EXPECT_THROW(certify_condition_A(fixtures::four_lines(), points("0:0:1\n0:1:0\n1:0:0\n0:1:-1\n1:0:-1\n")),
                 IncompleteList);
    // A double conic is singular along a whole curve.
    EXPECT_THROW(certify_condition_A(poly("(x^2 + y^2 - z^2)^2"), {}), NotIsolated);
    EXPECT_THROW(certify_condition_A(fixtures::three_nodes(), points("1:0:0\n2:0:0\n")), DuplicatePoint);
    EXPECT_THROW(certify_condition_A(fixtures::three_nodes(), points("1:0:0:0\n")), CertificationError);
}

TEST(Certificate, HeuristicSearchFindsTextbookNodes)
{
    EXPECT_EQ(search_singular_points(fixtures::four_lines()).size(), 6u);
    auto found = search_singular_points(fixtures::three_nodes());
    auto expected = fixtures::three_nodes_points();
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(found, expected);
    EXPECT_TRUE(search_singular_points(fixtures::fermat_quartic()).empty());
}

TEST(Beta, Examples)
{
    const auto pts = fixtures::three_nodes_points();
    const auto b1 = beta_matrix(pts, 1, 1, 3);
    EXPECT_EQ(b1, ExactMatrix::identity(3));
    const auto b0 = beta_matrix(pts, 1, 0, 3);
    EXPECT_EQ(b0.rows(), 3u);
    EXPECT_EQ(b0.cols(), 1u);
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(b0.at(r, 0), 1);
    const auto b2 = beta_matrix(points("1:0:0\n"), 2, 2, 3);
    EXPECT_EQ(b2.rows(), 3u);
    EXPECT_EQ(b2.cols(), 6u);
    EXPECT_EQ(rank(b2), 3u);
    EXPECT_THROW(beta_matrix(pts, 0, 1, 3), Error);
}

TEST(Beta, RankIsChartIndependent)
{
    const auto pts = points("1:2:3\n1:-1:1/2\n0:1:1\n2:1:1\n");
    for (int i = 1; i <= 3; ++i)
        for (long k = 0; k <= 5; ++k) {
            const auto r = rank(beta_matrix(pts, i, k, 3));
            for (std::size_t c = 0; c < 3; ++c) {
                std::vector<ProjPoint> moved;
                for (const auto& p : pts) moved.push_back(p[c] != 0 ? p.with_chart(c) : p);
                EXPECT_EQ(rank(beta_matrix(moved, i, k, 3)), r) << i << " " << k << " chart " << c;
            }
        }
}

TEST(Defect, Examples)
{
    const auto a = fixtures::three_nodes_points(), b = fixtures::four_lines_points();
    EXPECT_EQ(defect(a, 0, 3), 2u);
    EXPECT_EQ(defect(a, 1, 3), 0u);
    EXPECT_EQ(defect(b, 1, 3), 3u);
    EXPECT_EQ(defect(b, -1, 3), 6u);
}

TEST(Defect, VanishesFromTauMinusOne)
{
    for (const auto& [f, pts] : nodal_inputs()) {
        const auto nv = f.num_vars();
        for (long k = static_cast<long>(pts.size()) - 1; k <= static_cast<long>(pts.size()) + 3; ++k)
            EXPECT_EQ(defect(pts, k, nv), 0u) << f.to_string() << " k=" << k;
    }
}

TEST(Defect, DualToTorsion)
{
    for (const auto& [f, pts] : nodal_inputs()) {
        const KoszulComplex K(f);
        const long top = static_cast<long>(K.n()) * K.d() - K.n() - 1;
        for (long k = 0; k <= top; ++k)
            EXPECT_EQ(K.dim_sN(top - k), defect(pts, k, f.num_vars())) << f.to_string() << " k=" << k;
    }
}

TEST(Defect, DoublePrimeComplementsTorsion)
{
    for (const auto& [f, pts] : nodal_inputs()) {
        const KoszulComplex K(f);
        const long nd = static_cast<long>(K.n()) * K.d();
        for (long k = 0; k <= K.default_k_max(); ++k) {
            const long D = k - K.n() - 1;
            const auto slice = D < 0 ? SubspaceBasis(0) : symbolic_power_slice(pts, 1, D, f.num_vars());
            const auto dims = mprime_dims(K, k, slice);
            EXPECT_EQ(dims.m_double_prime + K.dim_sN(nd - k), pts.size()) << f.to_string() << " k=" << k;
        }
    }
}

TEST(SymbolicPower, Examples)
{
    const auto pts = fixtures::three_nodes_points();
    const auto conics = symbolic_power_slice(pts, 1, 2, 3);
    EXPECT_EQ(conics.dim(), 3u);
    // xy, xz, yz in grlex order are monomials 1, 2, 4 of degree 2.
    EXPECT_EQ(conics, span_of(6, {{{1, 1}}, {{2, 1}}, {{4, 1}}}));
    EXPECT_EQ(symbolic_power_slice(pts, 0, 4, 3).dim(), 15u);
    EXPECT_EQ(symbolic_power_slice(pts, -1, 4, 3).dim(), 15u);
    EXPECT_EQ(symbolic_power_slice(pts, 1, 5, 3).dim(), 18u);
    // Double points at the three coordinate points cut 9 conditions from quartics.
    EXPECT_EQ(symbolic_power_slice(pts, 2, 4, 3).dim(), 6u);
}

TEST(Jacobian, Examples)
{
    const auto f = fixtures::three_nodes();
    EXPECT_EQ(jacobian_slice(f, 3).dim(), 3u);
    EXPECT_EQ(jacobian_slice(f, 6).dim(), 25u);
    EXPECT_EQ(jacobian_slice(f, 2).dim(), 0u);
    EXPECT_EQ(product_with_J(f, SubspaceBasis(dim_R(2, 2)), 2).dim(), 0u);
    EXPECT_EQ(product_with_J(f, symbolic_power_slice({}, 0, 3, 3), 3), jacobian_slice(f, 6));
}

TEST(IdealPower, Examples)
{
    const auto pts = fixtures::three_nodes_points();
    const PointIdeal I(pts, 3);
    EXPECT_EQ(I.generators().size(), 3u);
    EXPECT_EQ(I.power_slice(1, 2), symbolic_power_slice(pts, 1, 2, 3));
    EXPECT_EQ(I.power_slice(0, 3).dim(), 10u);
    EXPECT_EQ(I.power_slice(2, 4).dim(), 6u);
    EXPECT_EQ(ideal_power_slice(pts, 2, 4, 3), I.power_slice(2, 4));
}

TEST(IdealPower, PowersLieInSymbolicPowers)
{
    for (const auto& [f, pts] : nodal_inputs()) {
        const PointIdeal I(pts, f.num_vars());
        for (int a = 1; a <= 3; ++a)
            for (long k = 0; k <= 8; ++k)
                EXPECT_TRUE(contains(symbolic_power_slice(pts, a, k, f.num_vars()), I.power_slice(a, k)))
                    << f.to_string() << " a=" << a << " k=" << k;
    }
}

TEST(Wotzlaw, ThreeNodes)
{
    const auto f = fixtures::three_nodes();
    const auto pts = fixtures::three_nodes_points();
    for (auto v : {WotzlawVariant::powers, WotzlawVariant::symbolic}) {
        EXPECT_EQ(wotzlaw_quotient_dim(f, pts, 0, v), 3u);
        EXPECT_EQ(wotzlaw_quotient_dim(f, pts, 1, v), 0u);
    }
}

TEST(Wotzlaw, NonPositiveExponentIsTheJacobianRing)
{
    // n = 2, m = 1: at q = 0 the numerator exponent is 0 and the quotient is (R/J)_D.
    for (const auto& [f, pts] : nodal_inputs()) {
        if (f.num_vars() != 3) continue;
        const long D = f.degree() - 3;
        const auto expected = dim_R(2, D) - jacobian_slice(f, D).dim();
        EXPECT_EQ(wotzlaw_quotient_dim(f, pts, 0, WotzlawVariant::symbolic), expected);
        EXPECT_EQ(wotzlaw_quotient_dim(f, pts, 0, WotzlawVariant::powers), expected);
    }
}

TEST(Wotzlaw, WrongPointsViolateContainment)
{
    EXPECT_THROW(
        wotzlaw_quotient_dim(fixtures::three_nodes(), fixtures::four_lines_points(), 1, WotzlawVariant::symbolic),
        ContainmentViolated);
}
