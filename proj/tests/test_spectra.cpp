#include "common.hpp"

#include <nodal/spectra.hpp>

#include <gtest/gtest.h>

using namespace nodal;

namespace {

using Coeffs = std::vector<long long>;

Coeffs coeffs(const Spectrum& s, long from, long to)
{
    Coeffs out;
    for (long k = from; k <= to; ++k) out.push_back(s.at(k));
    return out;
}

// Certificate, complex, ideal and suite data kept alive together.
struct Computed {
    HomPoly f;
    std::optional<OdpCertificate> cert;
    KoszulComplex K;
    PointIdeal ideal;
    SuiteData data;

    Computed(HomPoly poly, std::vector<ProjPoint> pts, unsigned threads = 1)
        : f(poly), cert(certify_condition_A(poly, pts)), K(poly), ideal(cert->points, poly.num_vars()),
          data(assemble_suite_data(K, *cert, ideal, K.default_k_max(), {WotzlawVariant::powers, WotzlawVariant::symbolic},
                                   threads))
    {
    }
};

DimTable torsion(const KoszulComplex& K)
{
    DimTable t;
    for (long k = 0; k <= K.default_k_max(); ++k) t[k] = K.dim_sN(k);
    return t;
}

} // namespace

TEST(Gamma, Examples)
{
    const auto g = gamma_coeffs(2, 4);
    Coeffs row;
    for (long k = 1; k <= 10; ++k) row.push_back(gamma_at(g, k));
    EXPECT_EQ(row, (Coeffs{0, 0, 1, 3, 6, 7, 6, 3, 1, 0}));
    EXPECT_EQ(gamma_coeffs(0, 2), (std::map<long, long long>{{1, 1}}));
    const auto h = gamma_coeffs(3, 3);
    for (long k = 0; k <= 12; ++k) EXPECT_EQ(gamma_at(h, k), gamma_at(h, 12 - k));
    EXPECT_EQ(h.begin()->first, 4);
    EXPECT_EQ(h.rbegin()->first, 8);
}

TEST(Branches, ExactHalfIntegerBoundaries)
{
    // n = 2, d = 4: low up to k = 4, middle for 5..8, high after.
    EXPECT_EQ(branch_of(4, 2, 4), Branch::low);
    EXPECT_EQ(branch_of(5, 2, 4), Branch::middle);
    EXPECT_EQ(branch_of(8, 2, 4), Branch::middle);
    EXPECT_EQ(branch_of(9, 2, 4), Branch::high);
    // n = 3, d = 3: nd/2 = 4.5.
    EXPECT_EQ(branch_of(4, 3, 3), Branch::low);
    EXPECT_EQ(branch_of(5, 3, 3), Branch::middle);
    EXPECT_EQ(branch_of(7, 3, 3), Branch::middle);
    EXPECT_EQ(branch_of(8, 3, 3), Branch::high);
}

TEST(SpectrumValue, ArithmeticAndFormat)
{
    Spectrum a(4), b(4);
    a.add(5, 2);
    a.add(8, -3);
    b.add(5, -2);
    EXPECT_EQ((a + b).at(5), 0);
    EXPECT_EQ((a + b).mult().count(5), 0u);
    EXPECT_EQ((a - b).at(5), 4);
    EXPECT_EQ(a.total(), -1);
    EXPECT_EQ(a.to_string(), "5/4: 2\n8/4: -3\n");
    EXPECT_THROW(a + Spectrum(3), Error);
}

TEST(PoleSpectrum, ThreeNodes)
{
    const auto f = fixtures::three_nodes();
    const auto cert = certify_condition_A(f, fixtures::three_nodes_points());
    const KoszulComplex K(f);
    EXPECT_EQ(coeffs(sp_pole_thm3(2, 4, cert, torsion(K)), 3, 9), (Coeffs{1, 3, 4, 4, 3, 0, 0}));
    EXPECT_EQ(sp_pole_direct(K.page(2, 0, K.default_k_max()), 4), sp_pole_thm3(2, 4, cert, torsion(K)));
}

TEST(PoleSpectrum, FourLines)
{
    const auto f = fixtures::four_lines();
    const auto cert = certify_condition_A(f, fixtures::four_lines_points());
    const KoszulComplex K(f);
    EXPECT_EQ(coeffs(sp_pole_thm3(2, 4, cert, torsion(K)), 3, 9), (Coeffs{1, 3, 1, 1, 0, -3, 0}));
    EXPECT_EQ(sp_pole_direct(K.page(2, 0, K.default_k_max()), 4), sp_pole_thm3(2, 4, cert, torsion(K)));
}

TEST(PoleSpectrum, FermatIsGamma)
{
    const auto f = fixtures::fermat_quartic();
    const auto cert = certify_condition_A(f, {});
    const KoszulComplex K(f);
    Spectrum g(4);
    for (const auto& [k, v] : gamma_coeffs(2, 4)) g.add(k, v);
    EXPECT_EQ(sp_pole_thm3(2, 4, cert, torsion(K)), g);
    EXPECT_EQ(sp_pole_direct(K.page(2, 0, K.default_k_max()), 4), g);
    EXPECT_EQ(sp_steenbrink_thm4(2, 4, cert), g);
}

TEST(PoleSpectrum, NeedsCertificateAndWindow)
{
    const KoszulComplex K(fixtures::three_nodes());
    EXPECT_THROW(sp_pole_thm3(2, 4, std::nullopt, torsion(K)), ConditionAViolated);
    EXPECT_THROW(sp_steenbrink_thm4(2, 4, std::nullopt), ConditionAViolated);
    const auto cert = certify_condition_A(fixtures::three_nodes(), fixtures::three_nodes_points());
    DimTable short_window;
    for (long k = 0; k <= 8; ++k) short_window[k] = K.dim_sN(k);
    EXPECT_THROW(sp_pole_thm3(2, 4, cert, short_window), WindowTooSmall);
}

TEST(PoleSpectrum, DirectRefusesNonDegenerateSecondPage)
{
    const KoszulComplex K(fixtures::poly("x^5 + x^2*y^2*z + y^4*z"));
    EXPECT_THROW(sp_pole_direct(K.page(2, 0, K.default_k_max()), 5), DegenerationFailed);
    SpectralPage fake;
    fake.r = 2;
    fake.k_min = 0;
    fake.k_max = 1;
    fake.d_matrices[1] = ExactMatrix::identity(1);
    EXPECT_THROW(sp_pole_direct(fake, 4), DegenerationFailed);
    fake.r = 1;
    EXPECT_THROW(sp_pole_direct(fake, 4), Error);
}

TEST(SteenbrinkSpectrum, Examples)
{
    const auto a = certify_condition_A(fixtures::three_nodes(), fixtures::three_nodes_points());
    const auto b = certify_condition_A(fixtures::four_lines(), fixtures::four_lines_points());
    EXPECT_EQ(coeffs(sp_steenbrink_thm4(2, 4, a), 3, 9), (Coeffs{1, 3, 3, 4, 3, 0, 1}));
    EXPECT_EQ(coeffs(sp_steenbrink_thm4(2, 4, b), 3, 9), (Coeffs{1, 3, 0, 1, 0, -3, 1}));
}

TEST(RefinedSpectra, Examples)
{
    const auto f = fixtures::four_lines();
    const auto cert = certify_condition_A(f, fixtures::four_lines_points());
    const KoszulComplex K(f);
    const auto r = refined_spectra(2, 4, cert, torsion(K));
    EXPECT_EQ(r.sp1.mult(), (std::map<long, Spectrum::Mult>{{8, 3}}));
    EXPECT_EQ(r.sp_pole1, r.sp1);
    EXPECT_EQ(r.sp0, sp_steenbrink_thm4(2, 4, cert) + r.sp1);
    EXPECT_EQ(r.sp_pole0, sp_pole_thm3(2, 4, cert, torsion(K)) + r.sp_pole1);

    const KoszulComplex a(fixtures::three_nodes());
    EXPECT_TRUE(refined_spectra(2, 4, certify_condition_A(a.poly(), fixtures::three_nodes_points()), torsion(a))
                    .sp1.empty());
    const KoszulComplex fermat(fixtures::fermat_quartic());
    EXPECT_TRUE(refined_spectra(2, 4, certify_condition_A(fermat.poly(), {}), torsion(fermat)).sp1.empty());
}

TEST(RefinedSpectra, HodgeDimensionsOfTheExamples)
{
    const auto f = fixtures::four_lines();
    const auto cert = certify_condition_A(f, fixtures::four_lines_points());
    const KoszulComplex K(f);
    const auto r = refined_spectra(2, 4, cert, torsion(K));
    EXPECT_EQ(hodge_dimension(r, 0, 4), 3);
    EXPECT_EQ(hodge_dimension(r, 1, 4), 0);
    EXPECT_EQ(hodge_dimension(r, 2, 4), 0);
}

TEST(SpectraDifference, MatchesTheTableRows)
{
    // Sp - Sp_P read off the two table rows: -1 at k = 5, +1 at k = 9, for both examples.
    for (const auto& [f, pts] : {std::pair{fixtures::three_nodes(), fixtures::three_nodes_points()},
                                 std::pair{fixtures::four_lines(), fixtures::four_lines_points()}}) {
        const auto cert = certify_condition_A(f, pts);
        const KoszulComplex K(f);
        const auto diff = sp_steenbrink_thm4(2, 4, cert) - sp_pole_thm3(2, 4, cert, torsion(K));
        EXPECT_EQ(diff.mult(), (std::map<long, Spectrum::Mult>{{5, -1}, {9, 1}})) << f.to_string();
        EXPECT_EQ(spectra_difference_from_increments(2, 4, torsion(K)), diff);
    }
}

TEST(SpectraDifference, MassAndSymmetry)
{
    for (const auto& [f, pts] : {std::pair{fixtures::three_nodes(), fixtures::three_nodes_points()},
                                 std::pair{fixtures::four_lines(), fixtures::four_lines_points()},
                                 std::pair{fixtures::cayley(), fixtures::cayley_points()},
                                 std::pair{fixtures::nodal_cubic(), fixtures::nodal_cubic_points()}}) {
        const auto cert = certify_condition_A(f, pts);
        const int n = static_cast<int>(f.num_vars()) - 1, d = f.degree();
        const auto sp = sp_steenbrink_thm4(n, d, cert);
        long long gamma_total = 0;
        for (const auto& [k, v] : gamma_coeffs(n, d)) gamma_total += v;
        EXPECT_EQ(sp.total(), gamma_total - static_cast<long long>(cert.tau) * d);
        const long top = static_cast<long>(n + 1) * d;
        for (long k = 1; k < top; ++k) {
            if (2 * k == static_cast<long>(n) * d || 2 * k == static_cast<long>(n + 2) * d) continue;
            EXPECT_EQ(sp.at(k), sp.at(top - k)) << f.to_string() << " k=" << k;
        }
        if (n * d % 2 == 0) {
            EXPECT_EQ(sp.at(static_cast<long>(n + 2) * d / 2),
                      sp.at(static_cast<long>(n) * d / 2) - static_cast<long long>(cert.tau));
        }
        for (const auto& [k, v] : sp.mult()) {
            EXPECT_GT(k, 0);
            EXPECT_LE(k, top);
        }
    }
}

TEST(WotzlawRange, ProvenCases)
{
    EXPECT_TRUE(wotzlaw_proven(2, 4, 0, WotzlawVariant::symbolic));
    EXPECT_TRUE(wotzlaw_proven(2, 4, 2, WotzlawVariant::symbolic));
    EXPECT_TRUE(wotzlaw_proven(2, 4, 1, WotzlawVariant::powers));
    EXPECT_FALSE(wotzlaw_proven(2, 4, 2, WotzlawVariant::powers));
    // n = 3, m = 1: open for 1 < q < 1 + [d/2].
    EXPECT_TRUE(wotzlaw_proven(3, 3, 1, WotzlawVariant::symbolic));
    EXPECT_FALSE(wotzlaw_proven(3, 4, 2, WotzlawVariant::symbolic));
    EXPECT_TRUE(wotzlaw_proven(3, 4, 3, WotzlawVariant::symbolic));
    EXPECT_TRUE(wotzlaw_proven(3, 3, 2, WotzlawVariant::symbolic));
}

TEST(IdentitySuite, AllChecksPassOnNodalInputs)
{
    for (const auto& [f, pts] : {std::pair{fixtures::three_nodes(), fixtures::three_nodes_points()},
                                 std::pair{fixtures::four_lines(), fixtures::four_lines_points()},
                                 std::pair{fixtures::fermat_quartic(), std::vector<ProjPoint>{}},
                                 std::pair{fixtures::nodal_cubic(), fixtures::nodal_cubic_points()},
                                 std::pair{fixtures::cayley(), fixtures::cayley_points()}}) {
        const Computed run(f, pts);
        const auto report = identity_suite(run.data);
        EXPECT_TRUE(report.all_pass()) << f.to_string();
        ASSERT_EQ(report.checks.size(), identity_check_names().size());
        for (std::size_t i = 0; i < report.checks.size(); ++i) {
            EXPECT_EQ(report.checks[i].name, identity_check_names()[i]);
            EXPECT_NE(report.checks[i].status, CheckStatus::fail)
                << f.to_string() << " " << report.checks[i].name << ": " << report.checks[i].detail;
        }
        EXPECT_EQ(run.data.sp_pole, run.data.sp_pole_direct) << f.to_string();
    }
}

TEST(IdentitySuite, WotzlawMatchesHodgeDimensions)
{
    const Computed run(fixtures::cayley(), fixtures::cayley_points());
    EXPECT_EQ(run.data.wotzlaw.at({WotzlawVariant::symbolic, 0}), 0u);
    EXPECT_EQ(run.data.wotzlaw.at({WotzlawVariant::symbolic, 1}), 2u);
    EXPECT_EQ(run.data.wotzlaw.at({WotzlawVariant::symbolic, 2}), 0u);
    EXPECT_EQ(run.data.wotzlaw.at({WotzlawVariant::symbolic, 3}), 0u);
    for (int q = 0; q <= 3; ++q)
        EXPECT_EQ(static_cast<long long>(run.data.wotzlaw.at({WotzlawVariant::symbolic, q})),
                  hodge_dimension(run.data.refined, q, 3));
}

TEST(IdentitySuite, SelectedChecksOnly)
{
    const Computed run(fixtures::three_nodes(), fixtures::three_nodes_points());
    const auto report = identity_suite(run.data, {"euler_characteristic", "spectrum_symmetry"});
    ASSERT_EQ(report.checks.size(), 2u);
    EXPECT_NE(report.find("euler_characteristic"), nullptr);
    EXPECT_EQ(report.find("defect_duality"), nullptr);
}

TEST(IdentitySuite, FailuresAreReportedWithWitnesses)
{
    Computed run(fixtures::three_nodes(), fixtures::three_nodes_points());
    run.data.sN[6] += 1;
    const auto report = identity_suite(run.data);
    EXPECT_FALSE(report.all_pass());
    const auto* euler = report.find("euler_characteristic");
    ASSERT_NE(euler, nullptr);
    EXPECT_EQ(euler->status, CheckStatus::fail);
    EXPECT_EQ(euler->witnesses, (std::vector<long>{10}));
}

TEST(IdentitySuite, IndependentOfThreadCount)
{
    const Computed one(fixtures::four_lines(), fixtures::four_lines_points(), 1);
    const Computed three(fixtures::four_lines(), fixtures::four_lines_points(), 3);
    EXPECT_EQ(one.data.sN, three.data.sN);
    EXPECT_EQ(one.data.M2, three.data.M2);
    EXPECT_EQ(one.data.sp_pole_direct, three.data.sp_pole_direct);
    EXPECT_EQ(one.data.wotzlaw, three.data.wotzlaw);
}
