#ifndef NODAL_SPECTRA_HPP
#define NODAL_SPECTRA_HPP

#include <nodal/koszul.hpp>
#include <nodal/singular.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nodal {

class ConditionAViolated : public Error {
public:
    using Error::Error;
};
class DegenerationFailed : public Error {
public:
    using Error::Error;
};
class WindowTooSmall : public Error {
public:
    using Error::Error;
};

/// Σ mult[k] t^{k/d}, stored in integer k-units so that every comparison is
/// an integer comparison. Zero multiplicities are never stored.
class Spectrum {
public:
    using Mult = long long;

    Spectrum() = default;
    explicit Spectrum(int denom) : denom_(denom) {}

    int denom() const { return denom_; }
    const std::map<long, Mult>& mult() const { return mult_; }
    bool empty() const { return mult_.empty(); }

    Mult at(long k) const
    {
        auto it = mult_.find(k);
        return it == mult_.end() ? 0 : it->second;
    }

    void add(long k, Mult m)
    {
        if (m == 0) return;
        auto& v = mult_[k];
        v += m;
        if (v == 0) mult_.erase(k);
    }

    Mult total() const
    {
        Mult s = 0;
        for (const auto& [k, m] : mult_) s += m;
        return s;
    }

    friend Spectrum operator+(Spectrum a, const Spectrum& b)
    {
        a.require_same(b);
        for (const auto& [k, m] : b.mult_) a.add(k, m);
        return a;
    }
    friend Spectrum operator-(Spectrum a, const Spectrum& b)
    {
        a.require_same(b);
        for (const auto& [k, m] : b.mult_) a.add(k, -m);
        return a;
    }
    friend bool operator==(const Spectrum&, const Spectrum&) = default;

    /// Canonical text: one `k/d: multiplicity` line per nonzero term, by k.
    std::string to_string() const
    {
        std::string s;
        for (const auto& [k, m] : mult_)
            s += std::to_string(k) + "/" + std::to_string(denom_) + ": " + std::to_string(m) + "\n";
        return s;
    }

private:
    void require_same(const Spectrum& b) const
    {
        if (b.denom_ != denom_) throw Error("spectra with different denominators");
    }

    int denom_ = 1;
    std::map<long, Mult> mult_;
};

/// Coefficients of (t + ... + t^{d-1})^{n+1}.
inline std::map<long, long long> gamma_coeffs(int n, int d)
{
    std::map<long, long long> poly{{0, 1}};
    for (int f = 0; f <= n; ++f) {
        std::map<long, long long> next;
        for (const auto& [k, c] : poly)
            for (int e = 1; e <= d - 1; ++e) next[k + e] += c;
        poly = std::move(next);
    }
    std::erase_if(poly, [](const auto& kv) { return kv.second == 0; });
    return poly;
}

inline long long gamma_at(const std::map<long, long long>& g, long k)
{
    auto it = g.find(k);
    return it == g.end() ? 0 : it->second;
}

/// Where k/d sits relative to n/2 and n/2 + 1, compared as 2k against nd.
enum class Branch { low, middle, high };

inline Branch branch_of(long k, int n, int d)
{
    const long twice = 2 * k;
    if (twice <= static_cast<long>(n) * d) return Branch::low;
    if (twice <= static_cast<long>(n) * d + 2L * d) return Branch::middle;
    return Branch::high;
}

using DimTable = std::map<long, std::size_t>;

inline long long table_at(const DimTable& t, long k)
{
    auto it = t.find(k);
    return it == t.end() ? 0 : static_cast<long long>(it->second);
}

namespace detail {

inline const OdpCertificate& require_certificate(const std::optional<OdpCertificate>& cert)
{
    if (!cert) throw ConditionAViolated("no certificate for condition (A)");
    return *cert;
}

/// The window must reach the top of the spectrum and the point where
/// dim sN_k has stabilized at τ, or spectra would be truncated.
inline long checked_top(const DimTable& sN, int n, int d, std::size_t tau)
{
    if (sN.empty()) throw WindowTooSmall("no sN dimensions supplied");
    const long top = sN.rbegin()->first;
    if (top < static_cast<long>(n + 1) * d)
        throw WindowTooSmall("degree window ends at " + std::to_string(top) + ", below (n+1)d");
    if (table_at(sN, top - d) != static_cast<long long>(tau))
        throw WindowTooSmall("dim sN has not reached τ by degree " + std::to_string(top - d));
    return top;
}

} // namespace detail

/// Pole order spectrum from the closed formula in γ and dim sN.
inline Spectrum sp_pole_thm3(int n, int d, const std::optional<OdpCertificate>& cert, const DimTable& sN)
{
    const auto& c = detail::require_certificate(cert);
    const long top = detail::checked_top(sN, n, d, c.tau);
    const auto g = gamma_coeffs(n, d);
    Spectrum s(d);
    for (long k = 1; k <= top; ++k) {
        switch (branch_of(k, n, d)) {
        case Branch::low: s.add(k, gamma_at(g, k)); break;
        case Branch::middle: s.add(k, gamma_at(g, k) - table_at(sN, k)); break;
        case Branch::high: s.add(k, gamma_at(g, k) - (table_at(sN, k) - table_at(sN, k - d))); break;
        }
    }
    return s;
}

/// Pole order spectrum read off page 2: dim M^(2)_k - dim sN^(2)_{k-d}.
/// Requires every stored d^(2) to vanish.
inline Spectrum sp_pole_direct(const SpectralPage& page2, int d)
{
    if (page2.r != 2) throw Error("sp_pole_direct needs page 2");
    for (const auto& [k, m] : page2.d_matrices)
        if (!m.is_zero()) throw DegenerationFailed("d^(2) is nonzero in degree " + std::to_string(k));
    Spectrum s(d);
    for (long k = std::max(page2.k_min, 1L); k <= page2.k_max; ++k)
        s.add(k, static_cast<long long>(page2.M(k)) - static_cast<long long>(page2.sN(k - d)));
    return s;
}

/// Steenbrink spectrum: γ_k, lowered by τ on the middle window.
inline Spectrum sp_steenbrink_thm4(int n, int d, const std::optional<OdpCertificate>& cert)
{
    const auto& c = detail::require_certificate(cert);
    const auto g = gamma_coeffs(n, d);
    Spectrum s(d);
    for (long k = 1; k <= static_cast<long>(n + 1) * d; ++k) {
        long long v = gamma_at(g, k);
        if (branch_of(k, n, d) == Branch::middle) v -= static_cast<long long>(c.tau);
        s.add(k, v);
    }
    return s;
}

struct RefinedSpectra {
    Spectrum sp0, sp1, sp_pole0, sp_pole1;
};

/// Sp^1 = Sp_P^1 = (dim sN_{nd/2}) t^{n/2+1} for nd even, else 0.
inline RefinedSpectra refined_spectra(int n, int d, const std::optional<OdpCertificate>& cert, const DimTable& sN)
{
    RefinedSpectra r;
    r.sp1 = Spectrum(d);
    if ((static_cast<long>(n) * d) % 2 == 0) {
        const long k0 = static_cast<long>(n) * d / 2;
        r.sp1.add(k0 + d, table_at(sN, k0));
    }
    r.sp_pole1 = r.sp1;
    r.sp0 = sp_steenbrink_thm4(n, d, cert) + r.sp1;
    r.sp_pole0 = sp_pole_thm3(n, d, cert, sN) + r.sp_pole1;
    return r;
}

/// Right-hand side of the Sp - Sp_P relation: each increment of dim sN past
/// the middle window moves mass from k - p(k) d up to k.
inline Spectrum spectra_difference_from_increments(int n, int d, const DimTable& sN)
{
    Spectrum s(d);
    if (sN.empty()) return s;
    for (long k = 1; k <= sN.rbegin()->first; ++k) {
        if (branch_of(k, n, d) != Branch::high) continue;
        const long long inc = table_at(sN, k) - table_at(sN, k - d);
        if (inc == 0) continue;
        long p = 1;
        while (branch_of(k - p * d, n, d) == Branch::high) ++p;
        s.add(k, inc);
        s.add(k - p * d, -inc);
    }
    return s;
}

/// Hodge number n^0_{f,q+1}: the side the quotient of the Wotzlaw
/// conjectures is compared against.
inline long long hodge_dimension(const RefinedSpectra& r, int q, int d)
{
    return r.sp0.at(static_cast<long>(q + 1) * d);
}

/// Proven range for each variant: symbolic powers everywhere except n odd
/// with m < q < m + [d/2]; true powers only for q <= m.
inline bool wotzlaw_proven(int n, int d, int q, WotzlawVariant v)
{
    const int m = n / 2;
    if (v == WotzlawVariant::powers) return q <= m;
    return !(n % 2 == 1 && m < q && q < m + d / 2);
}

enum class CheckStatus { pass, fail, not_applicable };

inline const char* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "n/a";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::vector<long> witnesses;  // degrees (or q values) where the check failed
    std::string detail;
};

struct IdentityReport {
    std::vector<CheckResult> checks;

    bool all_pass() const
    {
        return std::none_of(checks.begin(), checks.end(),
                            [](const CheckResult& c) { return c.status == CheckStatus::fail; });
    }
    const CheckResult* find(const std::string& name) const
    {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

/// Everything the identity suite looks at, computed once.
struct SuiteData {
    const KoszulComplex* K = nullptr;
    OdpCertificate cert;
    const PointIdeal* ideal = nullptr;
    long k_max = 0;
    DimTable sN, M, sN2, M2, m_double_prime, m_prime;
    SpectralPage page1, page2;
    Spectrum sp, sp_pole, sp_pole_direct;
    RefinedSpectra refined;
    /// Wotzlaw quotient dimensions per variant and q.
    std::map<std::pair<WotzlawVariant, int>, std::size_t> wotzlaw;
};

/// Computes pages, spectra and quotient dimensions over [0, k_max]. The
/// complex and ideal must outlive the result.
inline SuiteData assemble_suite_data(const KoszulComplex& K, OdpCertificate cert, const PointIdeal& ideal, long k_max,
                                     const std::vector<WotzlawVariant>& variants = {WotzlawVariant::powers,
                                                                                    WotzlawVariant::symbolic},
                                     unsigned threads = 1)
{
    SuiteData s;
    s.K = &K;
    s.ideal = &ideal;
    s.k_max = k_max;
    s.cert = std::move(cert);
    const int n = K.n(), d = K.d();
    s.page1 = K.page(1, 0, k_max, threads);
    s.page2 = K.page(2, 0, k_max, threads);
    for (long k = 0; k <= k_max; ++k) {
        s.sN[k] = s.page1.sN(k);
        s.M[k] = s.page1.M(k);
        s.sN2[k] = s.page2.sN(k);
        s.M2[k] = s.page2.M(k);
        const long D = k - n - 1;
        const auto slice = D < 0 ? SubspaceBasis(0) : symbolic_power_slice(s.cert.points, 1, D, K.num_vars());
        const auto dims = mprime_dims(K, k, slice);
        s.m_prime[k] = dims.m_prime;
        s.m_double_prime[k] = dims.m_double_prime;
    }
    const std::optional<OdpCertificate> c = s.cert;
    s.sp = sp_steenbrink_thm4(n, d, c);
    s.sp_pole = sp_pole_thm3(n, d, c, s.sN);
    s.sp_pole_direct = sp_pole_direct(s.page2, d);
    s.refined = refined_spectra(n, d, c, s.sN);
    for (auto v : variants)
        for (int q = 0; q <= n; ++q) s.wotzlaw[{v, q}] = wotzlaw_quotient_dim(K.poly(), ideal, q, v);
    return s;
}

inline const std::vector<std::string>& identity_check_names()
{
    static const std::vector<std::string> names = {
        "euler_characteristic",     "defect_duality",          "reduced_quotient_complement",
        "reduced_quotient_top",     "low_degree_vanishing",    "sN_monotone",
        "koszul_exactness",         "jacobian_quotient",       "e2_degeneration",
        "middle_differential",      "page2_off_middle",        "page2_middle",
        "torsion_injectivity",      "pole_formula_vs_direct",  "spectra_difference",
        "spectrum_symmetry",        "middle_shift",            "torsion_bound",
        "hodge_pole_comparison",    "spectrum_mass",           "finite_support",
        "defect_vanishing",         "surjectivity_criterion",  "wotzlaw_proven_range",
    };
    return names;
}

namespace detail {

class CheckRecorder {
public:
    CheckRecorder(IdentityReport& r, const std::set<std::string>& enabled) : report_(r), enabled_(enabled) {}

    /// Runs `body`, which returns failing witnesses, if `name` is enabled.
    void run(const std::string& name, const std::function<std::vector<long>()>& body, bool applicable = true,
             std::string note = {})
    {
        if (!enabled_.empty() && !enabled_.count(name)) return;
        CheckResult c;
        c.name = name;
        c.detail = std::move(note);
        if (!applicable) {
            c.status = CheckStatus::not_applicable;
        } else {
            try {
                c.witnesses = body();
                c.status = c.witnesses.empty() ? CheckStatus::pass : CheckStatus::fail;
            } catch (const std::exception& e) {
                c.status = CheckStatus::fail;
                c.detail = e.what();
            }
        }
        report_.checks.push_back(std::move(c));
    }

private:
    IdentityReport& report_;
    const std::set<std::string>& enabled_;
};

} // namespace detail

/// Runs the enabled consistency checks (all when `enabled` is empty).
/// Failures are recorded with witness degrees, never thrown.
inline IdentityReport identity_suite(const SuiteData& s, const std::set<std::string>& enabled = {})
{
    const KoszulComplex& K = *s.K;
    const int n = K.n(), d = K.d();
    const long nd = static_cast<long>(n) * d;
    const long long tau = static_cast<long long>(s.cert.tau);
    const auto nv = K.num_vars();
    const auto g = gamma_coeffs(n, d);
    const bool nd_even = nd % 2 == 0;
    const long k0 = nd / 2;
    IdentityReport report;
    detail::CheckRecorder rec(report, enabled);
    auto at = [](const DimTable& t, long k) { return table_at(t, k); };

    rec.run("euler_characteristic", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= s.k_max; ++k)
            if (at(s.M, k) - at(s.sN, k - d) != gamma_at(g, k)) bad.push_back(k);
        return bad;
    });
    rec.run("defect_duality", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= nd - n - 1; ++k)
            if (at(s.sN, nd - n - 1 - k) != static_cast<long long>(defect(s.cert.points, k, nv))) bad.push_back(k);
        return bad;
    });
    rec.run("reduced_quotient_complement", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= s.k_max; ++k)
            if (at(s.m_double_prime, k) + at(s.sN, nd - k) != tau) bad.push_back(k);
        return bad;
    });
    rec.run("reduced_quotient_top", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= s.k_max; ++k)
            if (2 * k > nd && at(s.m_double_prime, k) != tau) bad.push_back(k);
        return bad;
    });
    rec.run("low_degree_vanishing", [&] {
        std::vector<long> bad;
        for (long k = 0; 2 * k < nd; ++k)
            if (at(s.sN, k) != 0) bad.push_back(k);
        return bad;
    });
    rec.run("sN_monotone", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= s.k_max; ++k)
            if (at(s.sN, k) < at(s.sN, k - 1) || at(s.sN, k) > tau) bad.push_back(k);
        return bad;
    });
    rec.run("koszul_exactness", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= nd; ++k)
            for (int j = 0; j < n; ++j)
                if (K.dim_cohomology(j, k) != 0) {
                    bad.push_back(k);
                    break;
                }
        return bad;
    });
    rec.run("jacobian_quotient", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= s.k_max; ++k)
            if (!check_M_is_RmodJ(K, k)) bad.push_back(k);
        return bad;
    });
    rec.run("e2_degeneration", [&] {
        std::vector<long> bad;
        for (const auto& [k, m] : s.page2.d_matrices)
            if (!m.is_zero()) bad.push_back(k);
        return bad;
    });
    rec.run(
        "middle_differential",
        [&] {
            std::vector<long> bad;
            if (!K.d1_matrix(k0).is_zero() || at(s.sN2, k0) != at(s.sN, k0)) bad.push_back(k0);
            return bad;
        },
        nd_even);
    rec.run("page2_off_middle", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= s.k_max; ++k) {
            if (nd_even && k == k0) continue;
            if (at(s.M2, k) != at(s.M, k) - at(s.sN, k) || at(s.sN2, k) != 0) bad.push_back(k);
        }
        return bad;
    });
    rec.run(
        "page2_middle",
        [&] {
            std::vector<long> bad;
            if (at(s.M2, k0) != gamma_at(g, k0) || at(s.sN2, k0 - d) != 0) bad.push_back(k0);
            return bad;
        },
        nd_even);
    rec.run("torsion_injectivity", [&] {
        std::vector<long> bad;
        for (long k = 1; k <= s.k_max; ++k) {
            const long D = k - n - 1;
            if (D < 0) continue;
            const auto& quot = K.M_coordinates(k);
            const auto slice = symbolic_power_slice(s.cert.points, 1, D, nv);
            std::vector<SparseVector> torsion;
            for (const auto& v : slice.vectors()) torsion.push_back(quot.coordinates(v));
            const auto& d1 = K.d1_matrix(k);
            std::vector<SparseVector> image(d1.cols());
            for (std::size_t r = 0; r < d1.rows(); ++r)
                for (const auto& e : d1.row(r)) image[e.col].emplace_back(r, e.value);
            if (intersection_dim(span_of(quot.dim(), image), span_of(quot.dim(), torsion)) != 0) bad.push_back(k);
        }
        return bad;
    });
    rec.run("pole_formula_vs_direct", [&] {
        std::vector<long> bad;
        for (long k = 0; k <= s.k_max; ++k)
            if (s.sp_pole.at(k) != s.sp_pole_direct.at(k)) bad.push_back(k);
        return bad;
    });
    rec.run("spectra_difference", [&] {
        std::vector<long> bad;
        const auto lhs = s.sp - s.sp_pole;
        const auto rhs = spectra_difference_from_increments(n, d, s.sN);
        for (long k = 0; k <= s.k_max; ++k)
            if (lhs.at(k) != rhs.at(k)) bad.push_back(k);
        return bad;
    });
    rec.run("spectrum_symmetry", [&] {
        std::vector<long> bad;
        for (long k = 1; k < static_cast<long>(n + 1) * d; ++k) {
            if (2 * k == nd || 2 * k == nd + 2L * d) continue;
            if (s.sp.at(k) != s.sp.at(static_cast<long>(n + 1) * d - k)) bad.push_back(k);
        }
        return bad;
    });
    rec.run(
        "middle_shift",
        [&] {
            std::vector<long> bad;
            if (s.sp.at(k0 + d) != s.sp.at(k0) - tau) bad.push_back(k0 + d);
            return bad;
        },
        nd_even);
    rec.run("torsion_bound", [&] {
        std::vector<long> bad;
        for (long k = 1; k <= s.k_max; ++k) {
            const long long mp = at(s.m_prime, k), h = s.refined.sp0.at(k);
            if (mp > h || (branch_of(k, n, d) == Branch::middle && mp != h)) bad.push_back(k);
        }
        return bad;
    });
    rec.run("hodge_pole_comparison", [&] {
        std::vector<long> bad;
        for (const auto& [F, P] : {std::pair{&s.refined.sp0, &s.refined.sp_pole0},
                                   std::pair{&s.refined.sp1, &s.refined.sp_pole1}}) {
            for (long k = 1; k <= s.k_max; ++k) {
                bool prefix_equal = true;
                for (long j = k - d; j >= 1 && prefix_equal; j -= d) prefix_equal = F->at(j) == P->at(j);
                if (prefix_equal && F->at(k) > P->at(k)) bad.push_back(k);
            }
        }
        return bad;
    });
    rec.run("spectrum_mass", [&] {
        std::vector<long> bad;
        long long gsum = 0;
        for (const auto& [k, c] : g) gsum += c;
        if (s.sp.total() != gsum - tau * d) bad.push_back(0);
        return bad;
    });
    rec.run("finite_support", [&] {
        std::vector<long> bad;
        for (long k = static_cast<long>(n + 1) * d + 1; k <= s.k_max; ++k)
            if (s.sp_pole.at(k) != 0 || s.sp_pole_direct.at(k) != 0 || s.sp.at(k) != 0) bad.push_back(k);
        return bad;
    });
    rec.run("defect_vanishing", [&] {
        std::vector<long> bad;
        for (long k = std::max(tau - 1, 0LL); k <= std::max(tau - 1, 0LL) + n + 1; ++k)
            if (defect(s.cert.points, k, nv) != 0) bad.push_back(k);
        return bad;
    });
    rec.run("surjectivity_criterion", [&] {
        // For q in (m, n] with p = n - q: def_{m(d-1)-p} = 0 exactly when
        // sN_{(n-m)d+m-q-1} = 0, and both hold whenever n is even or
        // q >= m + [d/2].
        std::vector<long> bad;
        const int m = n / 2;
        for (int q = m + 1; q <= n; ++q) {
            const long kdef = static_cast<long>(m) * (d - 1) - (n - q);
            const long ksn = static_cast<long>(n - m) * d + m - q - 1;
            const bool surjective = defect(s.cert.points, kdef, nv) == 0;
            const bool vanishes = at(s.sN, ksn) == 0;
            const bool guaranteed = n % 2 == 0 || q >= m + d / 2;
            if (surjective != vanishes || (guaranteed && !surjective)) bad.push_back(q);
        }
        return bad;
    });
    rec.run(
        "wotzlaw_proven_range",
        [&] {
            std::vector<long> bad;
            for (const auto& [key, dim] : s.wotzlaw) {
                const auto [variant, q] = key;
                if (!wotzlaw_proven(n, d, q, variant)) continue;
                if (static_cast<long long>(dim) != hodge_dimension(s.refined, q, d)) bad.push_back(q);
            }
            return bad;
        },
        !s.wotzlaw.empty());
    return report;
}

} // namespace nodal

#endif // NODAL_SPECTRA_HPP
