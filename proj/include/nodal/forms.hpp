#ifndef NODAL_FORMS_HPP
#define NODAL_FORMS_HPP

#include <nodal/exactla/matrix.hpp>
#include <nodal/polyring.hpp>

#include <map>
#include <vector>

namespace nodal {

/// Basis of the graded piece Omega^j_k of polynomial forms on C^{n+1}, with
/// deg x_i = deg dx_i = 1: pairs (monomial of degree k-j, dx_S with |S| = j).
/// Wedge sets run in lex order; within one wedge set monomials run in grlex.
class FormSliceBasis {
public:
    FormSliceBasis(std::size_t num_vars, int j, long k) : j_(j), k_(k), monomials_(num_vars, k - j)
    {
        if (j < 0 || static_cast<std::size_t>(j) > num_vars) return;
        std::vector<int> s;
        subsets(num_vars, static_cast<std::size_t>(j), 0, s);
        for (std::size_t i = 0; i < wedges_.size(); ++i) wedge_index_.emplace(wedges_[i], i);
    }

    int form_degree() const { return j_; }
    long degree() const { return k_; }
    std::size_t num_vars() const { return monomials_.num_vars(); }
    std::size_t size() const { return wedges_.size() * monomials_.size(); }
    const std::vector<std::vector<int>>& wedges() const { return wedges_; }
    const MonomialBasis& monomials() const { return monomials_; }

    std::size_t index(std::size_t wedge, std::size_t monomial) const { return wedge * monomials_.size() + monomial; }
    std::size_t wedge_index(const std::vector<int>& s) const { return wedge_index_.at(s); }
    std::size_t wedge_of(std::size_t idx) const { return idx / monomials_.size(); }
    const Exponent& monomial_of(std::size_t idx) const { return monomials_[idx % monomials_.size()]; }

private:
    void subsets(std::size_t n, std::size_t j, int start, std::vector<int>& cur)
    {
        if (cur.size() == j) {
            wedges_.push_back(cur);
            return;
        }
        for (int i = start; i < static_cast<int>(n); ++i) {
            cur.push_back(i);
            subsets(n, j, i + 1, cur);
            cur.pop_back();
        }
    }

    int j_;
    long k_;
    MonomialBasis monomials_;
    std::vector<std::vector<int>> wedges_;
    std::map<std::vector<int>, std::size_t> wedge_index_;
};

namespace detail {

/// dx_i ∧ dx_S = sign · dx_{S ∪ {i}} with the wedge sorted: (-1)^{#{s in S : s < i}}.
inline int wedge_sign(const std::vector<int>& s, int i)
{
    int below = 0;
    for (int v : s) below += v < i;
    return (below % 2) ? -1 : 1;
}

inline std::vector<int> wedge_insert(const std::vector<int>& s, int i)
{
    std::vector<int> t = s;
    t.insert(std::upper_bound(t.begin(), t.end(), i), i);
    return t;
}

} // namespace detail

/// Matrix of g ∧ - : Omega^j_k -> Omega^{j+1}_{k+deg g + 1} for the 1-form
/// g = sum_i g_i dx_i (all g_i homogeneous of the same degree).
inline ExactMatrix one_form_wedge_matrix(const std::vector<HomPoly>& coeffs, int j, long k)
{
    const std::size_t nv = coeffs.size();
    const int e = coeffs.front().degree();
    FormSliceBasis src(nv, j, k);
    FormSliceBasis dst(nv, j + 1, k + e + 1);
    std::vector<Triplet> t;
    if (src.size() == 0 || dst.size() == 0) return ExactMatrix(dst.size(), src.size());
    Exponent prod(nv);
    for (std::size_t w = 0; w < src.wedges().size(); ++w) {
        const auto& s = src.wedges()[w];
        for (int i = 0; i < static_cast<int>(nv); ++i) {
            if (std::binary_search(s.begin(), s.end(), i)) continue;
            const int sign = detail::wedge_sign(s, i);
            const std::size_t tw = dst.wedge_index(detail::wedge_insert(s, i));
            for (std::size_t m = 0; m < src.monomials().size(); ++m) {
                const auto& mono = src.monomials()[m];
                for (const auto& [a, c] : coeffs[static_cast<std::size_t>(i)].terms()) {
                    for (std::size_t v = 0; v < nv; ++v) prod[v] = mono[v] + a[v];
                    t.push_back({dst.index(tw, dst.monomials().index_of(prod)), src.index(w, m), sign * c});
                }
            }
        }
    }
    return ExactMatrix::from_triplets(dst.size(), src.size(), std::move(t));
}

/// Exterior derivative d : Omega^j_k -> Omega^{j+1}_k.
inline ExactMatrix de_rham_matrix(std::size_t num_vars, int j, long k)
{
    FormSliceBasis src(num_vars, j, k);
    FormSliceBasis dst(num_vars, j + 1, k);
    std::vector<Triplet> t;
    if (src.size() == 0 || dst.size() == 0) return ExactMatrix(dst.size(), src.size());
    Exponent lower(num_vars);
    for (std::size_t w = 0; w < src.wedges().size(); ++w) {
        const auto& s = src.wedges()[w];
        for (int i = 0; i < static_cast<int>(num_vars); ++i) {
            if (std::binary_search(s.begin(), s.end(), i)) continue;
            const int sign = detail::wedge_sign(s, i);
            const std::size_t tw = dst.wedge_index(detail::wedge_insert(s, i));
            for (std::size_t m = 0; m < src.monomials().size(); ++m) {
                const auto& mono = src.monomials()[m];
                if (mono[static_cast<std::size_t>(i)] == 0) continue;
                lower = mono;
                --lower[static_cast<std::size_t>(i)];
                t.push_back({dst.index(tw, dst.monomials().index_of(lower)), src.index(w, m),
                             Rational(sign * mono[static_cast<std::size_t>(i)])});
            }
        }
    }
    return ExactMatrix::from_triplets(dst.size(), src.size(), std::move(t));
}

} // namespace nodal

#endif // NODAL_FORMS_HPP
