// Independent reference implementations used only by the tests. Nothing
// here calls into the library's elimination or form-basis code.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<mpq_class>>;

/// Rank by single-step fraction-free (Bareiss) elimination over Z.
inline std::size_t bareiss_rank(const Dense& a, std::size_t cols)
{
    const std::size_t rows = a.size();
    std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        mpz_class l = 1;
        for (const auto& v : a[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
        for (std::size_t c = 0; c < cols; ++c) m[r][c] = l / a[r][c].get_den() * a[r][c].get_num();
    }
    mpz_class prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_class t = m[rank][c] * m[r][j] - m[r][c] * m[rank][j];
                mpz_divexact(m[r][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return rank;
}

inline std::size_t bareiss_rank(const Dense& a) { return a.empty() ? 0 : bareiss_rank(a, a.front().size()); }

/// Rank by plain Gaussian elimination over Q, the textbook way.
inline std::size_t gauss_rank(Dense m)
{
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            const mpq_class factor = m[r][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j) m[r][j] -= factor * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

/// Dense matrix with entries in [-range, range], zero with probability 1 - density.
inline Dense random_dense(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range, double density)
{
    std::uniform_int_distribution<int> val(-range, range);
    std::bernoulli_distribution keep(density);
    Dense m(rows, std::vector<mpq_class>(cols));
    for (auto& row : m)
        for (auto& v : row)
            if (keep(rng)) v = val(rng);
    return m;
}

/// Product of random factors, so that rank deficiency is common.
inline Dense random_low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t inner)
{
    const auto a = random_dense(rng, rows, inner, 3, 0.7), b = random_dense(rng, inner, cols, 3, 0.7);
    Dense m(rows, std::vector<mpq_class>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < inner; ++i)
            if (a[r][i] != 0)
                for (std::size_t c = 0; c < cols; ++c) m[r][c] += a[r][i] * b[i][c];
    return m;
}

/// Exponent vectors of total degree k in n+1 variables, any fixed order.
inline std::vector<std::vector<int>> monomials(int vars, long k)
{
    std::vector<std::vector<int>> out;
    if (k < 0) return out;
    std::vector<int> e(vars, 0);
    auto rec = [&](auto& self, int pos, long rem) -> void {
        if (pos == vars - 1) {
            e[pos] = static_cast<int>(rem);
            out.push_back(e);
            return;
        }
        for (long a = 0; a <= rem; ++a) {
            e[pos] = static_cast<int>(a);
            self(self, pos + 1, rem - a);
        }
    };
    rec(rec, 0, k);
    return out;
}

using Terms = std::vector<std::pair<std::vector<int>, mpq_class>>;

/// Dense matrix of df∧ : Omega^j_k -> Omega^{j+1}_{k+d}, forms indexed by
/// (wedge bitmask, monomial). Signs follow dx_i ∧ dx_S; ranks do not care.
inline Dense koszul_dense(const Terms& f, int vars, int j, long k)
{
    int d = 0;
    for (auto v : f.front().first) d += v;
    auto masks = [&](int size) {
        std::vector<unsigned> out;
        for (unsigned m = 0; m < (1u << vars); ++m)
            if (__builtin_popcount(m) == size) out.push_back(m);
        return out;
    };
    const auto src_masks = masks(j), dst_masks = masks(j + 1);
    const auto src_monos = monomials(vars, k - j), dst_monos = monomials(vars, k + d - j - 1);
    std::map<std::pair<unsigned, std::vector<int>>, std::size_t> dst_index;
    for (auto m : dst_masks)
        for (const auto& e : dst_monos) dst_index.emplace(std::pair{m, e}, dst_index.size());
    const std::size_t cols = src_masks.size() * src_monos.size();
    Dense out(dst_index.size(), std::vector<mpq_class>(cols));
    std::size_t col = 0;
    for (auto m : src_masks)
        for (const auto& e : src_monos) {
            for (int i = 0; i < vars; ++i) {
                if (m & (1u << i)) continue;
                const int below = __builtin_popcount(m & ((1u << i) - 1));
                const int sign = below % 2 ? -1 : 1;
                for (const auto& [a, c] : f) {
                    if (a[i] == 0) continue;
                    std::vector<int> prod = e;
                    for (int v = 0; v < vars; ++v) prod[v] += a[v];
                    --prod[i];
                    out[dst_index.at({m | (1u << i), prod})][col] += sign * c * a[i];
                }
            }
            ++col;
        }
    return out;
}

inline std::size_t koszul_rank(const Terms& f, int vars, int j, long k)
{
    if (j < 0 || j >= vars) return 0;
    const auto m = koszul_dense(f, vars, j, k);
    if (m.empty() || m.front().empty()) return 0;
    return bareiss_rank(m);
}

inline std::size_t omega_dim(int vars, int j, long k)
{
    if (j < 0 || j > vars) return 0;
    std::size_t wedges = 0;
    for (unsigned m = 0; m < (1u << vars); ++m) wedges += __builtin_popcount(m) == j;
    return wedges * monomials(vars, k - j).size();
}

inline std::size_t dim_M(const Terms& f, int vars, long k)
{
    int d = 0;
    for (auto v : f.front().first) d += v;
    return omega_dim(vars, vars, k) - koszul_rank(f, vars, vars - 1, k - d);
}

inline std::size_t dim_sN(const Terms& f, int vars, long k)
{
    int d = 0;
    for (auto v : f.front().first) d += v;
    return omega_dim(vars, vars - 1, k) - koszul_rank(f, vars, vars - 1, k) - koszul_rank(f, vars, vars - 2, k - d);
}

/// Random homogeneous polynomial with small integer coefficients; sparse
/// when `density` < 1.
inline Terms random_poly(std::mt19937_64& rng, int vars, int d, double density)
{
    std::uniform_int_distribution<int> coef(-3, 3);
    std::bernoulli_distribution keep(density);
    Terms t;
    while (t.empty())
        for (const auto& e : monomials(vars, d))
            if (keep(rng)) {
                const int c = coef(rng);
                if (c != 0) t.emplace_back(e, mpq_class(c));
            }
    return t;
}

} // namespace oracle
