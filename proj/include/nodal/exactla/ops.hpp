#ifndef NODAL_EXACTLA_OPS_HPP
#define NODAL_EXACTLA_OPS_HPP

#include <nodal/exactla/echelon.hpp>

#include <optional>
#include <string>

namespace nodal {

/// Modular rank certification failed within the prime budget.
class ModularUncertified : public Error {
public:
    using Error::Error;
};

class AmbientMismatch : public Error {
public:
    using Error::Error;
};

/// Column order used by echelon-based routines.
enum class PivotOrder { sparsest, natural, reversed };

/// Pivot data of a row echelon form of the rows of a matrix.
struct EchelonProfile {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;  // ascending
    std::vector<std::size_t> pivot_rows;  // source rows, ascending
    std::uint32_t prime = 0;              // 0 when computed over Q
};

namespace detail {

inline ColumnOrder make_order(PivotOrder kind, const std::vector<std::size_t>& counts)
{
    switch (kind) {
    case PivotOrder::natural: return ColumnOrder::natural(counts.size());
    case PivotOrder::reversed: return ColumnOrder::reversed(counts.size());
    case PivotOrder::sparsest: break;
    }
    return ColumnOrder::sparsest_first(counts);
}

template <class Echelon>
EchelonProfile profile_of(const Echelon& e, std::uint32_t prime)
{
    EchelonProfile p;
    p.rank = e.rank();
    p.prime = prime;
    for (const auto& r : e.pivot_rows()) {
        p.pivot_cols.push_back(r.cols.front());
        p.pivot_rows.push_back(r.source);
    }
    std::sort(p.pivot_cols.begin(), p.pivot_cols.end());
    std::sort(p.pivot_rows.begin(), p.pivot_rows.end());
    return p;
}

inline IntegerEchelon integer_echelon(const ExactMatrix& m, PivotOrder order = PivotOrder::sparsest)
{
    auto rows = integer_rows(m);
    IntegerEchelon e(m.cols(), IntegerArith{}, make_order(order, column_counts(rows, m.cols())));
    for (auto r : sparsest_rows_first(rows)) e.insert(rows[r], r);
    return e;
}

inline ModularEchelon modular_echelon(const std::vector<std::vector<std::pair<std::size_t, Integer>>>& rows,
                                      std::size_t cols, std::uint32_t p, PivotOrder order = PivotOrder::sparsest)
{
    auto mrows = modular_rows(rows, p);
    ModularEchelon e(cols, ModularArith{p}, make_order(order, column_counts(mrows, cols)));
    for (auto r : sparsest_rows_first(mrows)) e.insert(mrows[r], r);
    return e;
}

inline EchelonProfile prime_field_profile(const ExactMatrix& m, PivotOrder order)
{
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> rows(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& e : m.row(r)) rows[r].emplace_back(e.col, reduce_mod(e.value, m.field().prime));
    ModularEchelon e(m.cols(), ModularArith{m.field().prime}, make_order(order, column_counts(rows, m.cols())));
    for (auto r : sparsest_rows_first(rows)) e.insert(rows[r], r);
    return profile_of(e, m.field().prime);
}

/// Certified multi-modular profile: the largest rank seen must recur on
/// `mode.primes` distinct primes before the budget runs out. A rank can only
/// drop modulo p, so the recurring maximum equals the rational rank except
/// with negligible probability.
inline EchelonProfile modular_profile(const ExactMatrix& m, const ArithmeticMode& mode, PivotOrder order)
{
    auto rows = integer_rows(m);
    PrimeStream primes(mode.seed);
    EchelonProfile best;
    unsigned hits = 0;
    for (unsigned drawn = 0; drawn < std::max(mode.prime_budget, mode.primes); ++drawn) {
        const auto p = primes.next();
        auto prof = profile_of(modular_echelon(rows, m.cols(), p, order), p);
        if (drawn == 0 || prof.rank > best.rank) {
            best = std::move(prof);
            hits = 1;
        } else if (prof.rank == best.rank) {
            ++hits;
        }
        if (hits >= mode.primes) return best;
    }
    throw ModularUncertified("modular rank not certified after " + std::to_string(mode.prime_budget) +
                             " primes; increase the prime budget or use rational mode");
}

} // namespace detail

/// Rank and pivot profile of the rows of `m`. Prime-field matrices are
/// eliminated over their field; rational ones fraction-free over Z or, in
/// modular mode, modulo certified primes.
inline EchelonProfile echelon_profile(const ExactMatrix& m, const ArithmeticMode& mode = {},
                                      PivotOrder order = PivotOrder::sparsest)
{
    if (m.field().is_prime()) return detail::prime_field_profile(m, order);
    if (mode.is_modular()) return detail::modular_profile(m, mode, order);
    return detail::profile_of(detail::integer_echelon(m, order), 0);
}

inline std::size_t rank(const ExactMatrix& m, const ArithmeticMode& mode = {})
{
    if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) return 0;
    if (m.rows() > m.cols()) return echelon_profile(m.transpose(), mode).rank;
    return echelon_profile(m, mode).rank;
}

/// Reduced echelon basis of the span of `vectors` (each of length ambient).
inline SubspaceBasis span_of(std::size_t ambient, const std::vector<SparseVector>& vectors)
{
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < vectors.size(); ++r)
        for (const auto& [c, v] : vectors[r]) {
            if (c >= ambient) throw AmbientMismatch("vector coordinate outside ambient space");
            t.push_back({r, c, v});
        }
    auto m = ExactMatrix::from_triplets(vectors.size(), ambient, std::move(t));
    auto e = detail::integer_echelon(m, PivotOrder::natural);
    return SubspaceBasis::from_reduced(ambient, detail::reduce_to_rref(e));
}

inline SubspaceBasis row_space(const ExactMatrix& m)
{
    auto e = detail::integer_echelon(m, PivotOrder::natural);
    return SubspaceBasis::from_reduced(m.cols(), detail::reduce_to_rref(e));
}

/// Reduced echelon basis of the null space {x : m x = 0}.
inline SubspaceBasis kernel_basis(const ExactMatrix& m, const ArithmeticMode& mode = {})
{
    if (m.field().is_prime()) throw Error("kernel_basis is defined for rational matrices");
    std::optional<std::size_t> probe;
    if (mode.is_modular() && m.rows() > 0) probe = rank(m, mode);
    auto e = detail::integer_echelon(m);
    auto rref = detail::reduce_to_rref(e);
    if (probe && *probe != rref.size())
        throw ModularUncertified("modular rank " + std::to_string(*probe) + " disagrees with exact rank " +
                                 std::to_string(rref.size()));
    // Rows are reduced but sorted by index, so the pivot is the unique entry
    // sitting in a pivot column, not necessarily the first one.
    std::vector<char> is_pivot(m.cols(), 0);
    for (const auto& r : e.pivot_rows()) is_pivot[r.cols.front()] = 1;
    std::vector<SparseVector> by_free(m.cols());
    for (const auto& r : rref) {
        std::size_t piv = 0;
        for (const auto& [c, x] : r)
            if (is_pivot[c]) piv = c;
        for (const auto& [c, x] : r)
            if (!is_pivot[c]) by_free[c].emplace_back(piv, -x);
    }
    std::vector<SparseVector> kernel;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        SparseVector v = std::move(by_free[f]);
        v.emplace_back(f, Rational(1));
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        kernel.push_back(std::move(v));
    }
    return span_of(m.cols(), kernel);
}

/// dim(span a ∩ span b) = dim a + dim b - dim(span a + span b).
inline std::size_t intersection_dim(const SubspaceBasis& a, const SubspaceBasis& b)
{
    if (a.ambient_dim() != b.ambient_dim())
        throw AmbientMismatch("intersection_dim: ambient dimensions " + std::to_string(a.ambient_dim()) + " and " +
                              std::to_string(b.ambient_dim()));
    std::vector<SparseVector> all = a.vectors();
    all.insert(all.end(), b.vectors().begin(), b.vectors().end());
    return a.dim() + b.dim() - span_of(a.ambient_dim(), all).dim();
}

/// Residue of v modulo span(basis): v minus its component along the basis,
/// supported off the basis pivots. Zero iff v lies in the span.
inline SparseVector reduce_modulo(const SparseVector& v, const SubspaceBasis& basis)
{
    std::vector<Rational> dense(basis.ambient_dim());
    for (const auto& [i, x] : v) dense[i] = x;
    for (const auto& b : basis.vectors()) {
        const Rational c = dense[b.front().first];
        if (c == 0) continue;
        for (const auto& [i, x] : b) dense[i] -= c * x;
    }
    SparseVector out;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0) out.emplace_back(i, dense[i]);
    return out;
}

inline bool contains(const SubspaceBasis& big, const SubspaceBasis& small)
{
    if (big.ambient_dim() != small.ambient_dim()) throw AmbientMismatch("contains: ambient dimensions differ");
    for (const auto& v : small.vectors())
        if (!reduce_modulo(v, big).empty()) return false;
    return true;
}

/// Some x with m x = rhs, or nullopt when rhs is outside the image of m.
/// Free variables are set to zero; `order` selects the pivot columns.
inline std::optional<std::vector<Rational>> solve_particular(const ExactMatrix& m, std::span<const Rational> rhs,
                                                             PivotOrder order = PivotOrder::sparsest)
{
    if (rhs.size() != m.rows()) throw Error("solve_particular: rhs length does not match row count");
    if (m.field().is_prime()) throw Error("solve_particular is defined for rational matrices");
    const std::size_t n = m.cols();
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (const auto& e : m.row(r)) t.push_back({r, e.col, e.value});
        if (rhs[r] != 0) t.push_back({r, n, rhs[r]});
    }
    auto aug = ExactMatrix::from_triplets(m.rows(), n + 1, std::move(t));
    auto rows = detail::integer_rows(aug);
    auto counts = detail::column_counts(rows, n + 1);
    counts.pop_back();
    auto base = detail::make_order(order, counts);
    auto seq = base.column_at;
    seq.push_back(n);
    detail::IntegerEchelon e(n + 1, detail::IntegerArith{}, detail::ColumnOrder::from_sequence(std::move(seq)));
    for (auto r : detail::sparsest_rows_first(rows)) e.insert(rows[r], r);
    const auto& prs = e.pivot_rows();
    for (const auto& pr : prs)
        if (pr.cols.front() == n) return std::nullopt;
    std::vector<std::size_t> idx(prs.size());
    std::iota(idx.begin(), idx.end(), 0);
    const auto& pos = e.order().position;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return pos[prs[a].cols.front()] > pos[prs[b].cols.front()]; });
    std::vector<Rational> x(n);
    for (auto i : idx) {
        const auto& pr = prs[i];
        Rational s = 0;
        for (std::size_t j = 1; j < pr.cols.size(); ++j) {
            const auto c = pr.cols[j];
            if (c == n)
                s += Rational(pr.vals[j]);
            else if (x[c] != 0)
                s -= Rational(pr.vals[j]) * x[c];
        }
        x[pr.cols.front()] = s / Rational(pr.vals.front());
    }
    return x;
}

} // namespace nodal

#endif // NODAL_EXACTLA_OPS_HPP
