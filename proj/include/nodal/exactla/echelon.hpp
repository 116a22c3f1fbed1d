#ifndef NODAL_EXACTLA_ECHELON_HPP
#define NODAL_EXACTLA_ECHELON_HPP

#include <nodal/exactla/matrix.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <vector>

namespace nodal::detail {

/// Elimination order on columns: position[c] is the rank of column c.
struct ColumnOrder {
    std::vector<std::size_t> position;
    std::vector<std::size_t> column_at;

    static ColumnOrder from_sequence(std::vector<std::size_t> seq)
    {
        ColumnOrder o;
        o.position.assign(seq.size(), 0);
        for (std::size_t i = 0; i < seq.size(); ++i) o.position[seq[i]] = i;
        o.column_at = std::move(seq);
        return o;
    }
    static ColumnOrder natural(std::size_t n)
    {
        std::vector<std::size_t> s(n);
        std::iota(s.begin(), s.end(), 0);
        return from_sequence(std::move(s));
    }
    static ColumnOrder reversed(std::size_t n)
    {
        std::vector<std::size_t> s(n);
        std::iota(s.rbegin(), s.rend(), 0);
        return from_sequence(std::move(s));
    }
    /// Markowitz-style static order: sparsest columns first, ties by index.
    static ColumnOrder sparsest_first(const std::vector<std::size_t>& counts)
    {
        std::vector<std::size_t> s(counts.size());
        std::iota(s.begin(), s.end(), 0);
        std::stable_sort(s.begin(), s.end(), [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });
        return from_sequence(std::move(s));
    }
    std::size_t size() const { return position.size(); }
};

struct ModularArith {
    using Value = std::uint64_t;
    std::uint32_t p;
};

struct IntegerArith {
    using Value = Integer;
};

/// Incremental sparse row echelon form. Rows are inserted one at a time and
/// fully reduced against the current pivots in column-order; a nonzero residue
/// becomes a new pivot row whose pivot is its first column in that order.
/// Modular pivot rows are monic; integer pivot rows are primitive with a
/// positive pivot (fraction-free: only integer multiples are ever formed).
template <class Arith>
class SparseEchelon {
public:
    using Value = typename Arith::Value;

    struct PivotRow {
        std::size_t source;
        std::vector<std::size_t> cols;  // cols.front() is the pivot, rest in column-order
        std::vector<Value> vals;
    };

    SparseEchelon(std::size_t cols, Arith arith, ColumnOrder order)
        : arith_(arith), order_(std::move(order)), pivot_of_(cols, -1), acc_(cols), queued_(cols, 0)
    {
        if (order_.size() != cols) throw Error("column order size mismatch");
    }

    std::size_t cols() const { return pivot_of_.size(); }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<PivotRow>& pivot_rows() const { return rows_; }
    const ColumnOrder& order() const { return order_; }
    std::ptrdiff_t pivot_row_of(std::size_t col) const { return pivot_of_[col]; }

    /// Returns true iff the row was independent of everything inserted before.
    template <class Range>
    bool insert(const Range& row, std::size_t source)
    {
        for (const auto& [c, v] : row) {
            if (is_zero(v)) continue;
            acc_[c] = v;
            touch(c);
        }
        std::vector<std::size_t> residue;
        while (!heap_.empty()) {
            const std::size_t pos = heap_.top();
            heap_.pop();
            const std::size_t c = order_.column_at[pos];
            queued_[c] = 0;
            if (is_zero(acc_[c])) continue;
            if (pivot_of_[c] >= 0) {
                eliminate(c, rows_[static_cast<std::size_t>(pivot_of_[c])]);
            } else {
                residue.push_back(c);
            }
        }
        bool independent = !residue.empty();
        if (independent) {
            PivotRow pr;
            pr.source = source;
            pr.cols = residue;
            pr.vals.reserve(residue.size());
            for (auto c : residue) pr.vals.push_back(acc_[c]);
            normalize(pr);
            pivot_of_[pr.cols.front()] = static_cast<std::ptrdiff_t>(rows_.size());
            rows_.push_back(std::move(pr));
        }
        for (auto c : touched_) acc_[c] = Value(0);
        touched_.clear();
        return independent;
    }

private:
    bool is_zero(const Value& v) const { return v == 0; }

    void touch(std::size_t c)
    {
        if (!queued_[c]) {
            queued_[c] = 1;
            heap_.push(order_.position[c]);
            touched_.push_back(c);
        }
    }

    void eliminate(std::size_t c, const PivotRow& p)
    {
        if constexpr (std::is_same_v<Arith, ModularArith>) {
            const std::uint64_t mod = arith_.p;
            const std::uint64_t factor = mod - acc_[c];  // pivot value is 1
            acc_[c] = 0;
            for (std::size_t i = 1; i < p.cols.size(); ++i) {
                const auto c2 = p.cols[i];
                acc_[c2] = (acc_[c2] + factor * p.vals[i]) % mod;
                touch(c2);
            }
        } else {
            const Integer& b = p.vals.front();
            Integer g;
            mpz_gcd(g.get_mpz_t(), acc_[c].get_mpz_t(), b.get_mpz_t());
            Integer scale_acc = b / g;
            Integer scale_piv = acc_[c] / g;
            if (scale_acc != 1) {
                for (auto t : touched_)
                    if (acc_[t] != 0) acc_[t] *= scale_acc;
            }
            acc_[c] = 0;
            for (std::size_t i = 1; i < p.cols.size(); ++i) {
                const auto c2 = p.cols[i];
                mpz_submul(acc_[c2].get_mpz_t(), scale_piv.get_mpz_t(), p.vals[i].get_mpz_t());
                touch(c2);
            }
        }
    }

    void normalize(PivotRow& pr) const
    {
        if constexpr (std::is_same_v<Arith, ModularArith>) {
            const std::uint64_t inv = inv_mod(static_cast<std::uint32_t>(pr.vals.front()), arith_.p);
            for (auto& v : pr.vals) v = v * inv % arith_.p;
        } else {
            Integer g = 0;
            for (const auto& v : pr.vals) {
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
                if (g == 1) break;
            }
            if (pr.vals.front() < 0) g = -g;
            if (g != 1)
                for (auto& v : pr.vals) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        }
    }

    Arith arith_;
    ColumnOrder order_;
    std::vector<std::ptrdiff_t> pivot_of_;
    std::vector<PivotRow> rows_;
    std::vector<Value> acc_;
    std::vector<char> queued_;
    std::vector<std::size_t> touched_;
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> heap_;
};

using ModularEchelon = SparseEchelon<ModularArith>;
using IntegerEchelon = SparseEchelon<IntegerArith>;

/// Rows of a rational matrix scaled by the lcm of their denominators.
inline std::vector<std::vector<std::pair<std::size_t, Integer>>> integer_rows(const ExactMatrix& m)
{
    std::vector<std::vector<std::pair<std::size_t, Integer>>> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Integer l = 1;
        for (const auto& e : m.row(r)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.value.get_den_mpz_t());
        out[r].reserve(m.row(r).size());
        for (const auto& e : m.row(r)) {
            Integer v = l / Integer(e.value.get_den());
            v *= Integer(e.value.get_num());
            out[r].emplace_back(e.col, std::move(v));
        }
    }
    return out;
}

inline std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> modular_rows(
    const std::vector<std::vector<std::pair<std::size_t, Integer>>>& rows, std::uint32_t p)
{
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out[r].reserve(rows[r].size());
        for (const auto& [c, v] : rows[r]) {
            auto x = reduce_mod(v, p);
            if (x) out[r].emplace_back(c, x);
        }
    }
    return out;
}

/// Row insertion order: sparsest rows first, ties by index.
template <class Rows>
std::vector<std::size_t> sparsest_rows_first(const Rows& rows)
{
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rows[a].size() < rows[b].size(); });
    return idx;
}

template <class Rows>
std::vector<std::size_t> column_counts(const Rows& rows, std::size_t cols)
{
    std::vector<std::size_t> counts(cols, 0);
    for (const auto& r : rows)
        for (const auto& e : r) ++counts[e.first];
    return counts;
}

/// Reduced echelon rows (pivot coefficient 1, zero at every other pivot
/// column) obtained from an echelon by back substitution over Q. Rows come
/// out sorted by pivot column; entries within a row by column index, so the
/// pivot is the first entry only under the natural column order.
template <class Echelon>
std::vector<SparseVector> reduce_to_rref(const Echelon& e)
{
    const auto& rows = e.pivot_rows();
    const auto& order = e.order();
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return order.position[rows[a].cols.front()] > order.position[rows[b].cols.front()];
    });
    const std::size_t n = e.cols();
    std::vector<SparseVector> reduced(rows.size());
    std::vector<Rational> acc(n);
    std::vector<char> live(n, 0);
    std::vector<std::size_t> touched;
    auto to_rational = [](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Integer>)
            return Rational(v);
        else
            return Rational(static_cast<unsigned long>(v));
    };
    for (auto ri : idx) {
        const auto& pr = rows[ri];
        for (std::size_t i = 1; i < pr.cols.size(); ++i) {
            const auto c = pr.cols[i];
            const auto pj = e.pivot_row_of(c);
            if (pj >= 0) {
                const Rational coef = to_rational(pr.vals[i]);
                for (const auto& [c2, v2] : reduced[static_cast<std::size_t>(pj)]) {
                    if (c2 == c) continue;
                    if (!live[c2]) {
                        live[c2] = 1;
                        touched.push_back(c2);
                    }
                    acc[c2] -= coef * v2;
                }
            } else {
                if (!live[c]) {
                    live[c] = 1;
                    touched.push_back(c);
                }
                acc[c] += to_rational(pr.vals[i]);
            }
        }
        const Rational lead = to_rational(pr.vals.front());
        std::sort(touched.begin(), touched.end());
        SparseVector out;
        out.emplace_back(pr.cols.front(), Rational(1));
        for (auto c : touched) {
            if (acc[c] != 0) out.emplace_back(c, acc[c] / lead);
            acc[c] = 0;
            live[c] = 0;
        }
        touched.clear();
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        reduced[ri] = std::move(out);
    }
    std::vector<std::size_t> by_pivot(rows.size());
    std::iota(by_pivot.begin(), by_pivot.end(), 0);
    std::sort(by_pivot.begin(), by_pivot.end(),
              [&](std::size_t a, std::size_t b) { return rows[a].cols.front() < rows[b].cols.front(); });
    std::vector<SparseVector> out;
    out.reserve(rows.size());
    for (auto i : by_pivot) out.push_back(std::move(reduced[i]));
    return out;
}

} // namespace nodal::detail

#endif // NODAL_EXACTLA_ECHELON_HPP
