#ifndef NODAL_EXACTLA_MATRIX_HPP
#define NODAL_EXACTLA_MATRIX_HPP

#include <nodal/exactla/field.hpp>

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace nodal {

/// Sparse coordinate vector: (index, nonzero value) pairs sorted by index.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

struct Triplet {
    std::size_t row;
    std::size_t col;
    Rational value;
};

/// Immutable sparse matrix over Q or F_p, stored row-compressed.
/// Only nonzero entries are stored; in prime mode values lie in [0, p).
class ExactMatrix {
public:
    struct Entry {
        std::size_t col;
        Rational value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols, FieldTag field = FieldTag::rationals())
        : rows_(rows), cols_(cols), field_(field), row_start_(rows + 1, 0)
    {
    }

    /// Duplicate (row, col) pairs are summed; zero sums are dropped.
    static ExactMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets,
                                     FieldTag field = FieldTag::rationals())
    {
        std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        ExactMatrix m(rows, cols, field);
        std::size_t i = 0;
        std::vector<std::size_t> counts(rows, 0);
        while (i < triplets.size()) {
            const auto r = triplets[i].row;
            const auto c = triplets[i].col;
            if (r >= rows || c >= cols) throw Error("triplet index out of range");
            Rational sum = 0;
            for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) sum += triplets[i].value;
            if (field.is_prime()) sum = detail::reduce_mod(sum, field.prime);
            if (sum != 0) {
                m.entries_.push_back({c, std::move(sum)});
                ++counts[r];
            }
        }
        for (std::size_t r = 0; r < rows; ++r) m.row_start_[r + 1] = m.row_start_[r] + counts[r];
        return m;
    }

    static ExactMatrix from_dense(const std::vector<std::vector<Rational>>& dense, std::size_t cols = 0,
                                  FieldTag field = FieldTag::rationals())
    {
        if (!dense.empty()) cols = dense.front().size();
        std::vector<Triplet> t;
        for (std::size_t r = 0; r < dense.size(); ++r) {
            if (dense[r].size() != cols) throw Error("ragged dense matrix");
            for (std::size_t c = 0; c < cols; ++c)
                if (dense[r][c] != 0) t.push_back({r, c, dense[r][c]});
        }
        return from_triplets(dense.size(), cols, std::move(t), field);
    }

    static ExactMatrix identity(std::size_t n, FieldTag field = FieldTag::rationals())
    {
        std::vector<Triplet> t;
        for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1});
        return from_triplets(n, n, std::move(t), field);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }
    FieldTag field() const { return field_; }
    bool is_zero() const { return entries_.empty(); }

    std::span<const Entry> row(std::size_t r) const
    {
        return {entries_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
    }

    Rational at(std::size_t r, std::size_t c) const
    {
        auto rr = row(r);
        auto it = std::lower_bound(rr.begin(), rr.end(), c, [](const Entry& e, std::size_t v) { return e.col < v; });
        return (it != rr.end() && it->col == c) ? it->value : Rational(0);
    }

    ExactMatrix transpose() const
    {
        std::vector<Triplet> t;
        t.reserve(nnz());
        for (std::size_t r = 0; r < rows_; ++r)
            for (const auto& e : row(r)) t.push_back({e.col, r, e.value});
        return from_triplets(cols_, rows_, std::move(t), field_);
    }

    /// Columns listed in `keep`, in that order.
    ExactMatrix select_columns(std::span<const std::size_t> keep) const
    {
        std::vector<std::ptrdiff_t> where(cols_, -1);
        for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = static_cast<std::ptrdiff_t>(i);
        std::vector<Triplet> t;
        for (std::size_t r = 0; r < rows_; ++r)
            for (const auto& e : row(r))
                if (where[e.col] >= 0) t.push_back({r, static_cast<std::size_t>(where[e.col]), e.value});
        return from_triplets(rows_, keep.size(), std::move(t), field_);
    }

    std::vector<Rational> apply(std::span<const Rational> x) const
    {
        if (x.size() != cols_) throw Error("apply: vector length does not match column count");
        std::vector<Rational> y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            Rational s = 0;
            for (const auto& e : row(r)) s += e.value * x[e.col];
            if (field_.is_prime()) s = detail::reduce_mod(s, field_.prime);
            y[r] = std::move(s);
        }
        return y;
    }

    std::vector<std::vector<Rational>> to_dense() const
    {
        std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols_));
        for (std::size_t r = 0; r < rows_; ++r)
            for (const auto& e : row(r)) d[r][e.col] = e.value;
        return d;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.row_start_ == b.row_start_ &&
               a.entries_ == b.entries_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    FieldTag field_{};
    std::vector<std::size_t> row_start_{0};
    std::vector<Entry> entries_;
};

/// A subspace of Q^ambient_dim held as its unique reduced row echelon basis:
/// each vector's first nonzero coordinate is 1 and every other basis vector
/// vanishes there. Two values describe the same subspace iff they compare equal.
class SubspaceBasis {
public:
    SubspaceBasis() = default;
    explicit SubspaceBasis(std::size_t ambient_dim) : ambient_(ambient_dim) {}

    /// Wraps vectors already in reduced echelon form. Use span_of() otherwise.
    static SubspaceBasis from_reduced(std::size_t ambient_dim, std::vector<SparseVector> rows)
    {
        SubspaceBasis b(ambient_dim);
        std::sort(rows.begin(), rows.end(),
                  [](const SparseVector& x, const SparseVector& y) { return x.front().first < y.front().first; });
        b.vectors_ = std::move(rows);
        return b;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return vectors_.size(); }
    const std::vector<SparseVector>& vectors() const { return vectors_; }

    std::vector<std::size_t> pivots() const
    {
        std::vector<std::size_t> p;
        for (const auto& v : vectors_) p.push_back(v.front().first);
        return p;
    }

    std::vector<std::vector<Rational>> dense_vectors() const
    {
        std::vector<std::vector<Rational>> out;
        for (const auto& v : vectors_) {
            std::vector<Rational> d(ambient_);
            for (const auto& [i, x] : v) d[i] = x;
            out.push_back(std::move(d));
        }
        return out;
    }

    friend bool operator==(const SubspaceBasis&, const SubspaceBasis&) = default;

private:
    std::size_t ambient_ = 0;
    std::vector<SparseVector> vectors_;
};

} // namespace nodal

#endif // NODAL_EXACTLA_MATRIX_HPP
