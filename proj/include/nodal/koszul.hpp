#ifndef NODAL_KOSZUL_HPP
#define NODAL_KOSZUL_HPP

#include <nodal/exactla/ops.hpp>
#include <nodal/forms.hpp>
#include <nodal/polyring.hpp>

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

namespace nodal {

/// Zig-zag lift failed: a representative claimed to lie in sN^(2) does not.
class LiftFailed : public Error {
public:
    using Error::Error;
};

class InconsistentSlice : public Error {
public:
    using Error::Error;
};

/// Coordinates on V / W for a subspace W of Q^N: a vector is reduced modulo
/// the reduced echelon basis of W and read off at the non-pivot positions.
class QuotientCoordinates {
public:
    QuotientCoordinates() = default;
    explicit QuotientCoordinates(SubspaceBasis sub) : sub_(std::move(sub)), slot_(sub_.ambient_dim(), -1)
    {
        std::vector<char> pivot(sub_.ambient_dim(), 0);
        for (auto p : sub_.pivots()) pivot[p] = 1;
        for (std::size_t c = 0; c < pivot.size(); ++c)
            if (!pivot[c]) {
                slot_[c] = static_cast<std::ptrdiff_t>(free_.size());
                free_.push_back(c);
            }
    }

    std::size_t dim() const { return free_.size(); }
    std::size_t ambient_dim() const { return sub_.ambient_dim(); }
    const SubspaceBasis& subspace() const { return sub_; }
    /// Ambient coordinates whose unit vectors form the quotient basis.
    const std::vector<std::size_t>& basis_coordinates() const { return free_; }

    SparseVector coordinates(const SparseVector& v) const
    {
        SparseVector out;
        for (const auto& [c, x] : reduce_modulo(v, sub_))
            out.emplace_back(static_cast<std::size_t>(slot_[c]), x);
        return out;
    }

    /// The quotient basis as unit vectors of the ambient space.
    SubspaceBasis complement_basis() const
    {
        std::vector<SparseVector> rows;
        for (auto c : free_) rows.push_back({{c, Rational(1)}});
        return SubspaceBasis::from_reduced(ambient_dim(), std::move(rows));
    }

private:
    SubspaceBasis sub_;
    std::vector<std::ptrdiff_t> slot_;
    std::vector<std::size_t> free_;
};

/// Page r in {1, 2} of the pole order spectral sequence restricted to the
/// two columns sN^(r) (form degree n) and M^(r) (form degree n+1).
struct SpectralPage {
    int r = 1;
    long k_min = 0;
    long k_max = -1;
    std::map<long, std::size_t> sN_dims;
    std::map<long, std::size_t> M_dims;
    /// d^(r): sN^(r)_k -> M^(r)_{k-(r-1)d} on the stored bases.
    std::map<long, ExactMatrix> d_matrices;
    /// Basis of sN^(r)_k inside Omega^n_k.
    std::map<long, SubspaceBasis> sN_representatives;
    /// Unit vectors of Omega^{n+1}_k spanning a complement of the image in M^(r)_k.
    std::map<long, SubspaceBasis> M_representatives;

    std::size_t sN(long k) const
    {
        auto it = sN_dims.find(k);
        return it == sN_dims.end() ? 0 : it->second;
    }
    std::size_t M(long k) const
    {
        auto it = M_dims.find(k);
        return it == M_dims.end() ? 0 : it->second;
    }
};

/// Graded slices of the Koszul complex (Omega^•, df∧) of a homogeneous f and
/// the first two pages of its pole order spectral sequence. Every result is
/// cached per degree; methods are safe to call from several threads.
class KoszulComplex {
public:
    explicit KoszulComplex(HomPoly f, ArithmeticMode mode = {})
        : f_(std::move(f)), mode_(mode), partials_(partials(f_)), cache_(std::make_unique<Cache>())
    {
        if (f_.num_vars() < 2 || f_.degree() < 1) throw Error("Koszul complex needs n >= 1 and d >= 1");
    }

    const HomPoly& poly() const { return f_; }
    const ArithmeticMode& mode() const { return mode_; }
    int n() const { return static_cast<int>(f_.num_vars()) - 1; }
    int d() const { return f_.degree(); }
    std::size_t num_vars() const { return f_.num_vars(); }

    /// [0, (n+1)(d-1) + 2d].
    long default_k_max() const { return static_cast<long>(n() + 1) * (d() - 1) + 2L * d(); }

    std::size_t dim_omega(int j, long k) const
    {
        if (j < 0 || j > n() + 1) return 0;
        return binomial(n() + 1, j) * dim_R(static_cast<std::size_t>(n()), k - j);
    }

    /// df∧ : Omega^j_k -> Omega^{j+1}_{k+d}.
    ExactMatrix koszul_matrix(int j, long k) const
    {
        if (j < 0 || j > n() + 1) throw Error("koszul_matrix: form degree out of range");
        return one_form_wedge_matrix(partials_, j, k);
    }

    std::size_t koszul_rank(int j, long k) const
    {
        if (j < 0 || j > n() || dim_omega(j, k) == 0 || dim_omega(j + 1, k + d()) == 0) return 0;
        return memo(cache_->ranks, std::pair{j, k}, [&] { return rank(koszul_matrix(j, k), mode_); });
    }

    /// dim H^j(K_f)_k.
    std::size_t dim_cohomology(int j, long k) const
    {
        return dim_omega(j, k) - koszul_rank(j, k) - koszul_rank(j - 1, k - d());
    }

    std::size_t dim_sN(long k) const { return dim_cohomology(n(), k); }
    std::size_t dim_M(long k) const { return dim_cohomology(n() + 1, k); }

    /// Image of df∧ : Omega^n_{k-d} -> Omega^{n+1}_k, i.e. J_{k-n-1}·vol.
    const QuotientCoordinates& M_coordinates(long k) const
    {
        return memo(cache_->m_quot, k, [&] {
            const std::size_t ambient = dim_omega(n() + 1, k);
            std::vector<SparseVector> cols;
            if (dim_omega(n(), k - d()) > 0) cols = columns_of(koszul_matrix(n(), k - d()));
            return QuotientCoordinates(span_of(ambient, cols));
        });
    }

    /// Basis of sN_k: kernel vectors of df∧ on Omega^n_k supported off the
    /// pivot columns of an echelon basis of the image of Omega^{n-1}_{k-d}.
    const SubspaceBasis& sN_representatives(long k) const
    {
        return memo(cache_->sn_reps, k, [&] { return compute_sN_representatives(k); });
    }

    /// d^(1): sN_k -> M_k, [ω] -> [dω], in the bases above.
    const ExactMatrix& d1_matrix(long k) const
    {
        return memo(cache_->d1, k, [&] {
            const auto& reps = sN_representatives(k);
            const auto& quot = M_coordinates(k);
            auto d = de_rham_matrix(num_vars(), n(), k);
            std::vector<Triplet> t;
            for (std::size_t c = 0; c < reps.dim(); ++c) {
                for (const auto& [row, v] : quot.coordinates(apply_sparse(d, reps.vectors()[c])))
                    t.push_back({row, c, v});
            }
            return ExactMatrix::from_triplets(quot.dim(), reps.dim(), std::move(t));
        });
    }

    /// Image of d^(1)_k inside M_k coordinates.
    const QuotientCoordinates& M2_coordinates(long k) const
    {
        return memo(cache_->m2_quot, k, [&] {
            return QuotientCoordinates(span_of(M_coordinates(k).dim(), columns_of(d1_matrix(k))));
        });
    }

    /// Basis of sN^(2)_k = ker d^(1)_k inside Omega^n_k.
    const SubspaceBasis& sN2_representatives(long k) const
    {
        return memo(cache_->sn2_reps, k, [&] {
            const auto& reps = sN_representatives(k);
            std::vector<SparseVector> out;
            const auto kernel = kernel_basis(d1_matrix(k));
            for (const auto& kv : kernel.vectors()) {
                std::vector<Rational> acc(dim_omega(n(), k));
                for (const auto& [i, c] : kv)
                    for (const auto& [pos, x] : reps.vectors()[i]) acc[pos] += c * x;
                out.push_back(to_sparse(acc));
            }
            return span_of(dim_omega(n(), k), out);
        });
    }

    /// d^(2): sN^(2)_k -> M^(2)_{k-d} by the zig-zag dω = df∧η, ω -> [dη].
    ExactMatrix d2_matrix(long k, PivotOrder lift_order = PivotOrder::sparsest) const
    {
        const auto& reps = sN2_representatives(k);
        const long target = k - d();
        const auto& m_quot = M_coordinates(target);
        const auto& m2_quot = M2_coordinates(target);
        if (reps.dim() == 0 || m2_quot.dim() == 0) return ExactMatrix(m2_quot.dim(), reps.dim());
        const auto d_top = de_rham_matrix(num_vars(), n(), k);
        const auto d_low = de_rham_matrix(num_vars(), n(), target);
        const auto wedge = koszul_matrix(n(), target);
        std::vector<Triplet> t;
        for (std::size_t c = 0; c < reps.dim(); ++c) {
            auto domega = to_dense(apply_sparse(d_top, reps.vectors()[c]), d_top.rows());
            auto eta = solve_particular(wedge, domega, lift_order);
            if (!eta) throw LiftFailed("d(ω) is not in df∧Ω^n at degree " + std::to_string(k));
            auto deta = apply_sparse(d_low, to_sparse(*eta));
            for (const auto& [row, v] : m2_quot.coordinates(m_quot.coordinates(deta))) t.push_back({row, c, v});
        }
        return ExactMatrix::from_triplets(m2_quot.dim(), reps.dim(), std::move(t));
    }

    /// Computes page r over [k_min, k_max]; degrees are independent and may
    /// be spread over `threads` workers without changing the result.
    SpectralPage page(int r, long k_min, long k_max, unsigned threads = 1) const
    {
        if (r != 1 && r != 2) throw Error("page: only r = 1 and r = 2 are supported");
        prefetch(k_min, k_max, r, threads);
        SpectralPage p;
        p.r = r;
        p.k_min = k_min;
        p.k_max = k_max;
        for (long k = k_min; k <= k_max; ++k) {
            if (r == 1) {
                p.sN_dims[k] = dim_sN(k);
                p.M_dims[k] = dim_M(k);
                p.d_matrices[k] = d1_matrix(k);
                p.sN_representatives[k] = sN_representatives(k);
                p.M_representatives[k] = lift_complement(M_coordinates(k), M_coordinates(k).complement_basis());
            } else {
                p.sN_dims[k] = sN2_representatives(k).dim();
                p.M_dims[k] = M2_coordinates(k).dim();
                p.d_matrices[k] = d2_matrix(k);
                p.sN_representatives[k] = sN2_representatives(k);
                p.M_representatives[k] = lift_complement(M_coordinates(k), M2_coordinates(k).complement_basis());
            }
        }
        return p;
    }

    void prefetch(long k_min, long k_max, int r, unsigned threads) const
    {
        if (threads <= 1 || k_max <= k_min) return;
        std::atomic<long> next{k_min};
        std::vector<std::jthread> pool;
        std::mutex err_mu;
        std::exception_ptr err;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back([&] {
                for (long k = next++; k <= k_max; k = next++) {
                    try {
                        dim_M(k);
                        d1_matrix(k);
                        if (r == 2) {
                            M2_coordinates(k);
                            sN2_representatives(k);
                        }
                    } catch (...) {
                        std::lock_guard lock(err_mu);
                        if (!err) err = std::current_exception();
                    }
                }
            });
        pool.clear();
        if (err) std::rethrow_exception(err);
    }

private:
    struct Cache {
        std::mutex mu;
        std::map<std::pair<int, long>, std::size_t> ranks;
        std::map<long, QuotientCoordinates> m_quot;
        std::map<long, QuotientCoordinates> m2_quot;
        std::map<long, SubspaceBasis> sn_reps;
        std::map<long, SubspaceBasis> sn2_reps;
        std::map<long, ExactMatrix> d1;
    };

    template <class Map, class Key, class Fn>
    const typename Map::mapped_type& memo(Map& map, const Key& key, Fn&& compute) const
    {
        {
            std::lock_guard lock(cache_->mu);
            auto it = map.find(key);
            if (it != map.end()) return it->second;
        }
        auto value = compute();
        std::lock_guard lock(cache_->mu);
        return map.try_emplace(key, std::move(value)).first->second;
    }

    SubspaceBasis compute_sN_representatives(long k) const
    {
        const std::size_t total = dim_omega(n(), k);
        if (total == 0) return SubspaceBasis(0);
        std::vector<char> in_image_pivots(total, 0);
        if (dim_omega(n() - 1, k - d()) > 0) {
            const auto image_rows = koszul_matrix(n() - 1, k - d()).transpose();
            for (auto c : echelon_profile(image_rows, mode_).pivot_cols) in_image_pivots[c] = 1;
        }
        std::vector<std::size_t> free;
        for (std::size_t c = 0; c < total; ++c)
            if (!in_image_pivots[c]) free.push_back(c);
        std::vector<SparseVector> lifted;
        if (!free.empty()) {
            auto restricted = koszul_matrix(n(), k).select_columns(free);
            const auto kernel = kernel_basis(restricted);
            for (const auto& v : kernel.vectors()) {
                SparseVector w;
                for (const auto& [i, x] : v) w.emplace_back(free[i], x);
                lifted.push_back(std::move(w));
            }
        }
        auto basis = SubspaceBasis::from_reduced(total, std::move(lifted));
        if (basis.dim() != dim_sN(k)) {
            const std::string msg = "sN representatives at degree " + std::to_string(k) + " have dimension " +
                                    std::to_string(basis.dim()) + ", expected " + std::to_string(dim_sN(k));
            if (mode_.is_modular()) throw ModularUncertified(msg);
            throw Error(msg);
        }
        return basis;
    }

    static SubspaceBasis lift_complement(const QuotientCoordinates& outer, const SubspaceBasis& inner)
    {
        std::vector<SparseVector> rows;
        for (const auto& v : inner.vectors()) {
            SparseVector w;
            for (const auto& [i, x] : v) w.emplace_back(outer.basis_coordinates()[i], x);
            rows.push_back(std::move(w));
        }
        return SubspaceBasis::from_reduced(outer.ambient_dim(), std::move(rows));
    }

    static std::vector<SparseVector> columns_of(const ExactMatrix& m)
    {
        std::vector<SparseVector> cols(m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (const auto& e : m.row(r)) cols[e.col].emplace_back(r, e.value);
        return cols;
    }

    static SparseVector apply_sparse(const ExactMatrix& m, const SparseVector& x)
    {
        std::vector<Rational> dense(m.cols());
        for (const auto& [i, v] : x) dense[i] = v;
        return to_sparse(m.apply(dense));
    }

    static SparseVector to_sparse(const std::vector<Rational>& v)
    {
        SparseVector out;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) out.emplace_back(i, v[i]);
        return out;
    }

    static std::vector<Rational> to_dense(const SparseVector& v, std::size_t n)
    {
        std::vector<Rational> out(n);
        for (const auto& [i, x] : v) out[i] = x;
        return out;
    }

    HomPoly f_;
    ArithmeticMode mode_;
    std::vector<HomPoly> partials_;
    std::unique_ptr<Cache> cache_;
};

// Free-function forms of the operations above.

inline ExactMatrix koszul_matrix(const HomPoly& f, int j, long k) { return KoszulComplex(f).koszul_matrix(j, k); }
inline std::size_t dim_sN(const HomPoly& f, long k) { return KoszulComplex(f).dim_sN(k); }
inline std::size_t dim_M(const HomPoly& f, long k) { return KoszulComplex(f).dim_M(k); }

/// dim M_k against dim R_{k-n-1} - dim J_{k-n-1}, the latter computed from
/// the span of the products ∂_i f · m.
inline bool check_M_is_RmodJ(const KoszulComplex& K, long k)
{
    const long D = k - K.n() - 1;
    const std::size_t total = dim_R(static_cast<std::size_t>(K.n()), D);
    std::size_t j_dim = 0;
    if (total > 0 && D - K.d() + 1 >= 0) {
        MonomialBasis target(K.num_vars(), D);
        MonomialBasis mult(K.num_vars(), D - K.d() + 1);
        std::vector<SparseVector> gens;
        Exponent e(K.num_vars());
        for (const auto& p : partials(K.poly()))
            for (const auto& m : mult.monomials()) {
                std::map<std::size_t, Rational> acc;
                for (const auto& [a, c] : p.terms()) {
                    for (std::size_t v = 0; v < e.size(); ++v) e[v] = a[v] + m[v];
                    acc[target.index_of(e)] += c;
                }
                SparseVector sv;
                for (auto& [i, c] : acc)
                    if (c != 0) sv.emplace_back(i, c);
                if (!sv.empty()) gens.push_back(std::move(sv));
            }
        j_dim = span_of(total, gens).dim();
    }
    return K.dim_M(k) == total - j_dim;
}

struct MPrimeDims {
    std::size_t m_prime = 0;
    std::size_t m_double_prime = 0;
};

/// dim M''_k = dim (R/I)_{k-n-1} and dim M'_k = dim M_k - dim M''_k, for
/// I_slice the degree k-n-1 part of the ideal of the singular points.
inline MPrimeDims mprime_dims(const KoszulComplex& K, long k, const SubspaceBasis& I_slice)
{
    const long D = k - K.n() - 1;
    const std::size_t total = dim_R(static_cast<std::size_t>(K.n()), D);
    if (I_slice.ambient_dim() != total)
        throw InconsistentSlice("I slice does not live in R_" + std::to_string(D));
    const auto& jimg = K.M_coordinates(k).subspace();
    if (!contains(I_slice, jimg))
        throw InconsistentSlice("J_" + std::to_string(D) + " is not contained in the supplied I slice");
    MPrimeDims out;
    out.m_double_prime = total - I_slice.dim();
    out.m_prime = K.dim_M(k) - out.m_double_prime;
    return out;
}

} // namespace nodal

#endif // NODAL_KOSZUL_HPP
