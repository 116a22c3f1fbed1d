#ifndef NODAL_SINGULAR_HPP
#define NODAL_SINGULAR_HPP

#include <nodal/exactla/ops.hpp>
#include <nodal/polyring.hpp>

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace nodal {

/// Base for everything that stops condition (A) from being established.
class CertificationError : public Error {
public:
    using Error::Error;
};
class NotSingular : public CertificationError {
public:
    using CertificationError::CertificationError;
};
class Degenerate : public CertificationError {
public:
    using CertificationError::CertificationError;
};
class IncompleteList : public CertificationError {
public:
    using CertificationError::CertificationError;
};
class NotIsolated : public CertificationError {
public:
    using CertificationError::CertificationError;
};
class DuplicatePoint : public CertificationError {
public:
    using CertificationError::CertificationError;
};

class GeneratorWindowExceeded : public Error {
public:
    using Error::Error;
};
class ContainmentViolated : public Error {
public:
    using Error::Error;
};

class PointParseError : public Error {
public:
    PointParseError(std::size_t line, const std::string& what)
        : Error("point file line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Point of P^n scaled so that its first nonzero coordinate is 1.
class ProjPoint {
public:
    ProjPoint() = default;
    explicit ProjPoint(std::vector<Rational> coords) : coords_(std::move(coords))
    {
        auto it = std::find_if(coords_.begin(), coords_.end(), [](const Rational& c) { return c != 0; });
        if (it == coords_.end()) throw Error("projective point with all coordinates zero");
        chart_ = static_cast<std::size_t>(it - coords_.begin());
        const Rational lead = *it;
        for (auto& c : coords_) c /= lead;
    }

    /// The same point rescaled so that coordinate c is 1.
    ProjPoint with_chart(std::size_t c) const
    {
        if (c >= coords_.size() || coords_[c] == 0) throw BadChart("coordinate " + std::to_string(c) + " vanishes");
        ProjPoint p = *this;
        const Rational s = coords_[c];
        for (auto& v : p.coords_) v /= s;
        p.chart_ = c;
        return p;
    }

    const std::vector<Rational>& coords() const { return coords_; }
    std::size_t chart() const { return chart_; }
    std::size_t size() const { return coords_.size(); }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }

    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < coords_.size(); ++i) s += (i ? ":" : "") + coords_[i].get_str();
        return s;
    }

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return a.coords_ < b.coords_; }

private:
    std::vector<Rational> coords_;
    std::size_t chart_ = 0;
};

struct OdpCertificate {
    std::vector<ProjPoint> points;
    std::size_t tau = 0;
    std::vector<std::size_t> hessian_ranks;
    std::pair<long, long> stabilization_window{0, 0};
    std::vector<std::size_t> rj_dims_on_window;
};

namespace detail {

/// Coordinates of g · v in R_{e + deg g}, for v in R_e.
inline SparseVector multiply_slice(const HomPoly& g, const SparseVector& v, long e)
{
    const std::size_t nv = g.num_vars();
    MonomialBasis src(nv, e);
    MonomialBasis dst(nv, e + g.degree());
    std::map<std::size_t, Rational> acc;
    Exponent prod(nv);
    for (const auto& [i, c] : v) {
        const auto& m = src[i];
        for (const auto& [a, k] : g.terms()) {
            for (std::size_t j = 0; j < nv; ++j) prod[j] = m[j] + a[j];
            acc[dst.index_of(prod)] += c * k;
        }
    }
    SparseVector out;
    for (auto& [i, c] : acc)
        if (c != 0) out.emplace_back(i, c);
    return out;
}

inline SubspaceBasis full_slice(std::size_t num_vars, long k)
{
    const std::size_t n = dim_R(num_vars - 1, k);
    std::vector<SparseVector> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back({{i, Rational(1)}});
    return SubspaceBasis::from_reduced(n, std::move(rows));
}

/// Span of {g · v : g in gens, v in basis} inside R_{e + deg g}.
inline SubspaceBasis products_slice(const std::vector<HomPoly>& gens, const SubspaceBasis& basis, long e, long k)
{
    std::vector<SparseVector> out;
    for (const auto& g : gens) {
        if (e + g.degree() != k) continue;
        for (const auto& v : basis.vectors()) {
            auto w = multiply_slice(g, v, e);
            if (!w.empty()) out.push_back(std::move(w));
        }
    }
    return span_of(dim_R(gens.empty() ? 0 : gens.front().num_vars() - 1, k), out);
}

inline HomPoly from_slice(std::size_t num_vars, long k, const SparseVector& v)
{
    MonomialBasis b(num_vars, k);
    HomPoly p(num_vars, static_cast<int>(k));
    for (const auto& [i, c] : v) p.add_term(b[i], c);
    return p;
}

/// Falling factorial a (a-1) ... (a-m+1).
inline Integer falling(int a, int m)
{
    Integer r = 1;
    for (int i = 0; i < m; ++i) r *= a - i;
    return r;
}

} // namespace detail

inline std::size_t num_vars_of(const std::vector<ProjPoint>& points, std::size_t fallback)
{
    return points.empty() ? fallback : points.front().size();
}

/// beta^(i)_k : R_k -> ⊕_y O_y / m_y^i, trivialized on the chart of each
/// point. Rows run over (point, μ) with μ a multi-index in the chart
/// variables, |μ| < i, ordered by |μ| and then grlex; columns over R_k.
inline ExactMatrix beta_matrix(const std::vector<ProjPoint>& points, int i, long k, std::size_t num_vars)
{
    if (i < 1) throw Error("beta_matrix needs i >= 1");
    MonomialBasis cols(num_vars, k);
    const std::size_t n = num_vars - 1;
    std::vector<Exponent> mus;
    for (int t = 0; t < i; ++t) {
        MonomialBasis b(n == 0 ? 1 : n, t);
        for (const auto& m : b.monomials()) mus.push_back(n == 0 ? Exponent{} : m);
        if (n == 0) break;
    }
    std::vector<Triplet> trip;
    std::size_t row = 0;
    for (const auto& p : points) {
        if (p.size() != num_vars) throw Error("point dimension does not match the ring");
        const std::size_t c = p.chart();
        for (const auto& mu : mus) {
            for (std::size_t col = 0; col < cols.size(); ++col) {
                const auto& a = cols[col];
                Rational v = 1;
                std::size_t slot = 0;
                for (std::size_t j = 0; j < num_vars && v != 0; ++j) {
                    if (j == c) continue;
                    const int m = mu[slot++];
                    if (a[j] < m) {
                        v = 0;
                        break;
                    }
                    v *= Rational(detail::falling(a[j], m));
                    for (int e = 0; e < a[j] - m; ++e) v *= p[j];
                }
                if (v != 0) trip.push_back({row, col, v});
            }
            ++row;
        }
    }
    return ExactMatrix::from_triplets(row, cols.size(), std::move(trip));
}

/// τ - rank beta^(1)_k.
inline std::size_t defect(const std::vector<ProjPoint>& points, long k, std::size_t num_vars)
{
    if (points.empty()) return 0;
    if (k < 0) return points.size();
    return points.size() - rank(beta_matrix(points, 1, k, num_vars));
}

/// I^(i)_k: forms of degree k vanishing to order i at every point.
inline SubspaceBasis symbolic_power_slice(const std::vector<ProjPoint>& points, int i, long k, std::size_t num_vars)
{
    if (k < 0) return SubspaceBasis(0);
    if (i <= 0 || points.empty()) return detail::full_slice(num_vars, k);
    return kernel_basis(beta_matrix(points, i, k, num_vars));
}

/// J_k = span{∂_i f · m}.
inline SubspaceBasis jacobian_slice(const HomPoly& f, long k)
{
    const std::size_t nv = f.num_vars();
    if (k < 0) return SubspaceBasis(0);
    const long e = k - f.degree() + 1;
    if (e < 0) return SubspaceBasis(dim_R(nv - 1, k));
    return detail::products_slice(partials(f), detail::full_slice(nv, e), e, k);
}

/// (A·J)_k for A given in degree k - d + 1.
inline SubspaceBasis product_with_J(const HomPoly& f, const SubspaceBasis& A, long degree_of_A)
{
    const long k = degree_of_A + f.degree() - 1;
    if (k < 0) return SubspaceBasis(0);
    return detail::products_slice(partials(f), A, degree_of_A, k);
}

/// True powers of the ideal I of a finite point set. Minimal generators are
/// collected in degrees up to τ + 1; that this suffices is checked by
/// requiring R_1 · I_{τ+1} = I_{τ+2}.
class PointIdeal {
public:
    PointIdeal(std::vector<ProjPoint> points, std::size_t num_vars)
        : points_(std::move(points)), num_vars_(num_vars)
    {
        const long top = static_cast<long>(points_.size()) + 1;
        if (points_.empty()) {
            generators_.push_back(HomPoly::monomial(Exponent(num_vars_, 0)));
            return;
        }
        std::vector<HomPoly> linear;
        for (std::size_t v = 0; v < num_vars_; ++v) linear.push_back(HomPoly::variable(num_vars_, v));
        SubspaceBasis prev(dim_R(num_vars_ - 1, 0));
        for (long t = 0; t <= top; ++t) {
            const auto slice = symbolic_power_slice(points_, 1, t, num_vars_);
            auto generated = t == 0 ? SubspaceBasis(slice.ambient_dim())
                                    : detail::products_slice(linear, prev, t - 1, t);
            std::vector<SparseVector> acc = generated.vectors();
            std::size_t have = generated.dim();
            for (const auto& v : slice.vectors()) {
                if (have == slice.dim()) break;
                acc.push_back(v);
                const auto grown = span_of(slice.ambient_dim(), acc);
                if (grown.dim() > have) {
                    generators_.push_back(detail::from_slice(num_vars_, t, v));
                    have = grown.dim();
                } else {
                    acc.pop_back();
                }
            }
            prev = slice;
        }
        const auto next = symbolic_power_slice(points_, 1, top + 1, num_vars_);
        if (detail::products_slice(linear, prev, top, top + 1).dim() != next.dim())
            throw GeneratorWindowExceeded("R_1 · I_" + std::to_string(top) + " != I_" + std::to_string(top + 1));
    }

    const std::vector<HomPoly>& generators() const { return generators_; }
    const std::vector<ProjPoint>& points() const { return points_; }

    /// (I^a)_k, with I^a = R for a <= 0.
    const SubspaceBasis& power_slice(int a, long k) const
    {
        auto key = std::pair{std::max(a, 0), k};
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        SubspaceBasis out;
        if (k < 0) {
            out = SubspaceBasis(0);
        } else if (a <= 0) {
            out = detail::full_slice(num_vars_, k);
        } else {
            std::vector<SparseVector> vs;
            for (const auto& g : generators_) {
                const long e = k - g.degree();
                if (e < 0) continue;
                const auto& lower = power_slice(a - 1, e);
                for (const auto& v : lower.vectors()) {
                    auto w = detail::multiply_slice(g, v, e);
                    if (!w.empty()) vs.push_back(std::move(w));
                }
            }
            out = span_of(dim_R(num_vars_ - 1, k), vs);
        }
        return cache_.emplace(key, std::move(out)).first->second;
    }

private:
    std::vector<ProjPoint> points_;
    std::size_t num_vars_;
    std::vector<HomPoly> generators_;
    mutable std::map<std::pair<int, long>, SubspaceBasis> cache_;
};

inline SubspaceBasis ideal_power_slice(const std::vector<ProjPoint>& points, int a, long k, std::size_t num_vars)
{
    return PointIdeal(points, num_vars).power_slice(a, k);
}

enum class WotzlawVariant { powers, symbolic };

inline const char* to_string(WotzlawVariant v) { return v == WotzlawVariant::powers ? "powers" : "symbolic"; }

/// dim (I^{a+1} / I^a J)_D with D = (q+1)d - n - 1 and a = q - m, using
/// true or symbolic powers.
inline std::size_t wotzlaw_quotient_dim(const HomPoly& f, const PointIdeal& ideal, int q, WotzlawVariant variant)
{
    const int n = static_cast<int>(f.num_vars()) - 1;
    const int m = n / 2;
    const long D = static_cast<long>(q + 1) * f.degree() - n - 1;
    const int a = q - m;
    if (D < 0) return 0;
    auto power = [&](int e, long k) {
        return variant == WotzlawVariant::powers ? ideal.power_slice(e, k)
                                                 : symbolic_power_slice(ideal.points(), e, k, f.num_vars());
    };
    const SubspaceBasis num = power(a + 1, D);
    const long lower = D - f.degree() + 1;
    const SubspaceBasis den = lower < 0 ? SubspaceBasis(num.ambient_dim()) : product_with_J(f, power(a, lower), lower);
    if (!contains(num, den))
        throw ContainmentViolated("(I^a J)_" + std::to_string(D) + " is not inside the numerator for q = " +
                                  std::to_string(q));
    return num.dim() - den.dim();
}

inline std::size_t wotzlaw_quotient_dim(const HomPoly& f, const std::vector<ProjPoint>& points, int q,
                                        WotzlawVariant variant)
{
    return wotzlaw_quotient_dim(f, PointIdeal(points, f.num_vars()), q, variant);
}

/// Certifies that the listed points are exactly the singular points of
/// Y = {f = 0} and that all of them are ordinary double points.
inline OdpCertificate certify_condition_A(const HomPoly& f, std::vector<ProjPoint> claimed)
{
    const std::size_t nv = f.num_vars();
    const int n = static_cast<int>(nv) - 1;
    const int d = f.degree();
    OdpCertificate cert;
    std::set<ProjPoint> seen;
    const auto grads = partials(f);
    for (const auto& p : claimed) {
        if (p.size() != nv) throw CertificationError("point " + p.to_string() + " has the wrong dimension");
        if (!seen.insert(p).second) throw DuplicatePoint("point " + p.to_string() + " listed twice");
        if (f.evaluate(p.coords()) != 0) throw NotSingular("f does not vanish at " + p.to_string());
        for (std::size_t i = 0; i < nv; ++i)
            if (grads[i].evaluate(p.coords()) != 0)
                throw NotSingular("partial " + std::to_string(i) + " does not vanish at " + p.to_string());
        std::vector<Triplet> h;
        std::size_t r = 0;
        for (std::size_t i = 0; i < nv; ++i) {
            if (i == p.chart()) continue;
            std::size_t c = 0;
            for (std::size_t j = 0; j < nv; ++j) {
                if (j == p.chart()) continue;
                h.push_back({r, c++, partial(grads[i], j).evaluate(p.coords())});
            }
            ++r;
        }
        const auto hr = rank(ExactMatrix::from_triplets(nv - 1, nv - 1, std::move(h)));
        if (hr < nv - 1)
            throw Degenerate("Hessian at " + p.to_string() + " has rank " + std::to_string(hr) + " < " +
                             std::to_string(n));
        cert.hessian_ranks.push_back(hr);
    }
    const long T = static_cast<long>(n + 1) * (d - 2) + 1;
    cert.stabilization_window = {T, T + n + 1};
    for (long k = T; k <= T + n + 1; ++k)
        cert.rj_dims_on_window.push_back(dim_R(nv - 1, k) - jacobian_slice(f, k).dim());
    const auto first = cert.rj_dims_on_window.front();
    for (auto v : cert.rj_dims_on_window)
        if (v != first)
            throw NotIsolated("dim (R/J)_k is not constant on [" + std::to_string(T) + ", " +
                              std::to_string(T + n + 1) + "]");
    if (first > claimed.size())
        throw IncompleteList("dim (R/J)_k stabilizes at " + std::to_string(first) + " but only " +
                             std::to_string(claimed.size()) + " points were given");
    if (first < claimed.size())
        throw CertificationError("dim (R/J)_k stabilizes at " + std::to_string(first) + ", below the " +
                                 std::to_string(claimed.size()) + " listed points");
    cert.points = std::move(claimed);
    cert.tau = first;
    return cert;
}

/// Heuristic: singular points of Y with every coordinate in {0, ±1, ±2, ±1/2}.
/// Finds the nodes of many textbook examples; says nothing about the rest.
inline std::vector<ProjPoint> search_singular_points(const HomPoly& f)
{
    const std::vector<Rational> values = {0, 1, -1, 2, -2, Rational(1, 2), Rational(-1, 2)};
    const std::size_t nv = f.num_vars();
    const auto grads = partials(f);
    std::set<ProjPoint> found;
    std::vector<std::size_t> idx(nv, 0);
    while (true) {
        std::vector<Rational> c(nv);
        bool nonzero = false;
        for (std::size_t i = 0; i < nv; ++i) {
            c[i] = values[idx[i]];
            nonzero = nonzero || c[i] != 0;
        }
        if (nonzero) {
            ProjPoint p(c);
            bool singular = !found.count(p);
            for (std::size_t i = 0; i < nv && singular; ++i) singular = grads[i].evaluate(p.coords()) == 0;
            if (singular) found.insert(p);
        }
        std::size_t pos = 0;
        while (pos < nv && ++idx[pos] == values.size()) idx[pos++] = 0;
        if (pos == nv) break;
    }
    return {found.begin(), found.end()};
}

/// One point per line as colon-separated rationals (`0:1:-1`, `1/2:1:0`);
/// `#` starts a comment, blank lines are skipped.
inline std::vector<ProjPoint> parse_points(std::istream& in, std::optional<std::size_t> num_vars = std::nullopt)
{
    std::vector<ProjPoint> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        std::vector<Rational> coords;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ':')) {
            auto b = tok.find_first_not_of(" \t");
            auto e = tok.find_last_not_of(" \t");
            if (b == std::string::npos) throw PointParseError(lineno, "empty coordinate");
            tok = tok.substr(b, e - b + 1);
            if (!tok.empty() && tok.front() == '+') tok.erase(0, 1);
            Rational v;
            if (tok.empty() || v.set_str(tok, 10) != 0 || v.get_den() == 0)
                throw PointParseError(lineno, "bad rational '" + tok + "'");
            v.canonicalize();
            coords.push_back(v);
        }
        if (!line.empty() && line.back() == ':') throw PointParseError(lineno, "empty coordinate");
        if (num_vars && coords.size() != *num_vars)
            throw PointParseError(lineno, "expected " + std::to_string(*num_vars) + " coordinates, got " +
                                              std::to_string(coords.size()));
        if (std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return c == 0; }))
            throw PointParseError(lineno, "all coordinates are zero");
        out.emplace_back(std::move(coords));
    }
    return out;
}

} // namespace nodal

#endif // NODAL_SINGULAR_HPP
