#ifndef NODAL_POLYRING_HPP
#define NODAL_POLYRING_HPP

#include <nodal/exactla/field.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace nodal {

using Exponent = std::vector<int>;

class BadChart : public Error {
public:
    using Error::Error;
};

inline std::size_t binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (long i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    return static_cast<std::size_t>(r);
}

/// Hilbert function of R = Q[x_0..x_n]: C(k+n, n) for k >= 0, else 0.
inline std::size_t dim_R(std::size_t n, long k)
{
    return k < 0 ? 0 : binomial(k + static_cast<long>(n), static_cast<long>(n));
}

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Graded-lexicographic order with x_0 > x_1 > ... > x_n.
struct GrlexGreater {
    bool operator()(const Exponent& a, const Exponent& b) const
    {
        const int da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db;
        return a > b;
    }
};

/// Monomials of one degree in grlex order (x_0^k first). The order is the
/// coordinate order of every matrix built on R_k.
class MonomialBasis {
public:
    MonomialBasis(std::size_t num_vars, long degree) : num_vars_(num_vars), degree_(degree)
    {
        if (num_vars == 0) throw Error("MonomialBasis needs at least one variable");
        if (degree < 0) return;
        monomials_.reserve(dim_R(num_vars - 1, degree));
        Exponent e(num_vars, 0);
        fill(e, 0, static_cast<int>(degree));
    }

    std::size_t num_vars() const { return num_vars_; }
    long degree() const { return degree_; }
    std::size_t size() const { return monomials_.size(); }
    const Exponent& operator[](std::size_t i) const { return monomials_[i]; }
    const std::vector<Exponent>& monomials() const { return monomials_; }

    /// Position of a degree-`degree` exponent vector, computed combinatorially.
    std::size_t index_of(const Exponent& a) const { return index_of(a.data()); }

    std::size_t index_of(const int* a) const
    {
        const long n = static_cast<long>(num_vars_) - 1;
        long rem = degree_;
        std::size_t idx = 0;
        for (long i = 0; i < n; ++i) {
            const long gap = rem - a[i];
            if (gap >= 1) idx += binomial(gap - 1 + (n - i), n - i);
            rem -= a[i];
        }
        return idx;
    }

private:
    void fill(Exponent& e, std::size_t pos, int rem)
    {
        if (pos + 1 == num_vars_) {
            e[pos] = rem;
            monomials_.push_back(e);
            return;
        }
        for (int a = rem; a >= 0; --a) {
            e[pos] = a;
            fill(e, pos + 1, rem - a);
        }
        e[pos] = 0;
    }

    std::size_t num_vars_;
    long degree_;
    std::vector<Exponent> monomials_;
};

/// Homogeneous polynomial with rational coefficients. The zero polynomial
/// keeps its nominal degree so that partials of f all have degree d-1.
class HomPoly {
public:
    using Terms = std::map<Exponent, Rational, GrlexGreater>;

    HomPoly() = default;
    HomPoly(std::size_t num_vars, int degree) : num_vars_(num_vars), degree_(degree) {}

    static HomPoly monomial(const Exponent& e, Rational c = 1)
    {
        HomPoly p(e.size(), total_degree(e));
        p.add_term(e, std::move(c));
        return p;
    }

    static HomPoly variable(std::size_t num_vars, std::size_t i)
    {
        Exponent e(num_vars, 0);
        e.at(i) = 1;
        return monomial(e);
    }

    std::size_t num_vars() const { return num_vars_; }
    int degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponent& e, const Rational& c)
    {
        if (e.size() != num_vars_) throw Error("exponent length does not match variable count");
        if (total_degree(e) != degree_) throw Error("term degree does not match polynomial degree");
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rational coefficient(const Exponent& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    friend HomPoly operator+(HomPoly a, const HomPoly& b)
    {
        a.require_compatible(b);
        for (const auto& [e, c] : b.terms_) a.add_term(e, c);
        return a;
    }

    friend HomPoly operator-(HomPoly a, const HomPoly& b)
    {
        a.require_compatible(b);
        for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
        return a;
    }

    friend HomPoly operator*(const Rational& s, HomPoly a)
    {
        if (s == 0) {
            a.terms_.clear();
            return a;
        }
        for (auto& [e, c] : a.terms_) c *= s;
        return a;
    }

    friend bool operator==(const HomPoly&, const HomPoly&) = default;

    /// Value at an affine point of C^{n+1}.
    Rational evaluate(std::span<const Rational> x) const
    {
        if (x.size() != num_vars_) throw Error("evaluate: point dimension mismatch");
        Rational s = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < num_vars_ && t != 0; ++i)
                for (int k = 0; k < e[i]; ++k) t *= x[i];
            s += t;
        }
        return s;
    }

    std::string to_string() const
    {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational mag = abs(c);
            os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            bool constant = total_degree(e) == 0;
            if (mag != 1 || constant) os << mag.get_str() << (constant ? "" : "*");
            bool lead = true;
            for (std::size_t i = 0; i < num_vars_; ++i) {
                if (e[i] == 0) continue;
                if (!lead) os << '*';
                os << variable_name(i, num_vars_);
                if (e[i] > 1) os << '^' << e[i];
                lead = false;
            }
            first = false;
        }
        return os.str();
    }

    static std::string variable_name(std::size_t i, std::size_t num_vars)
    {
        static const char* named[] = {"x", "y", "z", "w"};
        return num_vars <= 4 ? std::string(named[i]) : "x" + std::to_string(i);
    }

private:
    void require_compatible(const HomPoly& b) const
    {
        if (b.num_vars_ != num_vars_ || b.degree_ != degree_)
            throw Error("polynomials of different shape cannot be added");
    }

    std::size_t num_vars_ = 0;
    int degree_ = 0;
    Terms terms_;
};

inline HomPoly multiply(const HomPoly& g, const HomPoly& h)
{
    if (g.num_vars() != h.num_vars()) throw Error("multiply: variable count mismatch");
    HomPoly out(g.num_vars(), g.degree() + h.degree());
    Exponent e(g.num_vars());
    for (const auto& [a, c] : g.terms())
        for (const auto& [b, k] : h.terms()) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = a[i] + b[i];
            out.add_term(e, c * k);
        }
    return out;
}

/// d/dx_i.
inline HomPoly partial(const HomPoly& g, std::size_t i)
{
    HomPoly out(g.num_vars(), g.degree() - 1);
    for (const auto& [a, c] : g.terms()) {
        if (a[i] == 0) continue;
        Exponent b = a;
        --b[i];
        out.add_term(b, c * a[i]);
    }
    return out;
}

/// (d/dx_0 g, ..., d/dx_n g), each of degree deg g - 1.
inline std::vector<HomPoly> partials(const HomPoly& g)
{
    std::vector<HomPoly> out;
    for (std::size_t i = 0; i < g.num_vars(); ++i) out.push_back(partial(g, i));
    return out;
}

/// Iterated partial derivative d^mu g.
inline HomPoly derivative_order(const HomPoly& g, const Exponent& mu)
{
    if (mu.size() != g.num_vars()) throw Error("derivative_order: multi-index length mismatch");
    HomPoly out = g;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (int k = 0; k < mu[i]; ++k) out = partial(out, i);
    return out;
}

/// Value of g on the affine chart x_chart = 1 at the image of `point`.
inline Rational eval_at(const HomPoly& g, std::span<const Rational> point, std::size_t chart)
{
    if (point.size() != g.num_vars()) throw Error("eval_at: point dimension mismatch");
    if (chart >= point.size() || point[chart] == 0)
        throw BadChart("chart coordinate x" + std::to_string(chart) + " vanishes at the point");
    std::vector<Rational> affine(point.begin(), point.end());
    for (auto& v : affine) v /= point[chart];
    return g.evaluate(affine);
}

} // namespace nodal

#endif // NODAL_POLYRING_HPP
