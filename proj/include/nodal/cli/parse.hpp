#ifndef NODAL_CLI_PARSE_HPP
#define NODAL_CLI_PARSE_HPP

#include <nodal/polyring.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace nodal {

class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& what)
        : Error("parse error at position " + std::to_string(position) + ": " + what), position_(position)
    {
    }
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class NotHomogeneous : public Error {
public:
    NotHomogeneous(int a, int b)
        : Error("polynomial is not homogeneous: terms of degree " + std::to_string(a) + " and " + std::to_string(b)),
          degrees_{a, b}
    {
    }
    std::pair<int, int> degrees() const { return degrees_; }

private:
    std::pair<int, int> degrees_;
};

namespace detail {

/// Recursive-descent parser producing a possibly inhomogeneous polynomial
/// keyed by sparse exponent maps (variable index -> power).
class PolyParser {
public:
    using Mono = std::map<std::size_t, int>;
    using Poly = std::map<Mono, Rational>;

    explicit PolyParser(std::string_view text) : s_(text) {}

    Poly parse()
    {
        Poly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

    std::size_t max_var() const { return max_var_; }
    bool any_var() const { return any_var_; }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static void accumulate(Poly& into, const Mono& m, const Rational& c)
    {
        auto& v = into[m];
        v += c;
        if (v == 0) into.erase(m);
    }

    static Poly mul(const Poly& a, const Poly& b)
    {
        Poly out;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) {
                Mono m = ma;
                for (const auto& [v, e] : mb) m[v] += e;
                accumulate(out, m, ca * cb);
            }
        return out;
    }

    Poly expr()
    {
        skip();
        Poly out;
        bool first = true;
        while (true) {
            skip();
            Rational sign = 1;
            if (eat('-'))
                sign = -1;
            else if (!eat('+') && !first)
                break;
            if (first && pos_ >= s_.size()) fail("empty expression");
            for (const auto& [m, c] : term()) accumulate(out, m, sign * c);
            first = false;
        }
        return out;
    }

    Poly term()
    {
        Poly p = power();
        while (eat('*')) p = mul(p, power());
        return p;
    }

    Poly power()
    {
        Poly base = primary();
        if (eat('^')) {
            skip();
            const auto e = unsigned_int("exponent");
            Poly out{{Mono{}, Rational(1)}};
            for (unsigned long i = 0; i < e; ++i) out = mul(out, base);
            return out;
        }
        return base;
    }

    unsigned long unsigned_int(const char* what)
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail(std::string("expected ") + what);
        if (pos_ - start > 6) {
            pos_ = start;
            fail(std::string(what) + " too large");
        }
        return std::stoul(std::string(s_.substr(start, pos_ - start)));
    }

    Poly primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Integer num(std::string(s_.substr(start, pos_ - start)));
            Integer den = 1;
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                const std::size_t ds = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (ds == pos_) fail("expected denominator");
                den = Integer(std::string(s_.substr(ds, pos_ - ds)));
                if (den == 0) {
                    pos_ = ds;
                    fail("zero denominator");
                }
            }
            Rational q(num, den);
            q.canonicalize();
            return Poly{{Mono{}, q}};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            ++pos_;
            std::size_t var = 0;
            if (c == 'x' && pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                const std::size_t ds = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                var = std::stoul(std::string(s_.substr(ds, pos_ - ds)));
                note_style(true, start);
            } else {
                static const std::string named = "xyzw";
                const auto at = named.find(c);
                if (at == std::string::npos) {
                    pos_ = start;
                    fail("unknown variable '" + std::string(1, c) + "'");
                }
                var = at;
                note_style(false, start);
            }
            if (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) fail("expected operator");
            any_var_ = true;
            max_var_ = std::max(max_var_, var);
            return Poly{{Mono{{var, 1}}, Rational(1)}};
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    void note_style(bool indexed, std::size_t at)
    {
        if (style_ && *style_ != indexed) {
            pos_ = at;
            fail("cannot mix x,y,z,w with indexed variables x0, x1, ...");
        }
        style_ = indexed;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t max_var_ = 0;
    bool any_var_ = false;
    std::optional<bool> style_;
};

} // namespace detail

/// Parses and expands a homogeneous polynomial. Variables are x, y, z, w or
/// x0, x1, ...; the ring has max(min_vars, largest index + 1) variables.
inline HomPoly parse_polynomial(std::string_view text, std::size_t min_vars = 0)
{
    detail::PolyParser parser(text);
    const auto poly = parser.parse();
    if (poly.empty()) throw ParseError(0, "polynomial is zero");
    const std::size_t nv = std::max(min_vars, parser.any_var() ? parser.max_var() + 1 : 1);
    std::optional<int> degree;
    for (const auto& [m, c] : poly) {
        int t = 0;
        for (const auto& [v, e] : m) t += e;
        if (degree && *degree != t) throw NotHomogeneous(std::min(*degree, t), std::max(*degree, t));
        degree = t;
    }
    HomPoly out(nv, *degree);
    for (const auto& [m, c] : poly) {
        Exponent e(nv, 0);
        for (const auto& [v, p] : m) e[v] = p;
        out.add_term(e, c);
    }
    return out;
}

} // namespace nodal

#endif // NODAL_CLI_PARSE_HPP
