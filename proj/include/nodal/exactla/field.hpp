#ifndef NODAL_EXACTLA_FIELD_HPP
#define NODAL_EXACTLA_FIELD_HPP

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nodal {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field over which an ExactMatrix is interpreted.
struct FieldTag {
    enum class Kind { rationals, prime };

    Kind kind = Kind::rationals;
    std::uint32_t prime = 0;

    static constexpr FieldTag rationals() { return {Kind::rationals, 0}; }
    static constexpr FieldTag modulo(std::uint32_t p) { return {Kind::prime, p}; }

    bool is_prime() const { return kind == Kind::prime; }
    friend bool operator==(const FieldTag&, const FieldTag&) = default;
};

/// How ranks of rational matrices are obtained.
struct ArithmeticMode {
    enum class Kind { rational, modular };

    Kind kind = Kind::rational;
    /// Number of agreeing primes required to accept a modular rank.
    unsigned primes = 3;
    /// Total primes that may be drawn before giving up.
    unsigned prime_budget = 12;
    std::uint64_t seed = 0x6e6f64616cULL;

    static ArithmeticMode rational_mode() { return {}; }
    static ArithmeticMode modular_mode(unsigned k = 3)
    {
        ArithmeticMode m;
        m.kind = Kind::modular;
        m.primes = k;
        m.prime_budget = 4 * k;
        return m;
    }
    bool is_modular() const { return kind == Kind::modular; }
};

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p)
{
    return static_cast<std::uint32_t>(pow_mod(a, p - 2, p));
}

inline std::uint32_t reduce_mod(const Integer& z, std::uint32_t p)
{
    return static_cast<std::uint32_t>(mpz_fdiv_ui(z.get_mpz_t(), p));
}

inline std::uint32_t reduce_mod(const Rational& q, std::uint32_t p)
{
    std::uint32_t num = reduce_mod(Integer(q.get_num()), p);
    std::uint32_t den = reduce_mod(Integer(q.get_den()), p);
    if (den == 0) throw Error("denominator vanishes modulo " + std::to_string(p));
    return static_cast<std::uint32_t>(mul_mod(num, inv_mod(den, p), p));
}

} // namespace detail

/// Deterministic stream of distinct primes in (2^30, 2^31).
class PrimeStream {
public:
    explicit PrimeStream(std::uint64_t seed) : rng_(seed) {}

    std::uint32_t next()
    {
        std::uniform_int_distribution<std::uint32_t> dist((1U << 30) + 1, (1U << 31) - 1);
        for (;;) {
            std::uint32_t c = dist(rng_) | 1U;
            if (!detail::is_prime_u64(c)) continue;
            bool seen = false;
            for (auto q : used_) seen = seen || q == c;
            if (seen) continue;
            used_.push_back(c);
            return c;
        }
    }

private:
    std::mt19937_64 rng_;
    std::vector<std::uint32_t> used_;
};

} // namespace nodal

#endif // NODAL_EXACTLA_FIELD_HPP
