#pragma once

// Exact integer and rational primitives shared by the rest of the library.
//
// Integer/Rational are Boost.Multiprecision types; ExactRational is kept in
// lowest terms with a positive denominator after every operation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "surdforge/error.hpp"

namespace surdforge {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// prime -> exponent; the empty map is the factorization of 1.
using PrimePowerFactorization = std::map<std::uint64_t, unsigned>;

inline constexpr std::uint64_t kFactorBound = 1'000'000'000'000ULL;  // 10^12
inline constexpr std::uint32_t kTrialDivisionLimit = 1'000'000;       // 10^6

template <class Int>
struct IsqrtResult {
    Int root;
    bool is_square;
};

/// Floor square root with an exact perfect-square flag.
template <class Int>
IsqrtResult<Int> isqrt(const Int& n) {
    if constexpr (std::is_integral_v<Int>) {
        if constexpr (std::is_signed_v<Int>) {
            if (n < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of a negative number");
        }
        using U = unsigned __int128;
        auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
        while (static_cast<U>(r) * r > static_cast<U>(n)) --r;
        while (static_cast<U>(r + 1) * (r + 1) <= static_cast<U>(n)) ++r;
        return {static_cast<Int>(r), static_cast<U>(r) * r == static_cast<U>(n)};
    } else {
        if (n < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of a negative number");
        Int rem;
        Int root = boost::multiprecision::sqrt(n, rem);
        return {root, rem == 0};
    }
}

/// Canonical residue of a modulo n, in [0, n).
inline Integer mod_floor(const Integer& a, const Integer& n) {
    Integer r = a % n;
    if (r < 0) r += n;
    return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(a, b);
}

/// Inverse of a modulo n via extended Euclid, in [1, n).
inline Integer mod_inv(const Integer& a, const Integer& n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "mod_inv needs modulus >= 2");
    Integer old_r = mod_floor(a, n), r = n;
    Integer old_s = 1, s = 0;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) {
        throw Error(ErrorKind::NotInvertible,
                    a.str() + " is not invertible modulo " + n.str());
    }
    return mod_floor(old_s, n);
}

struct Congruence {
    Integer residue;
    Integer modulus;

    friend bool operator==(const Congruence&, const Congruence&) = default;
};

/// Chinese remainder combination of pairwise coprime moduli.
/// The empty system yields 0 mod 1.
inline Congruence crt(std::span<const Congruence> system) {
    for (const auto& c : system) {
        if (c.modulus < 1) throw Error(ErrorKind::InvalidArgument, "CRT modulus must be >= 1");
    }
    for (std::size_t i = 0; i < system.size(); ++i) {
        for (std::size_t j = i + 1; j < system.size(); ++j) {
            if (gcd(system[i].modulus, system[j].modulus) != 1) {
                throw Error(ErrorKind::ModuliNotCoprime,
                            "moduli " + system[i].modulus.str() + " and " +
                                system[j].modulus.str() + " are not coprime");
            }
        }
    }
    Congruence acc{0, 1};
    for (const auto& c : system) {
        Integer r = mod_floor(c.residue, c.modulus);
        if (c.modulus == 1) continue;
        if (acc.modulus == 1) {
            acc = {r, c.modulus};
            continue;
        }
        Integer step = mod_floor((r - acc.residue) * mod_inv(acc.modulus, c.modulus), c.modulus);
        acc.residue += acc.modulus * step;
        acc.modulus *= c.modulus;
        acc.residue = mod_floor(acc.residue, acc.modulus);
    }
    return acc;
}

inline Congruence crt(std::initializer_list<Congruence> system) {
    return crt(std::span<const Congruence>(system.begin(), system.size()));
}

/// Trial-division factorization, 1 <= n <= 10^12.
inline PrimePowerFactorization factorize(std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "cannot factorize 0");
    if (n > kFactorBound) {
        throw Error(ErrorKind::TooLargeToFactor,
                    std::to_string(n) + " exceeds the trial-division bound 10^12");
    }
    PrimePowerFactorization out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    if (n > 1) ++out[n];
    return out;
}

inline PrimePowerFactorization factorize(const Integer& n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "cannot factorize a non-positive number");
    if (n > kFactorBound) {
        throw Error(ErrorKind::TooLargeToFactor, n.str() + " exceeds the trial-division bound 10^12");
    }
    return factorize(n.convert_to<std::uint64_t>());
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

/// Primes <= limit by the sieve of Eratosthenes.
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

inline const std::vector<std::uint32_t>& trial_primes() {
    static const std::vector<std::uint32_t> primes = primes_up_to(kTrialDivisionLimit);
    return primes;
}

enum class Squarefree { yes, no, unknown };

constexpr std::string_view to_string(Squarefree s) noexcept {
    switch (s) {
        case Squarefree::yes: return "yes";
        case Squarefree::no: return "no";
        case Squarefree::unknown: return "unknown";
    }
    return "unknown";
}

namespace detail {
template <class Int>
Squarefree squarefree_by_trial(Int n) {
    for (std::uint32_t p : trial_primes()) {
        if (Int(p) * p > n) return Squarefree::yes;  // cofactor is 1 or prime
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return Squarefree::no;
        }
    }
    // Cofactor has no prime factor <= 10^6.
    const Integer big(n);
    const Integer limit = Integer(kTrialDivisionLimit) * kTrialDivisionLimit;
    if (big < limit) return Squarefree::yes;
    if (isqrt(big).is_square) return Squarefree::no;
    if (big < limit * kTrialDivisionLimit) return Squarefree::yes;  // two distinct primes at most
    return Squarefree::unknown;
}
}  // namespace detail

/// Squarefree status by trial division with primes <= 10^6. Exact whenever
/// the cofactor left over is below 10^18; otherwise `unknown` unless a small
/// square factor was found.
inline Squarefree squarefree_status(const Integer& n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "squarefree_status needs n >= 1");
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        return detail::squarefree_by_trial(n.convert_to<std::uint64_t>());
    }
    return detail::squarefree_by_trial(n);
}

inline bool is_integral(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer to_integer(const Rational& r) {
    if (!is_integral(r)) throw Error(ErrorKind::NotIntegral, r.str() + " is not an integer");
    return numerator_of(r);
}

/// Decimal parse of a (possibly signed) integer; rejects anything else.
inline Integer parse_integer(const std::string& text) {
    std::size_t i = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
    if (i == text.size()) throw Error(ErrorKind::InvalidArgument, "not an integer: '" + text + "'");
    for (std::size_t j = i; j < text.size(); ++j) {
        if (text[j] < '0' || text[j] > '9') {
            throw Error(ErrorKind::InvalidArgument, "not an integer: '" + text + "'");
        }
    }
    return Integer(text[0] == '+' ? text.substr(1) : text);
}

}  // namespace surdforge
