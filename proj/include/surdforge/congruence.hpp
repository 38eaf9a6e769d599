#pragma once

// Constructions of D with sqrt(D) of prescribed even period length k and
// D = m (mod n).
//
// Two routes:
//  * period 4, any n: D from the (t, u, v, y) parametrization with
//    u = v = 0 (mod 2n) and y = m (mod n);
//  * general even k, odd n: coefficient residues making q_{k-1} = 0 and
//    beta a unit modulo every prime power of n, glued by CRT, then a Friesen
//    family D(b) in which b runs over the class solving beta b + gamma = m.
//
// Every returned certificate has been re-expanded from D and carries the
// named checks that were evaluated.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "surdforge/cf_engine.hpp"
#include "surdforge/error.hpp"
#include "surdforge/exact_arith.hpp"
#include "surdforge/friesen.hpp"

namespace surdforge {

struct Target {
    Integer m;
    Integer n;
    std::size_t k = 0;
};

struct Period4Params {
    Integer t;
    Integer u;
    Integer v;
    Integer y;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ConstructionCertificate {
    Target target;
    PalindromeSeq coefficients;
    std::variant<FriesenFamily, Period4Params> family;
    Integer b;
    Integer D;
    SurdExpansion<Integer> expansion;
    std::vector<Check> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }
};

/// Caps on the searches. Hitting one on a supported target signals a bug.
struct SearchLimits {
    std::uint64_t parity_attempts = 1ULL << 16;
    std::uint64_t b_attempts = 10'000;
};

namespace detail {

inline void require_positive(const Integer& v, const char* name) {
    if (v < 1) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be >= 1");
}

/// Smallest multiple of `step` that is >= max(floor, step).
inline Integer round_up_multiple(const Integer& floor, const Integer& step) {
    if (floor <= step) return step;
    return ((floor + step - 1) / step) * step;
}

inline Check make_check(std::string name, bool passed, std::string detail = {}) {
    return Check{std::move(name), passed, std::move(detail)};
}

// Checks shared by both routes once D and its palindrome are fixed.
inline void append_common_checks(std::vector<Check>& checks, const Target& target,
                                 const PalindromeSeq& p, const Integer& D,
                                 const SurdExpansion<Integer>& e) {
    const Integer residue = mod_floor(D, target.n);
    const Integer want = mod_floor(target.m, target.n);
    checks.push_back(make_check("D = m (mod n)", residue == want,
                                "D mod " + target.n.str() + " = " + residue.str()));
    checks.push_back(make_check("period length = k", e.k() == target.k,
                                "k = " + std::to_string(e.k())));
    checks.push_back(make_check(
        "period matches coefficients",
        e.k() == p.k() && std::equal(p.entries().begin(), p.entries().end(), e.period.begin())));
    checks.push_back(make_check("a_k = 2 a0", !e.period.empty() && e.period.back() == 2 * e.a0));
    bool replay = false;
    std::string detail;
    try {
        const ExpansionReport r = verify_expansion(expand_sqrt(D));
        replay = r.k == e.k() && r.palindrome && r.last_is_twice_a0;
    } catch (const Error& err) {
        detail = err.what();
    }
    checks.push_back(make_check("independent re-expansion", replay, detail));
}

inline void require_all_passed(const ConstructionCertificate& cert) {
    for (const auto& c : cert.checks) {
        if (!c.passed) {
            throw Error(ErrorKind::VerificationFailed,
                        "certificate check failed: " + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")"));
        }
    }
}

}  // namespace detail

/// D = t^2 + (2vut + 2t + v) / (u(uv + 2)), the discriminant of [t; u, v, u, 2t].
inline Integer period4_D(const Integer& t, const Integer& u, const Integer& v) {
    detail::require_positive(t, "t");
    detail::require_positive(u, "u");
    detail::require_positive(v, "v");
    const Integer numer = 2 * v * u * t + 2 * t + v;
    const Integer denom = u * (u * v + 2);
    if (numer % denom != 0) {
        throw Error(ErrorKind::NotIntegral, numer.str() + "/" + denom.str() + " is not an integer");
    }
    return t * t + numer / denom;
}

/// t = (u(y(uv+2) - v^2) - v) / 2, which makes period4_D integral.
inline Rational period4_t(const Integer& u, const Integer& v, const Integer& y) {
    return Rational(u * (y * (u * v + 2) - v * v) - v, 2);
}

/// D directly from the y-parametrization: t^2 + y(uv+2) - v^2 - y.
inline Rational period4_D_from_y(const Integer& u, const Integer& v, const Integer& y) {
    const Rational t = period4_t(u, v, y);
    return t * t + Rational(y * (u * v + 2) - v * v - y);
}

struct Period4Options {
    Integer min_u = 0;  // enlarge u (in steps of 2n) until u >= min_u
};

/// Period-4 D with D = m (mod n), for any n >= 1.
inline ConstructionCertificate period4_construct(const Integer& m, const Integer& n,
                                                 const SearchLimits& limits = {},
                                                 const Period4Options& options = {}) {
    detail::require_positive(n, "n");
    const Integer step = 2 * n;
    const Integer u = detail::round_up_multiple(options.min_u, step);
    const Integer v = step;
    const Integer r = mod_floor(m, n);
    const Integer y0 = (r == 0) ? n : r;
    const PalindromeSeq p({u, v, u});
    const Target target{m, n, 4};

    for (std::uint64_t attempt = 0; attempt < limits.b_attempts; ++attempt) {
        const Integer y = y0 + n * attempt;
        const Rational t_value = period4_t(u, v, y);
        if (!is_integral(t_value) || t_value < 1) continue;
        const Integer t = numerator_of(t_value);
        Integer D;
        try {
            D = period4_D(t, u, v);
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::NotIntegral) continue;
            throw;
        }
        auto match = match_palindrome(D, p);
        if (std::holds_alternative<std::string>(match)) continue;  // degenerate period, next y

        ConstructionCertificate cert;
        cert.target = target;
        cert.coefficients = p;
        cert.family = Period4Params{t, u, v, y};
        cert.b = y;
        cert.D = D;
        cert.expansion = std::move(std::get<SurdExpansion<Integer>>(match));
        auto& checks = cert.checks;
        checks.push_back(detail::make_check("u = 0 (mod 2n)", u % step == 0));
        checks.push_back(detail::make_check("v = 0 (mod 2n)", v % step == 0));
        checks.push_back(detail::make_check("y = m (mod n)", mod_floor(y - m, n) == 0));
        checks.push_back(detail::make_check("closed form agrees with y-parametrization",
                                            period4_D_from_y(u, v, y) == Rational(D)));
        checks.push_back(detail::make_check("a0 = t", cert.expansion.a0 == t));
        detail::append_common_checks(checks, target, p, D, cert.expansion);
        detail::require_all_passed(cert);
        return cert;
    }
    throw Error(ErrorKind::SearchExhausted,
                "no period-4 D found for m=" + m.str() + ", n=" + n.str() + " within " +
                    std::to_string(limits.b_attempts) + " values of y");
}

enum class ResidueCase { k_two, l_odd, l_even };

constexpr std::string_view to_string(ResidueCase c) noexcept {
    switch (c) {
        case ResidueCase::k_two: return "k_two";
        case ResidueCase::l_odd: return "l_odd";
        case ResidueCase::l_even: return "l_even";
    }
    return "k_two";
}

/// Residues for a_1, ..., a_{l+1} (l = k/2 - 1) modulo `modulus`.
/// Indices in `free_indices` carry no condition.
struct ResidueAssignment {
    Integer modulus = 1;
    std::map<std::size_t, Integer> assignments;
    std::set<std::size_t> free_indices;
    ResidueCase residue_case = ResidueCase::k_two;
    std::size_t k = 2;
};

namespace detail {

inline void require_even_k(std::size_t k) {
    if (k < 2 || k % 2 != 0) {
        throw Error(ErrorKind::InvalidK, "period length must be even and >= 2, got " + std::to_string(k));
    }
}

// Index pattern of the residue choice for a given k (independent of the modulus).
inline ResidueCase residue_case_for(std::size_t k) {
    const std::size_t l = k / 2 - 1;
    if (l == 0) return ResidueCase::k_two;
    return l % 2 == 1 ? ResidueCase::l_odd : ResidueCase::l_even;
}

}  // namespace detail

/// Coefficient residues modulo an odd prime power p^a that force
/// q_{k-1} = 0 (mod p^a) and keep beta prime to p.
///   k = 2:       a_1 = 0
///   l odd:       a_l = a_{l-2} = ... = a_1 = 0
///   l even >= 2: a_l = a_{l-2} = ... = a_4 = 0, a_1 = x, a_2 = -1/x
inline ResidueAssignment choose_coeff_residues(std::size_t k, const Integer& prime_power,
                                               const Integer& x = 1) {
    detail::require_even_k(k);
    if (prime_power < 3) {
        throw Error(ErrorKind::InvalidArgument, "expected an odd prime power, got " + prime_power.str());
    }
    const auto factors = factorize(prime_power);
    if (factors.size() != 1 || factors.begin()->first == 2) {
        throw Error(ErrorKind::InvalidArgument, "expected an odd prime power, got " + prime_power.str());
    }

    ResidueAssignment out;
    out.modulus = prime_power;
    out.k = k;
    out.residue_case = detail::residue_case_for(k);
    const std::size_t l = k / 2 - 1;
    switch (out.residue_case) {
        case ResidueCase::k_two:
            out.assignments[1] = 0;
            break;
        case ResidueCase::l_odd:
            for (std::size_t i = 1; i <= l; i += 2) out.assignments[i] = 0;
            break;
        case ResidueCase::l_even: {
            if (gcd(x, prime_power) != 1) {
                throw Error(ErrorKind::NotInvertible, "x must be a unit modulo " + prime_power.str());
            }
            for (std::size_t i = 4; i <= l; i += 2) out.assignments[i] = 0;
            out.assignments[1] = mod_floor(x, prime_power);
            out.assignments[2] = mod_floor(-mod_inv(x, prime_power), prime_power);
            break;
        }
    }
    for (std::size_t i = 1; i <= l + 1; ++i) {
        if (!out.assignments.contains(i)) out.free_indices.insert(i);
    }
    return out;
}

/// choose_coeff_residues for every prime power of odd n, merged by CRT.
/// n = 1 yields the same index pattern with every residue 0 mod 1.
inline ResidueAssignment merge_coeff_residues(std::size_t k, const Integer& n) {
    detail::require_even_k(k);
    detail::require_positive(n, "n");
    if (n % 2 == 0) throw Error(ErrorKind::EvenN, "modulus must be odd, got " + n.str());

    std::vector<ResidueAssignment> parts;
    for (const auto& [p, e] : factorize(n)) {
        parts.push_back(choose_coeff_residues(k, boost::multiprecision::pow(Integer(p), e)));
    }
    ResidueAssignment out;
    out.k = k;
    out.modulus = n;
    out.residue_case = detail::residue_case_for(k);
    const std::size_t l = k / 2 - 1;
    if (parts.empty()) {
        // Only the index pattern matters when nothing is imposed.
        const auto pattern = choose_coeff_residues(k, Integer(3));
        for (const auto& [i, r] : pattern.assignments) out.assignments[i] = 0;
    } else {
        for (const auto& [i, r] : parts.front().assignments) {
            std::vector<Congruence> system;
            for (const auto& part : parts) system.push_back({part.assignments.at(i), part.modulus});
            out.assignments[i] = crt(system).residue;
        }
    }
    for (std::size_t i = 1; i <= l + 1; ++i) {
        if (!out.assignments.contains(i)) out.free_indices.insert(i);
    }
    return out;
}

/// Positive coefficients a_1..a_{l+1} for an assignment.
/// Without `parity`, each assigned index takes its smallest positive lift and
/// free indices take 1. With `parity` (bit h-i of the vector for a_i, so a_1
/// is the most significant bit and vectors count in lexicographic order), each
/// index additionally gets a_i = parity_i (mod 2) through CRT modulo
/// 2 * modulus. `min_first` then raises a_1 in steps of 2 * modulus, which
/// keeps both the residue and the parity.
inline std::vector<Integer> lift_half(const ResidueAssignment& a, std::optional<std::uint64_t> parity,
                                      const Integer& min_first = 0) {
    const std::size_t h = a.k / 2;  // a_1 .. a_{l+1}
    std::vector<Integer> half(h);
    for (std::size_t i = 1; i <= h; ++i) {
        const bool assigned = a.assignments.contains(i);
        const Integer residue = assigned ? a.assignments.at(i) : Integer(0);
        const Integer modulus = assigned ? a.modulus : Integer(1);
        Integer value;
        if (!parity) {
            value = residue == 0 ? modulus : residue;
        } else {
            const int bit = static_cast<int>((*parity >> (h - i)) & 1U);
            Congruence c = (modulus % 2 == 0)
                               ? Congruence{residue, modulus}
                               : crt({Congruence{residue, modulus}, Congruence{bit, 2}});
            value = c.residue == 0 ? c.modulus : c.residue;
        }
        half[i - 1] = value;
    }
    if (min_first > half[0]) {
        const Integer step = 2 * a.modulus;
        const Integer deficit = min_first - half[0];
        half[0] += ((deficit + step - 1) / step) * step;
    }
    return half;
}

/// First palindrome in the documented search order that satisfies the
/// parity condition: the plain lift, then parity vectors of (a_1..a_{l+1})
/// in lexicographic order.
inline PalindromeSeq choose_palindrome(const ResidueAssignment& a, const SearchLimits& limits,
                                       const Integer& min_first = 0) {
    const std::size_t h = a.k / 2;
    const std::uint64_t vectors = (h >= 63) ? ~0ULL : (1ULL << h);
    std::uint64_t attempts = 0;
    auto try_half = [&](std::optional<std::uint64_t> parity) -> std::optional<PalindromeSeq> {
        ++attempts;
        PalindromeSeq p = PalindromeSeq::from_half(lift_half(a, parity, min_first), a.k);
        if (parity_condition(p).satisfiable) return p;
        return std::nullopt;
    };
    if (auto p = try_half(std::nullopt)) return *p;
    for (std::uint64_t v = 0; v < vectors && attempts < limits.parity_attempts; ++v) {
        if (auto p = try_half(v)) return *p;
    }
    throw Error(ErrorKind::ParitySearchExhausted,
                "no coefficient parity satisfies the solvability condition for k=" +
                    std::to_string(a.k) + " after " + std::to_string(attempts) + " attempts");
}

struct GeneralOptions {
    Integer min_first = 0;  // lower bound on a_1 (= a_{k-1}), used by the rank constructor
};

/// Even k, odd n: D with period length k and D = m (mod n).
inline ConstructionCertificate construct_mod_n(const Integer& m, const Integer& n, std::size_t k,
                                               const SearchLimits& limits = {},
                                               const GeneralOptions& options = {}) {
    detail::require_positive(n, "n");
    if (k % 2 != 0) throw Error(ErrorKind::OddK, "odd period lengths have no construction");
    detail::require_even_k(k);
    if (n % 2 == 0) throw Error(ErrorKind::EvenN, "general construction needs odd n");

    const Target target{m, n, k};
    const ResidueAssignment residues = merge_coeff_residues(k, n);
    const PalindromeSeq p = choose_palindrome(residues, limits, options.min_first);
    const FriesenFamily family = build_family(p);

    const Integer alpha = to_integer(family.alpha);
    const Integer beta = to_integer(family.beta);
    const Integer gamma = to_integer(family.gamma);
    std::vector<Check> lemma_checks;
    lemma_checks.push_back(detail::make_check("q_{k-1} = 0 (mod n)", family.q_km1 % n == 0,
                                              "q_{k-1} = " + family.q_km1.str()));
    lemma_checks.push_back(detail::make_check("alpha = 0 (mod n)", alpha % n == 0));
    lemma_checks.push_back(detail::make_check("gcd(beta, n) = 1", gcd(beta, n) == 1,
                                              "beta = " + beta.str()));
    lemma_checks.push_back(detail::make_check("discriminant", family.discriminant() == family.expected_discriminant(),
                                              family.discriminant().str()));
    for (const auto& c : lemma_checks) {
        if (!c.passed) throw Error(ErrorKind::VerificationFailed, "residue choice failed: " + c.name);
    }

    // beta b + gamma = m (mod n)
    const Integer b_residue = (n == 1) ? Integer(0) : mod_floor((m - gamma) * mod_inv(beta, n), n);
    Integer b0 = (b_residue == 0) ? n : b_residue;
    // Members lie on the increasing branch of D(b); start at or past the vertex.
    const Rational vertex = -family.beta / (2 * family.alpha);
    const Integer floor_vertex = numerator_of(vertex) / denominator_of(vertex);
    if (floor_vertex > b0) b0 += ((floor_vertex - b0) / n) * n;
    for (std::uint64_t attempt = 0; attempt < limits.b_attempts; ++attempt) {
        const Integer b = b0 + n * attempt;
        const Rational value = family.evaluate(b);
        if (!is_integral(value)) continue;
        const Integer D = numerator_of(value);
        auto match = match_palindrome(D, p);
        if (std::holds_alternative<std::string>(match)) continue;

        ConstructionCertificate cert;
        cert.target = target;
        cert.coefficients = p;
        cert.family = family;
        cert.b = b;
        cert.D = D;
        cert.expansion = std::move(std::get<SurdExpansion<Integer>>(match));
        cert.checks = lemma_checks;
        cert.checks.push_back(detail::make_check("b = (m - gamma)/beta (mod n)", mod_floor(b - b_residue, n) == 0));
        cert.checks.push_back(detail::make_check("D = alpha b^2 + beta b + gamma",
                                                 alpha * b * b + beta * b + gamma == D));
        detail::append_common_checks(cert.checks, target, p, D, cert.expansion);
        detail::require_all_passed(cert);
        return cert;
    }
    throw Error(ErrorKind::SearchExhausted,
                "no b in the class " + b_residue.str() + " mod " + n.str() + " verified within " +
                    std::to_string(limits.b_attempts) + " attempts");
}

enum class Route { general, period4 };

/// Classifies a target (m, n, k) or throws the reason it is out of reach:
/// KnownObstruction when odd k meets a prime p = 3 (mod 4) dividing both n
/// and m (that prime would divide D), Unsupported for the remaining odd-k
/// targets and for even n with k != 4.
inline Route reject_unsupported(const Integer& m, const Integer& n, std::size_t k) {
    detail::require_positive(n, "n");
    if (k == 0) throw Error(ErrorKind::InvalidK, "period length must be >= 1");
    if (k % 2 == 1) {
        for (const auto& [p, e] : factorize(n)) {
            if (p % 4 == 3 && mod_floor(m, Integer(p)) == 0) {
                throw Error(ErrorKind::KnownObstruction,
                            "odd period length " + std::to_string(k) + " forbids D divisible by " +
                                std::to_string(p) + " (a prime = 3 mod 4), but D = m (mod n) forces it");
            }
        }
        throw Error(ErrorKind::Unsupported,
                    "no construction is known for odd period length " + std::to_string(k));
    }
    if (n % 2 == 0) {
        if (k == 4) return Route::period4;
        throw Error(ErrorKind::Unsupported,
                    "even modulus with period length " + std::to_string(k) +
                        " is an open case; only k = 4 is supported for even n");
    }
    return Route::general;
}

/// Dispatches a target to the route that handles it.
inline ConstructionCertificate construct(const Integer& m, const Integer& n, std::size_t k,
                                         const SearchLimits& limits = {}) {
    switch (reject_unsupported(m, n, k)) {
        case Route::period4: return period4_construct(m, n, limits);
        case Route::general: return construct_mod_n(m, n, k, limits);
    }
    throw Error(ErrorKind::InvalidArgument, "unreachable route");
}

}  // namespace surdforge
