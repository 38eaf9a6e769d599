#pragma once

// Quadratic families D(b) = alpha b^2 + beta b + gamma whose members have a
// prescribed palindromic period (a_1, ..., a_{k-1}, 2 a_0) for sqrt(D).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "surdforge/cf_engine.hpp"
#include "surdforge/error.hpp"
#include "surdforge/exact_arith.hpp"

namespace surdforge {

/// Symmetric sequence (a_1, ..., a_{k-1}) of positive integers. Empty for k = 1.
class PalindromeSeq {
public:
    PalindromeSeq() = default;

    explicit PalindromeSeq(std::vector<Integer> entries) : entries_(std::move(entries)) {
        for (const auto& a : entries_) {
            if (a < 1) throw Error(ErrorKind::InvalidArgument, "palindrome entries must be >= 1");
        }
        if (!is_palindrome(entries_)) {
            throw Error(ErrorKind::InvalidArgument, "sequence is not a palindrome");
        }
    }

    /// Palindrome of odd length 2h-1 or even length 2h from its first half
    /// (a_1, ..., a_h), where h = ceil((k-1)/2).
    static PalindromeSeq from_half(const std::vector<Integer>& half, std::size_t k) {
        if (k == 0) throw Error(ErrorKind::InvalidK, "period length must be >= 1");
        const std::size_t len = k - 1;
        if (half.size() != (len + 1) / 2) {
            throw Error(ErrorKind::InvalidArgument, "half length does not match k");
        }
        std::vector<Integer> full(len);
        for (std::size_t i = 0; i < len; ++i) full[i] = half[std::min(i, len - 1 - i)];
        return PalindromeSeq(std::move(full));
    }

    const std::vector<Integer>& entries() const noexcept { return entries_; }
    std::size_t k() const noexcept { return entries_.size() + 1; }

    friend bool operator==(const PalindromeSeq&, const PalindromeSeq&) = default;

private:
    std::vector<Integer> entries_;
};

enum class ParityCase { q_odd, q_even };

constexpr std::string_view to_string(ParityCase c) noexcept {
    return c == ParityCase::q_odd ? "q_odd" : "q_even";
}

enum class ParityWitness { none, q_km2_even, quotient_even };

constexpr std::string_view to_string(ParityWitness w) noexcept {
    switch (w) {
        case ParityWitness::none: return "none";
        case ParityWitness::q_km2_even: return "q_km2_even";
        case ParityWitness::quotient_even: return "quotient_even";
    }
    return "none";
}

struct ParityCondition {
    bool satisfiable = false;
    Integer q_km1;     // q_{k-1}
    Integer q_km2;     // q_{k-2}
    Integer quotient;  // (q_{k-2}^2 - (-1)^k) / q_{k-1}
    ParityWitness witness = ParityWitness::none;
};

namespace detail {
inline int sign_pow(std::size_t k) { return k % 2 == 0 ? 1 : -1; }

// (q_{k-1}, q_{k-2}) from the palindrome alone, with q_{-1} = 0, q_0 = 1.
inline std::pair<Integer, Integer> last_denominators(const PalindromeSeq& p) {
    if (p.entries().empty()) return {Integer(1), Integer(0)};
    const auto table = convergents(p.entries(), false);
    const long last = table.last_index();
    return {table.q_at(last), table.q_at(last - 1)};
}
}  // namespace detail

/// Solvability test: q_{k-2} even, or (q_{k-2}^2 - (-1)^k) / q_{k-1} even.
inline ParityCondition parity_condition(const PalindromeSeq& p) {
    ParityCondition out;
    std::tie(out.q_km1, out.q_km2) = detail::last_denominators(p);
    const Integer numer = out.q_km2 * out.q_km2 - detail::sign_pow(p.k());
    if (numer % out.q_km1 != 0) {
        throw Error(ErrorKind::VerificationFailed,
                    "q_{k-1} does not divide q_{k-2}^2 - (-1)^k; input is not a palindrome?");
    }
    out.quotient = numer / out.q_km1;
    if (out.q_km2 % 2 == 0) {
        out.witness = ParityWitness::q_km2_even;
    } else if (out.quotient % 2 == 0) {
        out.witness = ParityWitness::quotient_even;
    }
    out.satisfiable = out.witness != ParityWitness::none;
    return out;
}

struct FriesenFamily {
    Rational alpha;
    Rational beta;
    Rational gamma;
    Integer q_km1;
    Integer q_km2;
    ParityCase parity_case = ParityCase::q_odd;
    std::size_t k = 1;

    Rational discriminant() const { return beta * beta - 4 * alpha * gamma; }

    /// Discriminant predicted by the parity case: 4(-1)^k or (-1)^k.
    int expected_discriminant() const {
        const int s = detail::sign_pow(k);
        return parity_case == ParityCase::q_odd ? 4 * s : s;
    }

    Rational evaluate(const Integer& b) const {
        const Rational rb(b);
        return alpha * rb * rb + beta * rb + gamma;
    }

    friend bool operator==(const FriesenFamily&, const FriesenFamily&) = default;
};

inline FriesenFamily build_family(const PalindromeSeq& p) {
    FriesenFamily f;
    f.k = p.k();
    if (p.k() == 1) {
        // sqrt(t^2 + 1) = [t; 2t]
        f.alpha = 1;
        f.beta = 0;
        f.gamma = 1;
        f.q_km1 = 1;
        f.q_km2 = 0;
        f.parity_case = ParityCase::q_odd;
        return f;
    }
    const ParityCondition cond = parity_condition(p);
    if (!cond.satisfiable) {
        throw Error(ErrorKind::ParityConditionFails,
                    "q_{k-2} and (q_{k-2}^2 - (-1)^k)/q_{k-1} are both odd; no D exists");
    }
    f.q_km1 = cond.q_km1;
    f.q_km2 = cond.q_km2;
    f.parity_case = (f.q_km1 % 2 != 0) ? ParityCase::q_odd : ParityCase::q_even;

    const int s = detail::sign_pow(f.k);
    const Rational q1(f.q_km1);
    const Rational q2(f.q_km2);
    const Rational n = q2 * q2 - s;
    const Rational beta_core = 2 * q2 - s * q2 * n;
    f.gamma = (q2 * q2 / 4 - s) * n * n / (q1 * q1);
    if (f.parity_case == ParityCase::q_odd) {
        f.alpha = q1 * q1;
        f.beta = beta_core;
    } else {
        f.alpha = q1 * q1 / 4;
        f.beta = beta_core / 2;
    }
    if (f.discriminant() != f.expected_discriminant()) {
        throw Error(ErrorKind::VerificationFailed,
                    "family discriminant " + f.discriminant().str() + " differs from " +
                        std::to_string(f.expected_discriminant()));
    }
    return f;
}

/// Expands sqrt(D) just far enough to decide whether its period is exactly
/// (palindrome, 2 a0). Returns the verified expansion or the rejection reason.
inline std::variant<SurdExpansion<Integer>, std::string> match_palindrome(const Integer& D,
                                                                          const PalindromeSeq& p) {
    if (D < 2) return std::string("D < 2");
    if (isqrt(D).is_square) return std::string("D is a perfect square");
    const std::size_t k = p.k();
    SurdExpansion<Integer> e;
    try {
        e = expand_sqrt(D, k);
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::PeriodLimitExceeded) throw;
        return "period is longer than " + std::to_string(k);
    }
    if (e.k() != k) return "period is " + std::to_string(e.k()) + ", not " + std::to_string(k);
    if (!std::equal(p.entries().begin(), p.entries().end(), e.period.begin())) {
        return std::string("period coefficients differ from the palindrome");
    }
    try {
        const ExpansionReport r = verify_expansion(e);
        if (!r.palindrome || !r.last_is_twice_a0) return std::string("malformed expansion");
    } catch (const Error& err) {
        return std::string("round trip failed: ") + err.what();
    }
    return e;
}

struct FamilyMember {
    Integer b;
    Integer D;
    SurdExpansion<Integer> expansion;
    std::optional<Squarefree> squarefree;
};

struct SkippedB {
    Integer b;
    std::string reason;
};

struct Enumeration {
    std::vector<FamilyMember> members;
    std::vector<SkippedB> skipped;
};

struct EnumerateOptions {
    bool report_squarefree = true;
};

/// Every b in [b_lo, b_hi] whose D(b) is an integer >= 2, non-square, and
/// expands to exactly the palindrome's period. Everything else lands in
/// `skipped` with its reason.
inline Enumeration enumerate_D(const FriesenFamily& f, const PalindromeSeq& p, const Integer& b_lo,
                               const Integer& b_hi, EnumerateOptions options = {}) {
    if (p.k() != f.k) throw Error(ErrorKind::InvalidArgument, "family and palindrome disagree on k");
    Enumeration out;
    for (Integer b = b_lo; b <= b_hi; ++b) {
        const Rational value = f.evaluate(b);
        if (!is_integral(value)) {
            out.skipped.push_back({b, "D(b) = " + value.str() + " is not an integer"});
            continue;
        }
        const Integer D = numerator_of(value);
        auto match = match_palindrome(D, p);
        if (auto* reason = std::get_if<std::string>(&match)) {
            out.skipped.push_back({b, "D = " + D.str() + ": " + *reason});
            continue;
        }
        FamilyMember member{b, D, std::move(std::get<SurdExpansion<Integer>>(match)), std::nullopt};
        if (options.report_squarefree) member.squarefree = squarefree_status(D);
        out.members.push_back(std::move(member));
    }
    return out;
}

}  // namespace surdforge
