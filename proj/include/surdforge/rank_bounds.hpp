#pragma once

// Lower bounds on the rank of universal quadratic forms over Z[sqrt(D)]:
//   classical forms: r >= U/2
//   any form:        r >= sqrt(U)/2, valid once U >= 240
// with U = max(a_1, a_3, ..., a_{k-1}) for even period length k and
// U = sqrt(D) for odd k. Bounds are reported as integer ceilings, computed
// with integer comparisons only.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surdforge/cf_engine.hpp"
#include "surdforge/congruence.hpp"
#include "surdforge/error.hpp"
#include "surdforge/exact_arith.hpp"

namespace surdforge {

inline constexpr unsigned kGeneralBoundThreshold = 240;

struct RankBoundCertificate {
    Integer D;
    std::size_t k = 0;
    std::optional<Integer> U;  // engaged for even k; odd k means U = sqrt(D)
    std::string U_exact;       // "5" or "sqrt(13)"
    Integer classical_bound;
    std::string classical_exact;
    std::optional<Integer> general_bound;  // only when U >= 240
    std::string general_exact;
    bool u_threshold_met = false;
    std::vector<std::string> notes;

    bool U_is_sqrt_D() const { return !U.has_value(); }
};

namespace detail {

// ceil(sqrt(x)) for x >= 0
inline Integer ceil_sqrt(const Integer& x) {
    const auto r = isqrt(x);
    return r.is_square ? r.root : r.root + 1;
}

// ceil(x^(1/4)) for x >= 0; floor(x^(1/4)) = isqrt(isqrt(x)).
inline Integer ceil_fourth_root(const Integer& x) {
    const Integer f = isqrt(isqrt(x).root).root;
    return (f * f * f * f == x) ? f : f + 1;
}

// Smallest integer r with 2r >= c, c >= 0.
inline Integer half_ceil(const Integer& c) { return (c + 1) / 2; }

}  // namespace detail

inline RankBoundCertificate rank_bound_from_expansion(const SurdExpansion<Integer>& e) {
    RankBoundCertificate cert;
    cert.D = e.D;
    cert.k = e.k();
    if (cert.k % 2 == 0) {
        Integer u = 0;
        for (std::size_t i = 0; i + 1 < e.period.size(); i += 2) u = std::max(u, e.period[i]);
        cert.U = u;
        cert.U_exact = u.str();
        cert.classical_bound = detail::half_ceil(u);  // smallest r with 2r >= U
        cert.classical_exact = Rational(u, 2).str();
        cert.u_threshold_met = u >= kGeneralBoundThreshold;
        if (cert.u_threshold_met) {
            cert.general_bound = detail::half_ceil(detail::ceil_sqrt(u));  // 4r^2 >= U
            cert.general_exact = "sqrt(" + u.str() + ")/2";
        }
    } else {
        cert.U_exact = "sqrt(" + e.D.str() + ")";
        cert.classical_bound = detail::half_ceil(detail::ceil_sqrt(e.D));  // 4r^2 >= D
        cert.classical_exact = "sqrt(" + e.D.str() + ")/2";
        const Integer threshold = Integer(kGeneralBoundThreshold) * kGeneralBoundThreshold;
        cert.u_threshold_met = e.D >= threshold;
        if (cert.u_threshold_met) {
            cert.general_bound = detail::half_ceil(detail::ceil_fourth_root(e.D));  // 16r^4 >= D
            cert.general_exact = "D^(1/4)/2";
        }
    }
    if (!cert.u_threshold_met) {
        cert.notes.push_back("general bound needs U >= 240; not applicable");
    }
    return cert;
}

inline RankBoundCertificate rank_lower_bound(const Integer& D) {
    return rank_bound_from_expansion(expand_sqrt(D));
}

struct LargeRankResult {
    ConstructionCertificate construction;
    RankBoundCertificate bound;
};

/// D = m (mod n) with period length k whose universal forms need at least s
/// variables: the relevant odd-indexed coefficient is pushed to
/// >= max(4 s^2, 240) by adding multiples of its modulus.
inline LargeRankResult construct_large_rank(const Integer& m, const Integer& n, const Integer& s,
                                            std::size_t k = 4, const SearchLimits& limits = {}) {
    if (s < 0) throw Error(ErrorKind::InvalidArgument, "minimum rank must be >= 0");
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    if (k == 0) throw Error(ErrorKind::InvalidK, "period length must be >= 1");
    if (k % 2 == 1) throw Error(ErrorKind::OddK, "rank construction needs even period length");
    if (k != 4 && n % 2 == 0) {
        throw Error(ErrorKind::EvenN, "period length " + std::to_string(k) + " needs odd n");
    }

    const Integer target_u = std::max(Integer(4) * s * s, Integer(kGeneralBoundThreshold));
    LargeRankResult out;
    if (k == 4) {
        out.construction = period4_construct(m, n, limits, Period4Options{target_u});
    } else {
        out.construction = construct_mod_n(m, n, k, limits, GeneralOptions{target_u});
    }
    out.bound = rank_bound_from_expansion(out.construction.expansion);
    out.bound.notes.push_back(
        "threshold enforced on U = max(a_1, a_3, ..., a_{k-1}) >= 240, which also implies "
        "max(a_0, ..., a_k) >= 240");

    auto& checks = out.construction.checks;
    const Integer U = out.bound.U.value_or(0);
    checks.push_back(detail::make_check("U >= max(4 s^2, 240)", U >= target_u, "U = " + U.str()));
    const bool general_ok = out.bound.general_bound.has_value() && *out.bound.general_bound >= s;
    checks.push_back(detail::make_check(
        "general bound >= s", general_ok,
        out.bound.general_bound ? "bound = " + out.bound.general_bound->str() : "not applicable"));
    detail::require_all_passed(out.construction);
    return out;
}

}  // namespace surdforge
