#pragma once

// Periodic continued fraction of sqrt(D) and convergent tables.
//
// The expansion runs the classical quadratic-surd recurrence
//     m_{i+1} = d_i a_i - m_i,  d_{i+1} = (D - m_{i+1}^2) / d_i,
//     a_{i+1} = floor((a_0 + m_{i+1}) / d_{i+1})
// starting from (m_0, d_0) = (0, 1). Every template here works for builtin
// unsigned integers (fast sweeps) and for Integer (constructions).

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "surdforge/error.hpp"
#include "surdforge/exact_arith.hpp"

namespace surdforge {

namespace detail {
template <class Int>
std::string to_decimal(const Int& v) {
    if constexpr (std::is_integral_v<Int>) {
        return std::to_string(v);
    } else {
        return v.str();
    }
}
}  // namespace detail

inline constexpr std::size_t kUnboundedPeriod = std::numeric_limits<std::size_t>::max();

template <class Int>
struct SurdState {
    Int m;
    Int d;

    friend bool operator==(const SurdState&, const SurdState&) = default;
};

/// sqrt(D) = [a0; period...] with the (m, d) state that produced each a_i.
/// state_trace[i] is the state that yields period[i] (i.e. a_{i+1}).
template <class Int>
struct SurdExpansion {
    Int D;
    Int a0;
    std::vector<Int> period;
    std::vector<SurdState<Int>> state_trace;

    std::size_t k() const noexcept { return period.size(); }

    friend bool operator==(const SurdExpansion&, const SurdExpansion&) = default;
};

namespace detail {

// Core period walk. Fills `period` (and `trace` when non-null) and returns a0.
// Period end is the first return of the (m, d) state to the state after a0;
// the first index with d == 1 must coincide with it.
template <class Int>
Int walk_period(const Int& D, std::vector<Int>& period, std::vector<SurdState<Int>>* trace,
                std::size_t max_period) {
    if (D < 1) throw Error(ErrorKind::DNotPositive, "D must be positive, got " + to_decimal(D));
    const auto [a0, square] = isqrt(D);
    if (square) throw Error(ErrorKind::PerfectSquare, to_decimal(D) + " is a perfect square");

    period.clear();
    if (trace) trace->clear();

    const SurdState<Int> first{a0, D - a0 * a0};
    Int m = first.m;
    Int d = first.d;
    Int d_prev = 1;
    std::size_t first_unit_d = 0;  // 1-based index of the first d == 1, 0 if none yet
    while (true) {
        if (period.size() == max_period) {
            throw Error(ErrorKind::PeriodLimitExceeded,
                        "period of sqrt(" + to_decimal(D) + ") exceeds " + std::to_string(max_period));
        }
        if (trace) trace->push_back({m, d});
        const Int a = (a0 + m) / d;
        period.push_back(a);
        if (d == 1 && first_unit_d == 0) first_unit_d = period.size();

        // d_{i+1} = d_{i-1} + a_i (m_i - m_{i+1}); modular wrap is harmless for unsigned Int.
        const Int m_next = a * d - m;
        const Int d_next = d_prev + a * m - a * m_next;
        d_prev = d;
        m = m_next;
        d = d_next;
        if (m == first.m && d == first.d) break;
    }
    if (first_unit_d != period.size()) {
        throw Error(ErrorKind::VerificationFailed,
                    "period detection disagreement for D=" + to_decimal(D) + ": state recurrence at " +
                        std::to_string(period.size()) + ", first d=1 at " + std::to_string(first_unit_d));
    }
    return a0;
}

}  // namespace detail

/// Expansion of sqrt(D) for non-square D >= 2. Throws PeriodLimitExceeded when
/// the period is longer than `max_period`.
template <class Int>
SurdExpansion<Int> expand_sqrt(const Int& D, std::size_t max_period = kUnboundedPeriod) {
    SurdExpansion<Int> e;
    e.D = D;
    e.a0 = detail::walk_period(D, e.period, &e.state_trace, max_period);
    return e;
}

/// Period coefficients only, reusing `out` (no state trace).
template <class Int>
Int expand_period_into(const Int& D, std::vector<Int>& out,
                       std::size_t max_period = kUnboundedPeriod) {
    return detail::walk_period<Int>(D, out, nullptr, max_period);
}

template <class T>
bool is_palindrome(std::span<const T> seq) {
    return std::equal(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(seq.size() / 2),
                      seq.rbegin());
}

template <class T>
bool is_palindrome(const std::vector<T>& seq) {
    return is_palindrome(std::span<const T>(seq));
}

struct ExpansionReport {
    std::size_t k = 0;
    bool palindrome = false;
    bool last_is_twice_a0 = false;
};

/// Replays the recurrence from D alone (plain division form) and compares it
/// with `e` term by term. Index 0 is a0, index i >= 1 is a_i / its state.
template <class Int>
ExpansionReport verify_expansion(const SurdExpansion<Int>& e) {
    if (e.D < 2) throw Error(ErrorKind::MismatchAt, "D must be >= 2", 0);
    const auto root = isqrt(e.D);
    if (root.is_square || root.root != e.a0) {
        throw Error(ErrorKind::MismatchAt, "a0 differs from floor(sqrt(D))", 0);
    }
    if (e.period.empty() || e.state_trace.size() != e.period.size()) {
        throw Error(ErrorKind::MismatchAt, "empty period or trace length mismatch", 1);
    }
    const Int& a0 = e.a0;
    Int m = 0;
    Int d = 1;
    Int a = a0;
    for (std::size_t i = 0; i < e.period.size(); ++i) {
        m = d * a - m;
        d = (e.D - m * m) / d;
        a = (a0 + m) / d;
        const std::size_t index = i + 1;
        if (e.state_trace[i].m != m || e.state_trace[i].d != d) {
            throw Error(ErrorKind::MismatchAt, "state differs at index " + std::to_string(index), index);
        }
        if (e.period[i] != a) {
            throw Error(ErrorKind::MismatchAt,
                        "coefficient differs at index " + std::to_string(index) + ": expected " +
                            detail::to_decimal(a) + ", got " + detail::to_decimal(e.period[i]),
                        index);
        }
        const bool closes = (d == 1);
        const bool last = (index == e.period.size());
        if (closes != last) {
            throw Error(ErrorKind::MismatchAt,
                        "period boundary differs at index " + std::to_string(index), index);
        }
    }
    // The state after a_k must be the state after a0.
    const Int m_next = d * a - m;
    const Int d_next = (e.D - m_next * m_next) / d;
    if (m_next != e.state_trace.front().m || d_next != e.state_trace.front().d) {
        throw Error(ErrorKind::MismatchAt, "state does not recur after the period",
                    e.period.size() + 1);
    }

    ExpansionReport report;
    report.k = e.period.size();
    report.palindrome =
        is_palindrome(std::span<const Int>(e.period.data(), e.period.size() - 1));
    report.last_is_twice_a0 = (e.period.back() == 2 * a0);
    return report;
}

/// p_n / q_n with p_{-1} = 1, p_0 = a_0, q_{-1} = 0, q_0 = 1.
/// Built without a0, `coefficients` are (a_1, ..., a_n), `q[i]` is q_i and
/// `p` stays empty. Built with a0, `coefficients` are (a_0, ..., a_n) and
/// both `p[i]` and `q[i]` hold index i.
template <class Int>
struct ConvergentTable {
    std::vector<Int> coefficients;
    std::vector<Int> p;
    std::vector<Int> q;
    bool has_a0 = false;

    /// q_i for i >= -1.
    Int q_at(long i) const {
        if (i == -1) return Int(0);
        return q.at(static_cast<std::size_t>(i));
    }
    /// p_i for i >= -1 (only when built with a0).
    Int p_at(long i) const {
        if (i == -1) return Int(1);
        return p.at(static_cast<std::size_t>(i));
    }
    /// Largest convergent index.
    long last_index() const { return static_cast<long>(q.size()) - 1; }
};

template <class Int>
ConvergentTable<Int> convergents(std::span<const Int> coeffs, bool include_a0) {
    if (coeffs.empty()) throw Error(ErrorKind::EmptySequence, "convergents of an empty sequence");
    ConvergentTable<Int> t;
    t.coefficients.assign(coeffs.begin(), coeffs.end());
    t.has_a0 = include_a0;
    const std::size_t first = include_a0 ? 1 : 0;
    for (std::size_t i = first; i < coeffs.size(); ++i) {
        if (coeffs[i] < 1) {
            throw Error(ErrorKind::InvalidArgument, "partial quotients must be >= 1");
        }
    }
    t.q.push_back(Int(1));
    Int q_prev = 0;
    if (include_a0) {
        t.p.push_back(coeffs[0]);
        Int p_prev = 1;
        for (std::size_t i = 1; i < coeffs.size(); ++i) {
            const Int p_next = coeffs[i] * t.p.back() + p_prev;
            p_prev = t.p.back();
            t.p.push_back(p_next);
            const Int q_next = coeffs[i] * t.q.back() + q_prev;
            q_prev = t.q.back();
            t.q.push_back(q_next);
        }
    } else {
        for (const Int& a : coeffs) {
            const Int q_next = a * t.q.back() + q_prev;
            q_prev = t.q.back();
            t.q.push_back(q_next);
        }
    }
    return t;
}

template <class Int>
ConvergentTable<Int> convergents(const std::vector<Int>& coeffs, bool include_a0) {
    return convergents(std::span<const Int>(coeffs), include_a0);
}

}  // namespace surdforge
