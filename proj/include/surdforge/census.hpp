#pragma once

// Exhaustive sweeps over D in [lo, hi]: period structure, divisibility of
// odd-period D by primes = 3 (mod 4), the D = t^2 + 1 characterization of
// period 1, and residue coverage per (k, n).
//
// The range is cut into contiguous shards that run on their own threads and
// are merged in range order, so reports do not depend on the shard count.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "surdforge/cf_engine.hpp"
#include "surdforge/error.hpp"
#include "surdforge/exact_arith.hpp"

namespace surdforge {

inline constexpr std::uint64_t kCensusMaxD = 1ULL << 62;

struct CensusRecord {
    std::uint64_t D = 0;
    std::uint32_t k = 0;
    std::uint64_t max_odd_coeff = 0;       // even k only, 0 otherwise
    std::uint64_t prime3mod4_divisor = 0;  // smallest such prime, 0 if none
    bool squarefree = false;

    bool odd_period() const noexcept { return k % 2 == 1; }

    friend bool operator==(const CensusRecord&, const CensusRecord&) = default;
};

struct Counterexample {
    std::uint64_t D = 0;
    std::string claim;
    std::string detail;

    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

using CoverageKey = std::pair<std::uint32_t, std::uint64_t>;  // (k, n)

struct CensusReport {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::map<std::uint32_t, std::uint64_t> counts;  // period length -> number of D
    std::uint64_t odd_period_count = 0;
    std::vector<CensusRecord> odd_period;  // kept when CensusOptions::keep_odd_records
    std::vector<Counterexample> counterexamples;
    std::map<CoverageKey, std::set<std::uint64_t>> residue_coverage;

    friend bool operator==(const CensusReport&, const CensusReport&) = default;
};

struct CensusOptions {
    unsigned shards = 1;
    std::vector<CoverageKey> coverage;
    bool keep_odd_records = true;
};

/// Odd-period records divisible by a prime = 3 (mod 4).
inline std::vector<CensusRecord> check_odd_period_divisibility(std::span<const CensusRecord> records) {
    std::vector<CensusRecord> out;
    for (const auto& r : records) {
        if (r.odd_period() && r.prime3mod4_divisor != 0) out.push_back(r);
    }
    return out;
}

inline std::vector<CensusRecord> check_odd_period_divisibility(const CensusReport& report) {
    return check_odd_period_divisibility(report.odd_period);
}

namespace detail {

inline constexpr std::uint64_t kCensusBlock = 1ULL << 15;

struct ShardResult {
    CensusReport report;
    std::vector<CensusRecord> records;
};

// Per-D factor data for one block via a segmented sieve with primes <= sqrt(hi).
inline void sieve_block(std::uint64_t lo, std::uint64_t hi, std::span<const std::uint32_t> primes,
                        std::vector<std::uint64_t>& rest, std::vector<std::uint64_t>& p3,
                        std::vector<std::uint8_t>& squarefree) {
    const std::size_t size = hi - lo + 1;
    rest.resize(size);
    p3.assign(size, 0);
    squarefree.assign(size, 1);
    for (std::size_t i = 0; i < size; ++i) rest[i] = lo + i;
    for (std::uint32_t p : primes) {
        const std::uint64_t first = ((lo + p - 1) / p) * p;
        for (std::uint64_t x = first; x <= hi; x += p) {
            const std::size_t i = x - lo;
            unsigned e = 0;
            while (rest[i] % p == 0) {
                rest[i] /= p;
                ++e;
            }
            if (e > 1) squarefree[i] = 0;
            if (p % 4 == 3 && p3[i] == 0) p3[i] = p;
        }
    }
    for (std::size_t i = 0; i < size; ++i) {
        // A leftover cofactor is a single prime above sqrt(hi).
        if (rest[i] > 1 && rest[i] % 4 == 3 && p3[i] == 0) p3[i] = rest[i];
    }
}

inline ShardResult sweep_shard(std::uint64_t lo, std::uint64_t hi, std::span<const std::uint32_t> primes,
                               const CensusOptions& options, bool keep_records) {
    ShardResult out;
    out.report.lo = lo;
    out.report.hi = hi;
    for (const auto& key : options.coverage) out.report.residue_coverage[key];

    std::vector<std::uint64_t> rest, p3, period;
    std::vector<std::uint8_t> squarefree;
    for (std::uint64_t block_lo = lo; block_lo <= hi;) {
        const std::uint64_t block_hi = std::min(hi, block_lo + kCensusBlock - 1);
        sieve_block(block_lo, block_hi, primes, rest, p3, squarefree);
        for (std::uint64_t D = block_lo; D <= block_hi; ++D) {
            const auto root = isqrt(D);
            if (root.is_square) continue;
            const std::uint64_t a0 = expand_period_into(D, period);
            const std::size_t i = D - block_lo;

            CensusRecord rec;
            rec.D = D;
            rec.k = static_cast<std::uint32_t>(period.size());
            rec.prime3mod4_divisor = p3[i];
            rec.squarefree = squarefree[i] != 0;
            if (!rec.odd_period()) {
                for (std::size_t j = 0; j + 1 < period.size(); j += 2) {
                    rec.max_odd_coeff = std::max(rec.max_odd_coeff, period[j]);
                }
            }

            ++out.report.counts[rec.k];
            const bool structure_ok =
                period.back() == 2 * a0 &&
                is_palindrome(std::span<const std::uint64_t>(period.data(), period.size() - 1));
            if (!structure_ok) {
                out.report.counterexamples.push_back(
                    {D, "palindromic period ending in 2 a0", "k = " + std::to_string(rec.k)});
            }
            const bool t_squared_plus_one = isqrt(D - 1).is_square;
            if ((rec.k == 1) != t_squared_plus_one) {
                out.report.counterexamples.push_back(
                    {D, "period 1 iff D = t^2 + 1", "k = " + std::to_string(rec.k)});
            }
            if (rec.odd_period()) {
                ++out.report.odd_period_count;
                if (rec.prime3mod4_divisor != 0) {
                    out.report.counterexamples.push_back(
                        {D, "odd period excludes prime divisors = 3 (mod 4)",
                         "divisible by " + std::to_string(rec.prime3mod4_divisor)});
                }
                if (options.keep_odd_records) out.report.odd_period.push_back(rec);
            }
            for (auto& [key, residues] : out.report.residue_coverage) {
                if (key.first == rec.k) residues.insert(D % key.second);
            }
            if (keep_records) out.records.push_back(rec);
        }
        block_lo = block_hi + 1;
    }
    return out;
}

}  // namespace detail

/// Sweeps [lo, hi], skipping perfect squares. When `records` is non-null it
/// receives one record per non-square D, in increasing D.
inline CensusReport sweep(std::uint64_t lo, std::uint64_t hi, const CensusOptions& options = {},
                          std::vector<CensusRecord>* records = nullptr) {
    if (lo < 2 || lo > hi) throw Error(ErrorKind::InvalidArgument, "census range must satisfy 2 <= lo <= hi");
    if (hi > kCensusMaxD) throw Error(ErrorKind::InvalidArgument, "census range exceeds 2^62");
    for (const auto& [k, n] : options.coverage) {
        if (k < 1 || n < 1) throw Error(ErrorKind::InvalidArgument, "coverage needs k >= 1 and n >= 1");
    }

    const auto primes = primes_up_to(static_cast<std::uint32_t>(isqrt(hi).root));
    const std::uint64_t total = hi - lo + 1;
    const std::uint64_t shards = std::clamp<std::uint64_t>(options.shards, 1, total);
    std::vector<detail::ShardResult> results(shards);
    std::vector<std::thread> workers;
    std::uint64_t start = lo;
    for (std::uint64_t s = 0; s < shards; ++s) {
        const std::uint64_t len = total / shards + (s < total % shards ? 1 : 0);
        const std::uint64_t end = start + len - 1;
        workers.emplace_back([&, s, start, end] {
            results[s] = detail::sweep_shard(start, end, primes, options, records != nullptr);
        });
        start = end + 1;
    }
    for (auto& w : workers) w.join();

    CensusReport report;
    report.lo = lo;
    report.hi = hi;
    for (const auto& key : options.coverage) report.residue_coverage[key];
    for (auto& r : results) {
        for (const auto& [k, c] : r.report.counts) report.counts[k] += c;
        report.odd_period_count += r.report.odd_period_count;
        report.odd_period.insert(report.odd_period.end(), r.report.odd_period.begin(),
                                 r.report.odd_period.end());
        report.counterexamples.insert(report.counterexamples.end(), r.report.counterexamples.begin(),
                                      r.report.counterexamples.end());
        for (const auto& [key, residues] : r.report.residue_coverage) {
            report.residue_coverage[key].insert(residues.begin(), residues.end());
        }
        if (records) records->insert(records->end(), r.records.begin(), r.records.end());
    }
    return report;
}

/// Residues mod n attained by {D <= hi : period length of sqrt(D) = k}.
inline std::set<std::uint64_t> residue_coverage(std::uint32_t k, std::uint64_t n, std::uint64_t hi,
                                                unsigned shards = 1) {
    CensusOptions options;
    options.shards = shards;
    options.coverage = {{k, n}};
    options.keep_odd_records = false;
    return sweep(2, hi, options).residue_coverage.at({k, n});
}

/// One CSV line per record: D,k,k_parity,max_odd_coeff,prime3mod4_divisor,squarefree
inline void write_csv(std::ostream& out, std::span<const CensusRecord> records) {
    out << "D,k,k_parity,max_odd_coeff,prime3mod4_divisor,squarefree\n";
    for (const auto& r : records) {
        out << r.D << ',' << r.k << ',' << (r.odd_period() ? "odd" : "even") << ',';
        if (!r.odd_period()) out << r.max_odd_coeff;
        out << ',';
        if (r.prime3mod4_divisor != 0) out << r.prime3mod4_divisor;
        out << ',' << (r.squarefree ? "true" : "false") << '\n';
    }
}

}  // namespace surdforge
