#pragma once

// Command-line front end. `run` is the whole program minus process plumbing,
// so tests can drive it with string streams.
//
// Exit codes: 0 success, 1 a construction failed its own verification,
// 2 invalid input, 3 a user palindrome fails the solvability condition.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "surdforge/census.hpp"
#include "surdforge/cf_engine.hpp"
#include "surdforge/congruence.hpp"
#include "surdforge/error.hpp"
#include "surdforge/exact_arith.hpp"
#include "surdforge/friesen.hpp"
#include "surdforge/json_io.hpp"
#include "surdforge/rank_bounds.hpp"

namespace surdforge::cli {

inline constexpr const char* kMaxAttemptsEnv = "SURDFORGE_MAX_ATTEMPTS";

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::VerificationFailed:
        case ErrorKind::SearchExhausted:
        case ErrorKind::ParitySearchExhausted:
        case ErrorKind::MismatchAt:
            return 1;
        case ErrorKind::ParityConditionFails:
            return 3;
        default:
            return 2;
    }
}

namespace detail {

template <class Int>
std::string join(const std::vector<Int>& values, const char* sep = ",") {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? sep : "") << values[i];
    return out.str();
}

inline std::vector<Integer> parse_list(const std::string& text) {
    std::vector<Integer> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_integer(item));
    if (text.back() == ',') throw Error(ErrorKind::InvalidArgument, "trailing comma in list");
    return out;
}

inline std::pair<Integer, Integer> parse_pair(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "expected x:y, got '" + text + "'");
    return {parse_integer(text.substr(0, colon)), parse_integer(text.substr(colon + 1))};
}

inline std::pair<Integer, Integer> parse_range(const std::string& text) {
    auto [lo, hi] = parse_pair(text);
    if (lo > hi) throw Error(ErrorKind::InvalidArgument, "range must satisfy lo <= hi");
    return {lo, hi};
}

inline std::uint64_t parse_u64(const std::string& text, const char* what) {
    const Integer v = parse_integer(text);
    if (v < 0 || v > std::numeric_limits<std::uint64_t>::max()) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " out of range");
    }
    return v.convert_to<std::uint64_t>();
}

inline std::size_t parse_k(const std::string& text) {
    const std::uint64_t k = parse_u64(text, "period");
    if (k == 0 || k > 1'000'000) throw Error(ErrorKind::InvalidK, "period length must be in [1, 10^6]");
    return static_cast<std::size_t>(k);
}

inline void print_certificate(std::ostream& out, const ConstructionCertificate& c) {
    out << "target      D = " << c.target.m << " (mod " << c.target.n << "), period " << c.target.k << '\n';
    out << "D           " << c.D << '\n';
    out << "sqrt(D)     [" << c.expansion.a0 << "; " << join(c.expansion.period) << "]\n";
    out << "palindrome  (" << join(c.coefficients.entries()) << ")\n";
    if (const auto* f = std::get_if<FriesenFamily>(&c.family)) {
        out << "family      D(b) = " << f->alpha << " b^2 + " << f->beta << " b + " << f->gamma << ", b = " << c.b
            << '\n';
    } else {
        const auto& p = std::get<Period4Params>(c.family);
        out << "period-4    t = " << p.t << ", u = " << p.u << ", v = " << p.v << ", y = " << p.y << '\n';
    }
    out << "checks\n";
    for (const auto& check : c.checks) {
        out << "  [" << (check.passed ? "pass" : "FAIL") << "] " << check.name;
        if (!check.detail.empty()) out << "  (" << check.detail << ")";
        out << '\n';
    }
}

inline void print_rank(std::ostream& out, const RankBoundCertificate& r) {
    out << "D                " << r.D << '\n';
    out << "period length    " << r.k << '\n';
    out << "U                " << r.U_exact << '\n';
    out << "classical rank   >= " << r.classical_bound << "  (" << r.classical_exact << ")\n";
    out << "general rank     ";
    if (r.general_bound) {
        out << ">= " << *r.general_bound << "  (" << r.general_exact << ")\n";
    } else {
        out << "not applicable (U < 240)\n";
    }
}

struct Output {
    bool json = false;
    bool table = false;
};

inline void add_format_flags(CLI::App* sub, Output& fmt) {
    auto* j = sub->add_flag("--json", fmt.json, "Canonical JSON output");
    auto* t = sub->add_flag("--table", fmt.table, "Human-readable output (default)");
    j->excludes(t);
}

inline SearchLimits limits_from(const std::string& max_attempts) {
    SearchLimits limits;
    if (const char* env = std::getenv(kMaxAttemptsEnv); env && *env) {
        limits.b_attempts = parse_u64(env, kMaxAttemptsEnv);
    }
    if (!max_attempts.empty()) limits.b_attempts = parse_u64(max_attempts, "--max-attempts");
    if (limits.b_attempts == 0) throw Error(ErrorKind::InvalidArgument, "attempt cap must be >= 1");
    return limits;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using json_io::json;
    CLI::App app{"Continued fractions of sqrt(D), congruence-class constructions and rank bounds",
                 "surdforge"};
    app.require_subcommand(1);

    detail::Output fmt;
    std::string d_text, palindrome_text, range_text, mod_text, residue_text, period_text, attempts_text;
    std::string rank_text, max_d_text, min_d_text = "2", csv_path;
    unsigned shards = 1;
    std::vector<std::string> coverage_text;

    auto* expand = app.add_subcommand("expand", "Continued fraction of sqrt(D)");
    expand->add_option("--d", d_text, "Non-square D >= 2")->required();
    detail::add_format_flags(expand, fmt);

    auto* family = app.add_subcommand("family", "Quadratic family for a palindromic period");
    family->add_option("--palindrome", palindrome_text, "a1,a2,...,a_{k-1} (empty for k = 1)")->required();
    family->add_option("--b-range", range_text, "lo:hi")->required();
    detail::add_format_flags(family, fmt);

    auto* construct_cmd = app.add_subcommand("construct", "D = m (mod n) with period length k");
    construct_cmd->add_option("--mod", mod_text, "Modulus n >= 1")->required();
    construct_cmd->add_option("--residue", residue_text, "Residue m")->required();
    construct_cmd->add_option("--period", period_text, "Period length k")->required();
    construct_cmd->add_option("--max-attempts", attempts_text, "Cap on the b / y search");
    detail::add_format_flags(construct_cmd, fmt);

    auto* rank_cmd = app.add_subcommand("construct-rank", "D = m (mod n) needing at least s variables");
    rank_cmd->add_option("--mod", mod_text, "Modulus n >= 1")->required();
    rank_cmd->add_option("--residue", residue_text, "Residue m")->required();
    rank_cmd->add_option("--min-rank", rank_text, "Minimum rank s")->required();
    rank_cmd->add_option("--period", period_text, "Even period length (default 4)");
    rank_cmd->add_option("--max-attempts", attempts_text, "Cap on the b / y search");
    detail::add_format_flags(rank_cmd, fmt);

    auto* census_cmd = app.add_subcommand("census", "Sweep D <= N and check the period claims");
    census_cmd->add_option("--max-d", max_d_text, "Upper end of the sweep")->required();
    census_cmd->add_option("--min-d", min_d_text, "Lower end of the sweep (default 2)");
    census_cmd->add_option("--shards", shards, "Worker threads")->check(CLI::Range(1u, 1024u));
    census_cmd->add_option("--csv", csv_path, "Write one record per D to this file");
    census_cmd->add_option("--coverage", coverage_text, "k:n pairs for residue coverage (repeatable)");
    detail::add_format_flags(census_cmd, fmt);

    auto* rank_bound_cmd = app.add_subcommand("rank-bound", "Rank lower bounds for Z[sqrt(D)]");
    rank_bound_cmd->add_option("--d", d_text, "Non-square D >= 2")->required();
    detail::add_format_flags(rank_bound_cmd, fmt);

    std::vector<std::string> argv_storage{"surdforge"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << json_io::error(Error(ErrorKind::InvalidArgument, e.what())).dump() << '\n';
        return 2;
    }

    auto emit = [&](const json& j) { out << j.dump() << '\n'; };

    try {
        if (expand->parsed()) {
            const auto e = expand_sqrt(parse_integer(d_text));
            verify_expansion(e);
            if (fmt.json) {
                emit(json_io::expansion(e, false));
            } else {
                out << "sqrt(" << e.D << ") = [" << e.a0 << "; " << detail::join(e.period) << "]\n";
                out << "period length " << e.k() << '\n';
            }
        } else if (family->parsed()) {
            const PalindromeSeq p(detail::parse_list(palindrome_text));
            const auto [lo, hi] = detail::parse_range(range_text);
            if (hi - lo > 1'000'000) throw Error(ErrorKind::InvalidArgument, "b range wider than 10^6");
            const ParityCondition cond = parity_condition(p);
            if (!cond.satisfiable) {
                throw Error(ErrorKind::ParityConditionFails,
                            "palindrome (" + palindrome_text + ") fails the parity condition: q_{k-2} = " +
                                cond.q_km2.str() + " and quotient " + cond.quotient.str() + " are both odd");
            }
            const FriesenFamily f = build_family(p);
            const Enumeration found = enumerate_D(f, p, lo, hi);
            if (fmt.json) {
                json j;
                j["palindrome"] = json_io::integers(p.entries());
                j["k"] = p.k();
                j["parity"] = json_io::parity(cond);
                j["family"] = json_io::family(f);
                json members = json::array();
                for (const auto& m : found.members) {
                    members.push_back(json{{"b", json_io::integer(m.b)},
                                           {"D", json_io::integer(m.D)},
                                           {"a0", json_io::integer(m.expansion.a0)},
                                           {"squarefree", std::string(to_string(*m.squarefree))}});
                }
                j["members"] = std::move(members);
                json skipped = json::array();
                for (const auto& s : found.skipped) {
                    skipped.push_back(json{{"b", json_io::integer(s.b)}, {"reason", s.reason}});
                }
                j["skipped"] = std::move(skipped);
                emit(j);
            } else {
                out << "k = " << p.k() << ", D(b) = " << f.alpha << " b^2 + " << f.beta << " b + " << f.gamma
                    << "  (discriminant " << f.discriminant() << ", " << to_string(f.parity_case) << ")\n";
                out << std::setw(8) << "b" << "  " << std::setw(24) << "D" << "  squarefree\n";
                for (const auto& m : found.members) {
                    out << std::setw(8) << m.b << "  " << std::setw(24) << m.D << "  " << to_string(*m.squarefree)
                        << '\n';
                }
                for (const auto& s : found.skipped) out << "skipped b = " << s.b << ": " << s.reason << '\n';
            }
        } else if (construct_cmd->parsed()) {
            const Integer n = parse_integer(mod_text);
            const Integer m = parse_integer(residue_text);
            const std::size_t k = detail::parse_k(period_text);
            const SearchLimits limits = detail::limits_from(attempts_text);
            const auto cert = construct(m, n, k, limits);
            if (fmt.json) {
                emit(json_io::certificate(cert));
            } else {
                detail::print_certificate(out, cert);
            }
        } else if (rank_cmd->parsed()) {
            const Integer n = parse_integer(mod_text);
            const Integer m = parse_integer(residue_text);
            const Integer s = parse_integer(rank_text);
            const std::size_t k = period_text.empty() ? 4 : detail::parse_k(period_text);
            const SearchLimits limits = detail::limits_from(attempts_text);
            const auto result = construct_large_rank(m, n, s, k, limits);
            if (fmt.json) {
                json j;
                j["construction"] = json_io::certificate(result.construction);
                j["rank_bound"] = json_io::rank_bound(result.bound);
                emit(j);
            } else {
                detail::print_certificate(out, result.construction);
                detail::print_rank(out, result.bound);
            }
        } else if (census_cmd->parsed()) {
            CensusOptions options;
            options.shards = shards;
            options.keep_odd_records = false;
            if (coverage_text.empty()) {
                options.coverage = {{2, 7}, {3, 7}, {4, 5}};
            }
            for (const auto& item : coverage_text) {
                const auto [k, n] = detail::parse_pair(item);
                options.coverage.emplace_back(static_cast<std::uint32_t>(detail::parse_k(k.str())),
                                              detail::parse_u64(n.str(), "coverage modulus"));
            }
            const std::uint64_t lo = detail::parse_u64(min_d_text, "--min-d");
            const std::uint64_t hi = detail::parse_u64(max_d_text, "--max-d");
            std::vector<CensusRecord> records;
            const auto report = sweep(lo, hi, options, csv_path.empty() ? nullptr : &records);
            if (!csv_path.empty()) {
                std::ofstream file(csv_path);
                if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + csv_path);
                write_csv(file, records);
            }
            if (fmt.json) {
                emit(json_io::census(report));
            } else {
                out << "D in [" << report.lo << ", " << report.hi << "], non-squares by period length:\n";
                for (const auto& [k, c] : report.counts) out << std::setw(8) << k << "  " << c << '\n';
                out << "odd-period D: " << report.odd_period_count << '\n';
                for (const auto& [key, residues] : report.residue_coverage) {
                    out << "k = " << key.first << ", residues mod " << key.second << ": {"
                        << detail::join(std::vector<std::uint64_t>(residues.begin(), residues.end()), ", ")
                        << "}\n";
                }
                out << "counterexamples: " << report.counterexamples.size() << '\n';
                for (const auto& c : report.counterexamples) {
                    out << "  D = " << c.D << ": " << c.claim << " (" << c.detail << ")\n";
                }
            }
            if (!report.counterexamples.empty()) return 1;
        } else if (rank_bound_cmd->parsed()) {
            const auto r = rank_lower_bound(parse_integer(d_text));
            if (fmt.json) {
                emit(json_io::rank_bound(r));
            } else {
                detail::print_rank(out, r);
            }
        }
    } catch (const Error& e) {
        err << json_io::error(e).dump() << '\n';
        return exit_code_for(e.kind());
    }
    return 0;
}

}  // namespace surdforge::cli
