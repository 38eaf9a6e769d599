#pragma once

// Canonical JSON for expansions, families and certificates.
//
// Integers that fit in a signed 64-bit value are JSON numbers; larger ones
// are decimal strings. Non-integral rationals are "p/q" strings. Object keys
// keep insertion order, so serialization is byte-stable.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <variant>

#include "surdforge/census.hpp"
#include "surdforge/cf_engine.hpp"
#include "surdforge/congruence.hpp"
#include "surdforge/error.hpp"
#include "surdforge/exact_arith.hpp"
#include "surdforge/friesen.hpp"
#include "surdforge/rank_bounds.hpp"

namespace surdforge::json_io {

using json = nlohmann::ordered_json;

inline json integer(const Integer& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return v.convert_to<std::int64_t>();
    }
    return v.str();
}

inline json rational(const Rational& r) {
    if (is_integral(r)) return integer(numerator_of(r));
    return r.str();
}

template <class Int>
json integers(const std::vector<Int>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(integer(Integer(v)));
    return out;
}

/// {"D", "a0", "period", "k"} and, with `with_trace`, "state_trace" as [m, d] pairs.
template <class Int>
json expansion(const SurdExpansion<Int>& e, bool with_trace) {
    json out;
    out["D"] = integer(Integer(e.D));
    out["a0"] = integer(Integer(e.a0));
    out["period"] = integers(e.period);
    out["k"] = e.k();
    if (with_trace) {
        json trace = json::array();
        for (const auto& s : e.state_trace) {
            trace.push_back(json::array({integer(Integer(s.m)), integer(Integer(s.d))}));
        }
        out["state_trace"] = std::move(trace);
    }
    return out;
}

inline json family(const FriesenFamily& f) {
    json out;
    out["route"] = "friesen";
    out["alpha"] = rational(f.alpha);
    out["beta"] = rational(f.beta);
    out["gamma"] = rational(f.gamma);
    out["discriminant"] = rational(f.discriminant());
    out["q_km1"] = integer(f.q_km1);
    out["q_km2"] = integer(f.q_km2);
    out["parity_case"] = std::string(to_string(f.parity_case));
    out["k"] = f.k;
    return out;
}

inline json family(const Period4Params& p) {
    json out;
    out["route"] = "period4";
    out["t"] = integer(p.t);
    out["u"] = integer(p.u);
    out["v"] = integer(p.v);
    out["y"] = integer(p.y);
    return out;
}

inline json parity(const ParityCondition& c) {
    json out;
    out["satisfiable"] = c.satisfiable;
    out["q_km1"] = integer(c.q_km1);
    out["q_km2"] = integer(c.q_km2);
    out["quotient"] = integer(c.quotient);
    out["witness"] = std::string(to_string(c.witness));
    return out;
}

inline json checks(const std::vector<Check>& list) {
    json out = json::array();
    for (const auto& c : list) {
        json item;
        item["name"] = c.name;
        item["passed"] = c.passed;
        item["detail"] = c.detail;
        out.push_back(std::move(item));
    }
    return out;
}

/// Field order: target, coefficients, family, b, D, expansion, checks.
inline json certificate(const ConstructionCertificate& c) {
    json out;
    out["target"] = json{{"m", integer(c.target.m)}, {"n", integer(c.target.n)}, {"k", c.target.k}};
    out["coefficients"] = integers(c.coefficients.entries());
    out["family"] = std::visit([](const auto& f) { return family(f); }, c.family);
    out["b"] = integer(c.b);
    out["D"] = integer(c.D);
    out["expansion"] = expansion(c.expansion, true);
    out["checks"] = checks(c.checks);
    return out;
}

inline json rank_bound(const RankBoundCertificate& r) {
    json out;
    out["D"] = integer(r.D);
    out["k"] = r.k;
    out["U"] = r.U ? integer(*r.U) : json(r.U_exact);
    out["classical_bound"] = integer(r.classical_bound);
    out["classical_bound_exact"] = r.classical_exact;
    out["general_bound"] = r.general_bound ? integer(*r.general_bound) : json("NotApplicable");
    out["general_bound_exact"] = r.general_bound ? json(r.general_exact) : json(nullptr);
    out["u_threshold_met"] = r.u_threshold_met;
    out["notes"] = r.notes;
    return out;
}

inline json census(const CensusReport& r) {
    json out;
    out["range"] = json::array({r.lo, r.hi});
    json counts;
    for (const auto& [k, c] : r.counts) counts[std::to_string(k)] = c;
    out["counts"] = counts.is_null() ? json::object() : counts;
    out["odd_period_count"] = r.odd_period_count;
    json ce = json::array();
    for (const auto& c : r.counterexamples) {
        ce.push_back(json{{"D", c.D}, {"claim", c.claim}, {"detail", c.detail}});
    }
    out["counterexamples"] = std::move(ce);
    json coverage = json::array();
    for (const auto& [key, residues] : r.residue_coverage) {
        coverage.push_back(json{{"k", key.first},
                                {"n", key.second},
                                {"residues", json(std::vector<std::uint64_t>(residues.begin(), residues.end()))},
                                {"complete", residues.size() == key.second}});
    }
    out["residue_coverage"] = std::move(coverage);
    out["claims_hold"] = r.counterexamples.empty();
    return out;
}

inline json error(const Error& e) {
    json out;
    out["error"] = std::string(to_string(e.kind()));
    out["message"] = e.what();
    if (e.index()) out["index"] = *e.index();
    return out;
}

}  // namespace surdforge::json_io
