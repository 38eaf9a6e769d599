#include <catch_amalgamated.hpp>

#include "surdforge/rank_bounds.hpp"

using namespace surdforge;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("rank_lower_bound examples", "[rank_bounds]") {
    auto r = rank_lower_bound(1035);
    CHECK(r.k == 4);
    CHECK(r.U == Integer(5));
    CHECK(r.classical_bound == 3);
    CHECK_FALSE(r.general_bound.has_value());
    CHECK_FALSE(r.u_threshold_met);

    r = rank_lower_bound(13);
    CHECK(r.k == 5);
    CHECK(r.U_is_sqrt_D());
    CHECK(r.U_exact == "sqrt(13)");
    CHECK(r.classical_bound == 2);
    CHECK_FALSE(r.general_bound.has_value());

    r = rank_lower_bound(6);
    CHECK(r.U == Integer(2));
    CHECK(r.classical_bound == 1);
    CHECK_FALSE(r.general_bound.has_value());

    CHECK(kind_of([] { rank_lower_bound(49); }) == ErrorKind::PerfectSquare);
}

TEST_CASE("odd-period bounds use exact integer comparisons", "[rank_bounds]") {
    // 10^6 + 1 = 1000^2 + 1 has period 1
    const auto r = rank_lower_bound(1'000'001);
    REQUIRE(r.k == 1);
    CHECK(r.classical_bound == 501);  // 4 * 500^2 < D <= 4 * 501^2
    REQUIRE(r.general_bound.has_value());
    CHECK(*r.general_bound == 16);  // 16 * 15^4 < D <= 16 * 16^4
}

TEST_CASE("bounds are the smallest integers meeting the inequalities", "[rank_bounds][property]") {
    std::vector<std::uint64_t> period;
    for (std::uint64_t D = 2; D <= 300'000; D += 7) {
        if (isqrt(D).is_square) continue;
        const auto r = rank_lower_bound(Integer(D));
        if (r.k % 2 == 0) {
            const Integer U = *r.U;
            CHECK(2 * r.classical_bound >= U);
            CHECK(2 * (r.classical_bound - 1) < U);
            CHECK(r.general_bound.has_value() == (U >= 240));
            if (r.general_bound) {
                const Integer g = *r.general_bound;
                CHECK(4 * g * g >= U);
                CHECK(4 * (g - 1) * (g - 1) < U);
            }
            // U recomputed independently from the period
            expand_period_into(D, period);
            std::uint64_t u = 0;
            for (std::size_t i = 0; i < period.size() - 1; i += 2) u = std::max(u, period[i]);
            CHECK(U == u);
        } else {
            const Integer c = r.classical_bound;
            CHECK(4 * c * c >= D);
            CHECK(4 * (c - 1) * (c - 1) < D);
            CHECK(r.general_bound.has_value() == (D >= 57'600));
            if (r.general_bound) {
                const Integer g = *r.general_bound;
                CHECK(16 * g * g * g * g >= D);
                CHECK(16 * (g - 1) * (g - 1) * (g - 1) * (g - 1) < D);
            }
        }
    }
}

TEST_CASE("construct_large_rank examples", "[rank_bounds]") {
    auto r = construct_large_rank(1, 2, 4, 4);
    const auto& params = std::get<Period4Params>(r.construction.family);
    CHECK(params.u % 4 == 0);
    CHECK(params.u == 240);
    CHECK(r.bound.U == Integer(240));
    CHECK(*r.bound.general_bound == 8);
    CHECK(r.construction.all_passed());
    CHECK(r.construction.D % 2 == 1);

    r = construct_large_rank(0, 1, 1, 4);
    CHECK(*r.bound.U >= 240);
    CHECK(r.construction.expansion.k() == 4);

    r = construct_large_rank(2, 3, 3, 2);
    CHECK(r.construction.coefficients.entries()[0] % 3 == 0);
    CHECK(r.construction.coefficients.entries()[0] >= 240);
    CHECK(*r.bound.general_bound >= 3);
    CHECK(r.construction.D % 3 == 2);
    CHECK(r.construction.expansion.k() == 2);
}

TEST_CASE("large rank targets above the threshold", "[rank_bounds]") {
    const auto r = construct_large_rank(4, 7, 20, 6);  // needs U >= 1600
    CHECK(*r.bound.U >= 1600);
    CHECK(*r.bound.general_bound >= 20);
    CHECK(r.construction.D % 7 == 4);
    CHECK(r.construction.expansion.k() == 6);
    const auto fresh = rank_lower_bound(r.construction.D);
    CHECK(fresh.U == r.bound.U);
    CHECK(fresh.general_bound == r.bound.general_bound);
}

TEST_CASE("construct_large_rank errors", "[rank_bounds]") {
    CHECK(kind_of([] { construct_large_rank(1, 4, 2, 6); }) == ErrorKind::EvenN);
    CHECK(kind_of([] { construct_large_rank(1, 5, 2, 3); }) == ErrorKind::OddK);
    CHECK(kind_of([] { construct_large_rank(1, 5, -1, 4); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { construct_large_rank(1, 5, 2, 0); }) == ErrorKind::InvalidK);
}
