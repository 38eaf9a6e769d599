#include <catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "surdforge/cf_engine.hpp"

using namespace surdforge;
using U64 = std::vector<std::uint64_t>;

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

TEST_CASE("expand_sqrt examples", "[cf_engine]") {
    auto e = expand_sqrt<std::uint64_t>(2);
    CHECK(e.a0 == 1);
    CHECK(e.period == U64{2});

    e = expand_sqrt<std::uint64_t>(55);
    CHECK(e.a0 == 7);
    CHECK(e.period == U64{2, 2, 2, 14});

    e = expand_sqrt<std::uint64_t>(6);
    CHECK(e.a0 == 2);
    CHECK(e.period == U64{2, 4});

    e = expand_sqrt<std::uint64_t>(13);
    CHECK(e.a0 == 3);
    CHECK(e.period == U64{1, 1, 1, 1, 6});
    CHECK(e.k() == 5);

    CHECK(kind_of([] { expand_sqrt<std::uint64_t>(49); }) == ErrorKind::PerfectSquare);
    CHECK(kind_of([] { expand_sqrt<std::uint64_t>(1); }) == ErrorKind::PerfectSquare);
    CHECK(kind_of([] { expand_sqrt(Integer(0)); }) == ErrorKind::DNotPositive);
    CHECK(kind_of([] { expand_sqrt(Integer(-5)); }) == ErrorKind::DNotPositive);
}

TEST_CASE("state trace of 1035", "[cf_engine]") {
    const auto e = expand_sqrt(Integer(1035));
    CHECK(e.a0 == 32);
    CHECK(e.period == std::vector<Integer>{5, 1, 5, 64});
    const std::vector<SurdState<Integer>> trace{{32, 11}, {23, 46}, {23, 11}, {32, 1}};
    CHECK(e.state_trace == trace);
}

TEST_CASE("period limit", "[cf_engine]") {
    CHECK(kind_of([] { expand_sqrt<std::uint64_t>(13, 4); }) == ErrorKind::PeriodLimitExceeded);
    CHECK(expand_sqrt<std::uint64_t>(13, 5).k() == 5);
}

TEST_CASE("expansion agrees with certified decimal brackets", "[cf_engine][oracle]") {
    for (std::uint64_t D = 2; D <= 3000; ++D) {
        if (isqrt(D).is_square) continue;
        const auto e = expand_sqrt(Integer(D));
        const auto prefix = oracle::certified_sqrt_prefix(Integer(D), 80);
        REQUIRE(prefix.size() >= 2);
        CHECK(prefix[0] == e.a0);
        for (std::size_t i = 1; i < prefix.size(); ++i) {
            CHECK(prefix[i] == e.period[(i - 1) % e.k()]);
        }
    }
}

TEST_CASE("structure holds for every D up to 2e5", "[cf_engine][property]") {
    std::vector<std::uint64_t> period;
    for (std::uint64_t D = 2; D <= 200'000; ++D) {
        if (isqrt(D).is_square) continue;
        const auto a0 = expand_period_into(D, period);
        REQUIRE(period.back() == 2 * a0);
        REQUIRE(is_palindrome(std::span<const std::uint64_t>(period.data(), period.size() - 1)));
    }
}

TEST_CASE("period 1 exactly at t^2 + 1", "[cf_engine][property]") {
    for (std::uint64_t t = 1; t <= 1000; ++t) {
        const auto e = expand_sqrt(t * t + 1);
        CHECK(e.period == U64{2 * t});
    }
}

TEST_CASE("machine and multiprecision integers agree", "[cf_engine][property]") {
    for (int i = 0; i < 300; ++i) {
        std::uint64_t D = oracle::uniform(2, 100'000'000ULL);
        if (isqrt(D).is_square) ++D;
        const auto small = expand_sqrt(D);
        const auto big = expand_sqrt(Integer(D));
        REQUIRE(small.k() == big.k());
        CHECK(Integer(small.a0) == big.a0);
        for (std::size_t j = 0; j < small.k(); ++j) CHECK(Integer(small.period[j]) == big.period[j]);
    }
}

TEST_CASE("large D expands and verifies", "[cf_engine]") {
    const Integer t("1000000000000000000000000000000");
    auto e = expand_sqrt(Integer(t * t + 1));
    CHECK(e.a0 == t);
    CHECK(e.period == std::vector<Integer>{2 * t});
    e = expand_sqrt(Integer(t * t + 2 * t));
    CHECK(e.period == std::vector<Integer>{1, 2 * t});
    const auto r = verify_expansion(e);
    CHECK(r.palindrome);
    CHECK(r.last_is_twice_a0);
}

TEST_CASE("convergents examples", "[cf_engine]") {
    CHECK(convergents(std::vector<Integer>{2}, false).q == std::vector<Integer>{1, 2});
    CHECK(convergents(std::vector<Integer>{1, 1, 1}, false).q == std::vector<Integer>{1, 1, 2, 3});
    const auto t = convergents(std::vector<Integer>{5, 1, 5}, false);
    CHECK(t.q == std::vector<Integer>{1, 5, 6, 35});
    CHECK(t.q_at(-1) == 0);
    CHECK(t.last_index() == 3);

    const auto with_a0 = convergents(std::vector<Integer>{1, 2, 2}, true);  // sqrt(2)
    CHECK(with_a0.p == std::vector<Integer>{1, 3, 7});
    CHECK(with_a0.q == std::vector<Integer>{1, 2, 5});
    CHECK(with_a0.p_at(-1) == 1);

    CHECK(kind_of([] { convergents(std::vector<Integer>{}, false); }) == ErrorKind::EmptySequence);
    CHECK(kind_of([] { convergents(std::vector<Integer>{1, 0}, false); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("convergent identities", "[cf_engine][property]") {
    for (int i = 0; i < 500; ++i) {
        const std::size_t len = oracle::uniform(1, 14);
        std::vector<Integer> a{Integer(oracle::uniform(0, 50))};
        for (std::size_t j = 0; j < len; ++j) a.push_back(Integer(oracle::uniform(1, 50)));
        const auto t = convergents(a, true);
        const auto no_a0 = convergents(std::vector<Integer>(a.begin() + 1, a.end()), false);
        CHECK(t.q == no_a0.q);
        for (long n = 0; n <= t.last_index(); ++n) {
            // p_n q_{n-1} - p_{n-1} q_n = (-1)^{n-1}
            const Integer det = t.p_at(n) * t.q_at(n - 1) - t.p_at(n - 1) * t.q_at(n);
            CHECK(det == (n % 2 == 1 ? 1 : -1));
            CHECK(gcd(t.p_at(n), t.q_at(n)) == 1);
            const auto value = oracle::rational_cf(t.p_at(n), t.q_at(n));
            // p_n / q_n expands back to a_0..a_n (up to the trailing 1 ambiguity)
            std::vector<Integer> expect(a.begin(), a.begin() + n + 1);
            if (expect.size() > 1 && expect.back() == 1) {
                expect.pop_back();
                expect.back() += 1;
            }
            CHECK(value == expect);
        }
        CHECK(no_a0.q.back() == oracle::continuant_q(std::vector<Integer>(a.begin() + 1, a.end())));
    }
}

TEST_CASE("palindrome splitting of q_{k-1}", "[cf_engine][property]") {
    auto check = [](const std::vector<Integer>& pal) {
        // odd-length palindrome a_1..a_{k-1}: q_{k-1} = q_c (q_{c+1} + q_{c-1}), c = k/2 - 1
        const auto t = convergents(pal, false);
        const long c = static_cast<long>(pal.size() + 1) / 2 - 1;
        CHECK(t.q_at(t.last_index()) == t.q_at(c) * (t.q_at(c + 1) + t.q_at(c - 1)));
    };
    std::vector<std::uint64_t> period;
    for (std::uint64_t D = 2; D <= 100'000; ++D) {
        if (isqrt(D).is_square) continue;
        expand_period_into(D, period);
        if (period.size() % 2 != 0) continue;
        check(std::vector<Integer>(period.begin(), period.end() - 1));
    }
    for (int i = 0; i < 500; ++i) {
        const std::size_t h = oracle::uniform(1, 8);
        std::vector<Integer> half;
        for (std::size_t j = 0; j < h; ++j) half.push_back(Integer(oracle::uniform(1, 1000)));
        std::vector<Integer> pal(half);
        pal.insert(pal.end(), half.rbegin() + 1, half.rend());
        check(pal);
    }
}

TEST_CASE("is_palindrome examples", "[cf_engine]") {
    CHECK(is_palindrome(U64{2, 2, 2}));
    CHECK(is_palindrome(U64{}));
    CHECK_FALSE(is_palindrome(U64{1, 2}));
    CHECK(is_palindrome(U64{1, 2, 1}));
    CHECK(is_palindrome(U64{3, 4, 4, 3}));
}

TEST_CASE("verify_expansion examples", "[cf_engine]") {
    auto r = verify_expansion(expand_sqrt(Integer(6)));
    CHECK(r.k == 2);
    CHECK(r.palindrome);
    CHECK(r.last_is_twice_a0);

    r = verify_expansion(expand_sqrt(Integer(1035)));
    CHECK(r.k == 4);

    auto tampered = expand_sqrt(Integer(6));
    tampered.period[0] = 3;
    try {
        verify_expansion(tampered);
        FAIL("expected MismatchAt");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MismatchAt);
        CHECK(e.index() == 1u);
    }

    auto short_period = expand_sqrt(Integer(55));
    short_period.period.pop_back();
    short_period.state_trace.pop_back();
    CHECK(kind_of([&] { verify_expansion(short_period); }) == ErrorKind::MismatchAt);

    auto wrong_a0 = expand_sqrt(Integer(55));
    wrong_a0.a0 = 8;
    try {
        verify_expansion(wrong_a0);
        FAIL("expected MismatchAt");
    } catch (const Error& e) {
        CHECK(e.index() == 0u);
    }
}

TEST_CASE("verify_expansion accepts every fresh expansion", "[cf_engine][property]") {
    for (int i = 0; i < 2000; ++i) {
        Integer D = oracle::uniform(2, 1'000'000'000ULL);
        if (isqrt(D).is_square) D += 1;
        const auto r = verify_expansion(expand_sqrt(D));
        CHECK(r.palindrome);
        CHECK(r.last_is_twice_a0);
    }
}
