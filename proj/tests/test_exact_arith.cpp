#include <catch_amalgamated.hpp>

#include <cstdint>

#include "oracles.hpp"
#include "surdforge/exact_arith.hpp"

using namespace surdforge;

TEST_CASE("isqrt on small values", "[exact_arith]") {
    auto r = isqrt<std::uint64_t>(49);
    CHECK(r.root == 7);
    CHECK(r.is_square);
    r = isqrt<std::uint64_t>(55);
    CHECK(r.root == 7);
    CHECK_FALSE(r.is_square);
    r = isqrt<std::uint64_t>(0);
    CHECK(r.root == 0);
    CHECK(r.is_square);

    const auto big = isqrt(Integer(55));
    CHECK(big.root == 7);
    CHECK_FALSE(big.is_square);
}

TEST_CASE("isqrt brackets random inputs", "[exact_arith][property]") {
    for (int i = 0; i < 20000; ++i) {
        const std::uint64_t n = oracle::uniform(0, 1'000'000'000'000ULL);
        const auto r = isqrt(n);
        CHECK(r.root * r.root <= n);
        CHECK((r.root + 1) * (r.root + 1) > n);
        CHECK(r.is_square == (r.root * r.root == n));
    }
    // near the top of the 64-bit range the float estimate is off
    const std::uint64_t top = ~0ULL;
    const auto r = isqrt(top);
    CHECK(r.root == 4294967295ULL);
    CHECK_FALSE(r.is_square);

    const Integer huge = Integer("123456789012345678901234567890123456789");
    const auto h = isqrt(huge);
    CHECK(h.root * h.root <= huge);
    CHECK((h.root + 1) * (h.root + 1) > huge);
    CHECK(isqrt(Integer(h.root * h.root)).is_square);
}

TEST_CASE("isqrt rejects negative input", "[exact_arith]") {
    CHECK_THROWS_AS(isqrt(Integer(-4)), Error);
}

TEST_CASE("mod_inv examples", "[exact_arith]") {
    CHECK(mod_inv(2, 5) == 3);
    CHECK(mod_inv(1, 97) == 1);
    CHECK(mod_inv(-1, 9) == 8);
    try {
        mod_inv(3, 9);
        FAIL("expected NotInvertible");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotInvertible);
    }
    CHECK_THROWS_AS(mod_inv(1, 1), Error);
}

TEST_CASE("mod_inv is an inverse for random coprime pairs", "[exact_arith][property]") {
    for (int i = 0; i < 5000; ++i) {
        const Integer n = oracle::uniform(2, 1'000'000'000);
        const Integer a = oracle::uniform(0, 4'000'000'000ULL);
        if (gcd(a, n) != 1) continue;
        const Integer inv = mod_inv(a, n);
        CHECK(inv >= 1);
        CHECK(inv < n);
        CHECK(mod_floor(a * inv, n) == (n == 1 ? 0 : 1));
    }
}

TEST_CASE("crt examples", "[exact_arith]") {
    CHECK(crt({{0, 3}, {1, 2}}) == Congruence{3, 6});

    const auto scanned = oracle::crt_scan({{2, 5}, {3, 7}});
    REQUIRE(scanned);
    CHECK(*scanned == 17);
    CHECK(crt({{2, 5}, {3, 7}}) == Congruence{17, 35});

    try {
        crt({{1, 4}, {3, 6}});
        FAIL("expected ModuliNotCoprime");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ModuliNotCoprime);
    }
    CHECK(crt(std::span<const Congruence>{}) == Congruence{0, 1});
    CHECK(crt({{-1, 7}}) == Congruence{6, 7});
}

TEST_CASE("crt agrees with exhaustive scan", "[exact_arith][property]") {
    for (int i = 0; i < 400; ++i) {
        std::vector<std::pair<std::int64_t, std::int64_t>> raw;
        std::vector<Congruence> system;
        std::int64_t prod = 1;
        const int parts = static_cast<int>(oracle::uniform(1, 3));
        for (int j = 0; j < parts; ++j) {
            const auto m = static_cast<std::int64_t>(oracle::uniform(1, 40));
            bool coprime = true;
            for (const auto& [r, mm] : raw) coprime = coprime && std::gcd(mm, m) == 1;
            if (!coprime || prod * m > 10'000) continue;
            const auto r = static_cast<std::int64_t>(oracle::uniform(0, 100)) - 50;
            raw.push_back({r, m});
            system.push_back({r, m});
            prod *= m;
        }
        const auto expect = oracle::crt_scan(raw);
        REQUIRE(expect);
        const auto got = crt(system);
        CHECK(got.residue == *expect);
        CHECK(got.modulus == prod);
    }
}

TEST_CASE("factorize examples", "[exact_arith]") {
    CHECK(factorize(45ULL) == PrimePowerFactorization{{3, 2}, {5, 1}});
    CHECK(factorize(1ULL).empty());
    CHECK(factorize(97ULL) == PrimePowerFactorization{{97, 1}});
    try {
        factorize(kFactorBound + 1);
        FAIL("expected TooLargeToFactor");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooLargeToFactor);
    }
    CHECK_THROWS_AS(factorize(Integer("100000000000000000000")), Error);
}

TEST_CASE("factorize reconstructs with prime keys", "[exact_arith][property]") {
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t n = oracle::uniform(1, kFactorBound);
        std::uint64_t product = 1;
        for (const auto& [p, e] : factorize(n)) {
            CHECK(is_prime(p));
            for (unsigned j = 0; j < e; ++j) product *= p;
        }
        CHECK(product == n);
    }
    CHECK(factorize(999'983ULL * 999'979ULL) == PrimePowerFactorization{{999'979, 1}, {999'983, 1}});
}

TEST_CASE("squarefree status", "[exact_arith]") {
    CHECK(squarefree_status(1) == Squarefree::yes);
    CHECK(squarefree_status(12) == Squarefree::no);
    CHECK(squarefree_status(30) == Squarefree::yes);
    const Integer p = 1'000'003;  // prime above the trial-division limit
    const Integer q = 1'000'033;  // prime
    CHECK(squarefree_status(p * p) == Squarefree::no);
    CHECK(squarefree_status(p * q) == Squarefree::yes);
    CHECK(squarefree_status(p * p * 6) == Squarefree::no);
    CHECK(squarefree_status(p * q * 7) == Squarefree::yes);
    CHECK(squarefree_status(Integer(4) * p * q * 1'000'037) == Squarefree::no);
}

TEST_CASE("rationals stay normalized", "[exact_arith]") {
    const Rational r(-6, 4);
    CHECK(numerator_of(r) == -3);
    CHECK(denominator_of(r) == 2);
    CHECK_FALSE(is_integral(r));
    CHECK(to_integer(Rational(10, 5)) == 2);
    CHECK_THROWS_AS(to_integer(r), Error);
}

TEST_CASE("parse_integer", "[exact_arith]") {
    CHECK(parse_integer("-17") == -17);
    CHECK(parse_integer("+5") == 5);
    CHECK(parse_integer("1000000000000000000000") == Integer("1000000000000000000000"));
    CHECK_THROWS_AS(parse_integer(""), Error);
    CHECK_THROWS_AS(parse_integer("12a"), Error);
    CHECK_THROWS_AS(parse_integer("-"), Error);
}
