#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qfclass/arith.hpp"

using namespace qfc;

TEST_CASE("mobius on small values")
{
    CHECK(mobius(1) == 1);
    CHECK(mobius(4) == 0);
    CHECK(mobius(6) == 1);
    CHECK(mobius(30) == -1);
    CHECK(mobius(2) == -1);
}

TEST_CASE("mobius agrees with trial division up to 10^5")
{
    for (i64 n = 1; n <= 100000; ++n) {
        REQUIRE(mobius(static_cast<u64>(n)) == oracle::mobius(n));
        REQUIRE(is_squarefree(static_cast<u64>(n)) == (mobius(static_cast<u64>(n)) != 0));
    }
}

TEST_CASE("mobius and squarefree on large cofactors")
{
    // the part left after stripping small primes is prime, p*q or p^2
    u64 p = 1000003, q = 1000033;
    CHECK(mobius(p) == -1);
    CHECK(mobius(p * q) == 1);
    CHECK(mobius(p * p) == 0);
    CHECK(mobius(2 * p * q) == -1);
    CHECK_FALSE(is_squarefree(p * p));
    CHECK(is_squarefree(p * q));
    CHECK_FALSE(is_squarefree(u64{3} * 3 * 5 * 1000003));
    // 2^48 - 59 is prime
    CHECK(is_prime((u64{1} << 48) - 59));
    CHECK(mobius((u64{1} << 48) - 59) == -1);
}

TEST_CASE("is_squarefree examples")
{
    CHECK(is_squarefree(1));
    CHECK_FALSE(is_squarefree(45));
    CHECK(is_squarefree(229) == oracle::squarefree(229));
    CHECK(is_squarefree(229));
}

TEST_CASE("sieve_squarefree examples")
{
    SieveWindow w = sieve_squarefree(1, 10);
    std::vector<u64> set;
    for (u64 n = 1; n <= 10; ++n)
        if (w.is_squarefree(n))
            set.push_back(n);
    CHECK(set == std::vector<u64>{1, 2, 3, 5, 6, 7, 10});

    CHECK_FALSE(sieve_squarefree(49, 49).is_squarefree(49));
    CHECK(sieve_squarefree(1, 1).is_squarefree(1));
}

TEST_CASE("sieve agrees pointwise on random windows")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        u64 lo = 1 + rng() % 10000000;
        u64 hi = lo + rng() % 300;
        SieveWindow w = sieve_squarefree(lo, hi);
        REQUIRE(w.size() == hi - lo + 1);
        for (u64 n = lo; n <= hi; ++n)
            REQUIRE(w.is_squarefree(n) == is_squarefree(n));
    }
}

TEST_CASE("sieve rejects oversized and inverted windows")
{
    CHECK_THROWS_AS(sieve_squarefree(1, 1000, 100), WindowTooLarge);
    CHECK_THROWS_AS(sieve_squarefree(10, 5), DomainError);
    CHECK_THROWS_AS(sieve_squarefree(0, 5), DomainError);
}

TEST_CASE("kronecker examples")
{
    CHECK(kronecker(2, 3) == -1);
    CHECK(kronecker(6, 3) == 0);
    for (i64 n : {-12, -7, -1, 0, 1, 2, 8, 15, 1000})
        CHECK(kronecker(1, n) == 1);
    CHECK(kronecker(-1, -1) == -1);
    CHECK(kronecker(5, 0) == 0);
    CHECK(kronecker(-1, 0) == 1);
}

TEST_CASE("kronecker matches its definition")
{
    for (i64 a = -60; a <= 60; ++a)
        for (i64 n = -60; n <= 60; ++n)
            REQUIRE_MESSAGE(kronecker(a, n) == oracle::kronecker(a, n), "a=" << a << " n=" << n);
}

TEST_CASE("kronecker is multiplicative and periodic")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> dist(-30000, 30000);
    for (int i = 0; i < 10000; ++i) {
        i64 a = dist(rng), b = dist(rng), n = dist(rng);
        REQUIRE(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
        REQUIRE(kronecker(a, 3) == kronecker(mod_floor(a, 3), 3));
    }
}

TEST_CASE("classify_discriminant examples")
{
    auto d5 = std::get<Discriminant>(classify_discriminant(5));
    CHECK(d5.sign() == Sign::positive);
    CHECK(d5.parity_class() == ParityClass::odd);

    auto d12 = std::get<Discriminant>(classify_discriminant(12));
    CHECK(d12.sign() == Sign::positive);
    CHECK(d12.parity_class() == ParityClass::even);

    auto r9 = std::get<RejectReason>(classify_discriminant(9));
    CHECK((r9 == RejectReason::perfect_square || r9 == RejectReason::not_squarefree_core));

    auto dm23 = std::get<Discriminant>(classify_discriminant(-23));
    CHECK(dm23.sign() == Sign::negative);
    CHECK(dm23.parity_class() == ParityClass::odd);

    CHECK(std::get<RejectReason>(classify_discriminant(1)) == RejectReason::is_one);
    CHECK(std::get<RejectReason>(classify_discriminant(7)) == RejectReason::not_0_or_1_mod_4);
    CHECK(std::get<RejectReason>(classify_discriminant(20)) == RejectReason::not_squarefree_core);
    CHECK(std::get<RejectReason>(classify_discriminant(16)) == RejectReason::perfect_square);
    CHECK_THROWS_AS(make_discriminant(45), DomainError);
}

TEST_CASE("classify_discriminant matches the definition on |d| <= 10^4")
{
    for (i64 d = -10000; d <= 10000; ++d) {
        bool accepted = std::holds_alternative<Discriminant>(classify_discriminant(d));
        REQUIRE_MESSAGE(accepted == oracle::fundamental(d), "d=" << d);
        if (accepted) {
            auto D = std::get<Discriminant>(classify_discriminant(d));
            CHECK(D.value() == d);
            CHECK((D.parity_class() == ParityClass::odd) == (mod_floor(d, 4) == 1));
        }
    }
}

TEST_CASE("count_squarefree_in_ap examples")
{
    CHECK(oracle::count_squarefree_ap(100, 4, 1) == 20);
    CHECK(count_squarefree_in_ap(100, 4, 1).count == 20);
    CHECK(oracle::count_squarefree_ap(10, 1, 1) == 7);
    CHECK(count_squarefree_in_ap(10, 1, 1).count == 7);

    auto big = count_squarefree_in_ap(1000000, 12, 5);
    CHECK(big.main_term == doctest::Approx(0.0506606 * 1.5 * 1e6).epsilon(1e-5));
    CHECK(big.relative_error <= 0.02);
    CHECK(big.relative_error
          == doctest::Approx(std::abs(big.count - big.main_term) / big.main_term));
}

TEST_CASE("count_squarefree_in_ap matches enumeration")
{
    for (i64 k = 1; k <= 30; ++k)
        for (i64 l = 1; l <= k; ++l)
            if (std::gcd(k, l) == 1)
                REQUIRE(count_squarefree_in_ap(3000, k, l).count
                        == oracle::count_squarefree_ap(3000, k, l));
}

TEST_CASE("count_squarefree_in_ap rejects non-coprime residues")
{
    CHECK_THROWS_AS(count_squarefree_in_ap(100, 4, 2), DomainError);
    CHECK_THROWS_AS(count_squarefree_in_ap(100, 4, 5), DomainError);
    CHECK_THROWS_AS(count_squarefree_in_ap(100, 0, 1), DomainError);
}

TEST_CASE("residue counts partition the squarefree count")
{
    i64 const X = 50000;
    i64 total = count_squarefree_in_ap(X, 1, 1).count;
    SieveWindow w = sieve_squarefree(1, X);
    for (i64 k : {4, 12, 30, 49}) {
        i64 sum = 0;
        for (i64 l = 1; l <= k; ++l) {
            if (std::gcd(k, l) == 1) {
                sum += count_squarefree_in_ap(X, k, l).count;
            } else {
                for (i64 n = l; n <= X; n += k)
                    sum += w.is_squarefree(static_cast<u64>(n)) ? 1 : 0;
            }
        }
        CHECK(sum == total);
    }
}

TEST_CASE("isqrt is exact")
{
    for (u64 n : {u64{0}, u64{1}, u64{3}, u64{4}, u64{99}, u64{100}, (u64{1} << 48) - 1,
                  u64{1} << 48, ~u64{0}}) {
        u64 r = isqrt(n);
        CHECK(static_cast<unsigned __int128>(r) * r <= n);
        CHECK(static_cast<unsigned __int128>(r + 1) * (r + 1) > n);
    }
}
