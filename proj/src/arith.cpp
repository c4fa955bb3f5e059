#include "qfclass/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace qfc {

namespace {

// cbrt(2^64) < 2642246
constexpr std::uint32_t kSmallPrimeLimit = 2642246;

u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

/*
 * Strips prime factors p with p^3 <= cofactor. Returns the number of
 * distinct primes removed, or -1 if some p^2 divides n. The cofactor left
 * in `rest` is 1, a prime, a product of two distinct primes, or a square
 * of a prime.
 */
int strip_small_factors(u64 n, u64 & rest)
{
    int count = 0;
    for (std::uint32_t p : small_primes()) {
        u64 pp = p;
        if (pp * pp > n / pp)
            break;
        if (n % pp == 0) {
            n /= pp;
            if (n % pp == 0)
                return -1;
            ++count;
        }
    }
    rest = n;
    return count;
}

std::vector<std::uint32_t> primes_for_sieve(u64 hi)
{
    u64 root = isqrt(hi);
    if (root <= kSmallPrimeLimit) {
        auto sp = small_primes();
        auto end = std::upper_bound(sp.begin(), sp.end(), root);
        return {sp.begin(), end};
    }
    return primes_up_to(static_cast<std::uint32_t>(root));
}

} // namespace

u64 isqrt(u64 n)
{
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && (r > 0xFFFFFFFFull || r * r > n))
        --r;
    while (r + 1 <= 0xFFFFFFFFull && (r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

bool is_perfect_square(i64 n)
{
    if (n < 0)
        return false;
    u64 r = isqrt(static_cast<u64>(n));
    return r * r == static_cast<u64>(n);
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit)
{
    std::vector<std::uint32_t> out;
    if (limit < 2)
        return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (u64 j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return out;
}

std::span<const std::uint32_t> small_primes()
{
    static const std::vector<std::uint32_t> table = primes_up_to(kSmallPrimeLimit);
    return table;
}

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

int mobius(u64 n)
{
    u64 rest = 1;
    int count = strip_small_factors(n, rest);
    if (count < 0)
        return 0;
    if (rest > 1) {
        if (is_perfect_square(static_cast<i64>(rest)))
            return 0;
        count += is_prime(rest) ? 1 : 2;
    }
    return (count & 1) ? -1 : 1;
}

bool is_squarefree(u64 n)
{
    u64 rest = 1;
    if (strip_small_factors(n, rest) < 0)
        return false;
    return rest == 1 || !is_perfect_square(static_cast<i64>(rest));
}

std::vector<u64> prime_divisors(u64 n)
{
    std::vector<u64> out;
    for (std::uint32_t p : small_primes()) {
        u64 pp = p;
        if (pp * pp > n)
            break;
        if (n % pp == 0) {
            out.push_back(pp);
            while (n % pp == 0)
                n /= pp;
        }
    }
    if (n > 1) {
        // no factor below cbrt(2^64) remains, so n is p or p*q
        if (is_prime(n)) {
            out.push_back(n);
        } else {
            u64 r = isqrt(n);
            if (r * r == n) {
                out.push_back(r);
            } else {
                throw DomainError("prime_divisors: cofactor " + std::to_string(n)
                                  + " has two large prime factors");
            }
        }
    }
    return out;
}

SieveWindow sieve_squarefree(u64 lo, u64 hi, std::size_t max_entries)
{
    if (lo < 1 || hi < lo)
        throw DomainError("sieve_squarefree: need 1 <= lo <= hi");
    u64 width = hi - lo + 1;
    if (width > max_entries)
        throw WindowTooLarge("sieve window of " + std::to_string(width)
                             + " entries exceeds the bound of "
                             + std::to_string(max_entries));

    SieveWindow w;
    w.lo = lo;
    w.hi = hi;
    w.squarefree_flags.assign(width, true);
    for (std::uint32_t p : primes_for_sieve(hi)) {
        u64 sq = u64{p} * p;
        u64 first = (lo + sq - 1) / sq * sq;
        for (u64 j = first; j <= hi; j += sq)
            w.squarefree_flags[j - lo] = false;
    }
    return w;
}

int kronecker(i64 a, i64 n)
{
    // (a/2) for odd a, indexed by a mod 8
    static constexpr int two_table[8] = {0, 1, 0, -1, 0, -1, 0, 1};

    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0)
        return 0;

    int k = 1;
    int v = 0;
    while ((n & 1) == 0) {
        n /= 2;
        ++v;
    }
    if (v & 1)
        k = two_table[a & 7];
    if (n < 0) {
        n = -n;
        if (a < 0)
            k = -k;
    }

    // Jacobi symbol (a/n), n odd and positive
    u64 b = static_cast<u64>(n);
    u64 x = static_cast<u64>(mod_floor(a, n));
    while (x != 0) {
        int t = 0;
        while ((x & 1) == 0) {
            x >>= 1;
            ++t;
        }
        if ((t & 1) && (b % 8 == 3 || b % 8 == 5))
            k = -k;
        if (x % 4 == 3 && b % 4 == 3)
            k = -k;
        std::swap(x, b);
        x %= b;
    }
    return b == 1 ? k : 0;
}

std::string_view to_string(RejectReason r)
{
    switch (r) {
    case RejectReason::not_0_or_1_mod_4: return "not-0-or-1-mod-4";
    case RejectReason::not_squarefree_core: return "not-squarefree-core";
    case RejectReason::perfect_square: return "perfect-square";
    case RejectReason::is_one: return "is-one";
    }
    return "unknown";
}

Classification classify_discriminant(i64 d)
{
    if (d == 1)
        return RejectReason::is_one;
    i64 r = mod_floor(d, 4);
    if (r == 2 || r == 3)
        return RejectReason::not_0_or_1_mod_4;
    if (is_perfect_square(d))
        return RejectReason::perfect_square;
    u64 mag = d < 0 ? static_cast<u64>(-d) : static_cast<u64>(d);
    if (r == 1) {
        if (!is_squarefree(mag))
            return RejectReason::not_squarefree_core;
        return Discriminant(d, ParityClass::odd);
    }
    i64 core = d / 4;
    i64 cr = mod_floor(core, 4);
    if ((cr != 2 && cr != 3) || !is_squarefree(mag / 4))
        return RejectReason::not_squarefree_core;
    return Discriminant(d, ParityClass::even);
}

Discriminant make_discriminant(i64 d)
{
    auto c = classify_discriminant(d);
    if (auto const * r = std::get_if<RejectReason>(&c))
        throw DomainError(std::to_string(d) + " is not a fundamental discriminant ("
                          + std::string(to_string(*r)) + ")");
    return std::get<Discriminant>(c);
}

bool is_fundamental(i64 d)
{
    return std::holds_alternative<Discriminant>(classify_discriminant(d));
}

double squarefree_ap_density(i64 k)
{
    double density = 6.0 / (static_cast<double>(k) * std::numbers::pi * std::numbers::pi);
    for (u64 p : prime_divisors(static_cast<u64>(k))) {
        double pp = static_cast<double>(p) * static_cast<double>(p);
        density /= (1.0 - 1.0 / pp);
    }
    return density;
}

SquarefreeAPCount count_squarefree_in_ap(i64 X, i64 k, i64 l)
{
    if (k < 1 || l < 1 || l > k)
        throw DomainError("count_squarefree_in_ap: need k >= 1 and 1 <= l <= k");
    if (std::gcd(k, l) != 1)
        throw DomainError("count_squarefree_in_ap: gcd(k, l) = "
                          + std::to_string(std::gcd(k, l)) + " != 1");

    SquarefreeAPCount out;
    out.X = X;
    out.k = k;
    out.l = l;

    constexpr u64 segment = u64{1} << 22;
    for (u64 lo = 1; X >= 1 && lo <= static_cast<u64>(X); lo += segment) {
        u64 hi = std::min<u64>(static_cast<u64>(X), lo + segment - 1);
        SieveWindow w = sieve_squarefree(lo, hi);
        // first n >= lo with n = l (mod k)
        u64 uk = static_cast<u64>(k);
        u64 start = lo + (static_cast<u64>(l) + uk - lo % uk) % uk;
        for (u64 n = start; n <= hi; n += uk)
            out.count += w.is_squarefree(n) ? 1 : 0;
    }

    out.main_term = squarefree_ap_density(k) * static_cast<double>(X);
    out.relative_error = out.main_term > 0
            ? std::abs(static_cast<double>(out.count) - out.main_term) / out.main_term
            : 0.0;
    return out;
}

} // namespace qfc
