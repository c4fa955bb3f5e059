#ifndef QFCLASS_ARITH_HPP
#define QFCLASS_ARITH_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace qfc {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

/* Raised when an argument lies outside the mathematical domain of an
 * operation (square discriminant, mismatched discriminants, ...). */
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

class WindowTooLarge : public std::length_error
{
  public:
    using std::length_error::length_error;
};

u64 isqrt(u64 n);
bool is_perfect_square(i64 n);

/* floor-mod: result in [0, m) for m > 0 */
constexpr i64 mod_floor(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

/* Primes <= limit, sieve of Eratosthenes. */
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/* Shared table of primes up to cbrt(2^64); built once, read-only. */
std::span<const std::uint32_t> small_primes();

/* Deterministic for all 64-bit n. */
bool is_prime(u64 n);

int mobius(u64 n);
bool is_squarefree(u64 n);

/* Distinct prime divisors in increasing order. */
std::vector<u64> prime_divisors(u64 n);

struct SieveWindow
{
    u64 lo = 1;
    u64 hi = 0;
    std::vector<bool> squarefree_flags;

    std::size_t size() const { return squarefree_flags.size(); }
    bool contains(u64 n) const { return n >= lo && n <= hi; }
    bool is_squarefree(u64 n) const { return squarefree_flags[n - lo]; }
};

inline constexpr std::size_t kDefaultSieveEntries = std::size_t{1} << 30;

/* Flags every n in [lo, hi] with mu(n) != 0 by striking multiples of p^2.
 * Throws WindowTooLarge when hi - lo + 1 exceeds max_entries. */
SieveWindow sieve_squarefree(u64 lo, u64 hi,
                             std::size_t max_entries = kDefaultSieveEntries);

/* General Kronecker symbol (a/n) for any integers a, n. */
int kronecker(i64 a, i64 n);

enum class Sign { positive, negative };
enum class ParityClass { odd, even };

enum class RejectReason {
    not_0_or_1_mod_4,
    not_squarefree_core,
    perfect_square,
    is_one,
};

std::string_view to_string(RejectReason r);

class Discriminant;

using Classification = std::variant<Discriminant, RejectReason>;

/*
 * A fundamental discriminant: squarefree and = 1 (mod 4), or 4m with m
 * squarefree and m = 2, 3 (mod 4). d = 1 and positive squares are never
 * fundamental here. Instances only come out of classify_discriminant.
 */
class Discriminant
{
    i64 value_;
    ParityClass parity_;

    Discriminant(i64 v, ParityClass p) : value_(v), parity_(p) {}

    friend Classification classify_discriminant(i64 d);

  public:
    i64 value() const { return value_; }
    Sign sign() const { return value_ > 0 ? Sign::positive : Sign::negative; }
    ParityClass parity_class() const { return parity_; }
    bool is_real() const { return value_ > 0; }

    friend bool operator==(Discriminant const & x, Discriminant const & y)
    {
        return x.value_ == y.value_;
    }
    friend auto operator<=>(Discriminant const & x, Discriminant const & y)
    {
        return x.value_ <=> y.value_;
    }
};

Classification classify_discriminant(i64 d);

/* classify_discriminant, throwing DomainError on rejection. */
Discriminant make_discriminant(i64 d);

bool is_fundamental(i64 d);

struct SquarefreeAPCount
{
    i64 X = 0;
    i64 k = 1;
    i64 l = 1;
    i64 count = 0;
    double main_term = 0.0;
    double relative_error = 0.0;
};

/* 6/(k pi^2) * prod_{p | k} (1 - p^-2)^-1, the density of squarefree
 * integers in a reduced residue class mod k. */
double squarefree_ap_density(i64 k);

/* #{1 <= n <= X : n = l (mod k), mu(n) != 0} against its main term.
 * Throws DomainError unless k >= 1, 1 <= l <= k, gcd(k, l) = 1. */
SquarefreeAPCount count_squarefree_in_ap(i64 X, i64 k, i64 l);

} // namespace qfc

#endif
