#include "qfclass/families.hpp"

#include <numeric>

namespace qfc {

namespace {

std::string num(i64 v) { return std::to_string(v); }

/* Averaging hypotheses on a progression m (mod N); `who` names the
 * residue in messages ("m" or "m+t"). */
void check_progression(i64 m, i64 N, std::string const & who, std::vector<Violation> & out)
{
    i64 g = std::gcd(m, N);
    for (u64 p : prime_divisors(static_cast<u64>(g))) {
        if (p == 2)
            continue;
        i64 pp = static_cast<i64>(p * p);
        if (N % pp != 0 || m % pp == 0)
            out.push_back({Clause::odd_prime,
                           num(static_cast<i64>(p)) + " divides gcd(" + who + ", N) = " + num(g)
                                   + " but not (N = 0 mod " + num(pp) + " and " + who
                                   + " != 0 mod " + num(pp) + ")"});
    }
    if (N % 2 == 0) {
        bool first = N % 4 == 0 && m % 4 == 1;
        bool second = N % 16 == 0 && (m % 16 == 8 || m % 16 == 12);
        if (!first && !second)
            out.push_back({Clause::even_n,
                           "N = " + num(N) + " is even but neither (N = 0 mod 4 and " + who
                                   + " = 1 mod 4) nor (N = 0 mod 16 and " + who
                                   + " = 8, 12 mod 16); " + who + " = " + num(m)});
    }
}

i64 normalize(i64 m, i64 N)
{
    i64 r = mod_floor(m, N);
    return r == 0 ? N : r;
}

} // namespace

std::string_view to_string(Level level)
{
    switch (level) {
    case Level::nh: return "nh";
    case Level::theorem: return "theorem";
    case Level::lambda: return "lambda";
    }
    return "unknown";
}

std::optional<Level> parse_level(std::string_view s)
{
    if (s == "nh")
        return Level::nh;
    if (s == "theorem")
        return Level::theorem;
    if (s == "lambda")
        return Level::lambda;
    return std::nullopt;
}

std::string_view to_string(Clause c)
{
    switch (c) {
    case Clause::range: return "range clause";
    case Clause::odd_prime: return "odd-prime clause";
    case Clause::even_n: return "even-N clause";
    case Clause::gcd: return "gcd clause";
    case Clause::mod4: return "mod-4 clause";
    case Clause::mod12: return "mod-12 clause";
    case Clause::t: return "t-clause";
    }
    return "unknown clause";
}

bool FamilyVerdict::violates(Clause c) const
{
    for (auto const & v : violations)
        if (v.clause == c)
            return true;
    return false;
}

std::string FamilyVerdict::describe() const
{
    std::string out;
    for (auto const & v : violations) {
        out += to_string(v.clause);
        out += ": ";
        out += v.detail;
        out += '\n';
    }
    return out;
}

FamilyRejected::FamilyRejected(FamilyVerdict v)
    : std::invalid_argument("congruence family rejected:\n" + v.describe())
    , verdict_(std::move(v))
{
}

FamilyVerdict validate(i64 m, i64 N, i64 t, Level level)
{
    FamilyVerdict verdict;
    auto & out = verdict.violations;
    if (m < 1)
        out.push_back({Clause::range, "m = " + num(m) + " must be >= 1"});
    if (N < 1)
        out.push_back({Clause::range, "N = " + num(N) + " must be >= 1"});
    if (t < 0)
        out.push_back({Clause::range, "t = " + num(t) + " must be >= 0"});
    if (!out.empty())
        return verdict;

    i64 mn = normalize(m, N);
    check_progression(mn, N, "m", out);

    if (level >= Level::theorem) {
        i64 shifted = normalize(mn + t, N);
        if (level == Level::theorem && (t < 1 || t % 4 != 0))
            out.push_back({Clause::t, "t = " + num(t) + " must be >= 1 with t = 0 (mod 4)"});
        if (level == Level::lambda && (t < 1 || t % 12 != 0))
            out.push_back({Clause::t, "t = " + num(t) + " must be >= 1 with t = 0 (mod 12)"});
        if (std::gcd(mn, N) != 1 || std::gcd(shifted, N) != 1)
            out.push_back({Clause::gcd, "gcd(m, N) = " + num(std::gcd(mn, N))
                                                + " and gcd(m+t, N) = "
                                                + num(std::gcd(shifted, N)) + " must both be 1"});
        if (mn % 4 != 1 || N % 4 != 0)
            out.push_back({Clause::mod4, "need m = 1 (mod 4) and N = 0 (mod 4); m = " + num(mn)
                                                 + ", N = " + num(N)});
        check_progression(shifted, N, "m+t", out);
    }
    if (level == Level::lambda && (mn % 12 != 5 || N % 12 != 0))
        out.push_back({Clause::mod12, "need m = 5 (mod 12) and N = 0 (mod 12); m = " + num(mn)
                                              + ", N = " + num(N)});

    if (out.empty())
        verdict.family = CongruenceFamily{mn, N, t, level};
    return verdict;
}

FamilyVerdict suggest(Level level, i64 t)
{
    FamilyVerdict verdict;
    if (t < 0 || (level == Level::theorem && (t < 1 || t % 4 != 0))
        || (level == Level::lambda && (t < 1 || t % 12 != 0))) {
        verdict.violations.push_back(
                {Clause::t, "t = " + num(t) + " is incompatible with level "
                                    + std::string(to_string(level))});
        return verdict;
    }
    // (1, 1), (1, 4) and (5, 12) are valid at nh, theorem and lambda
    for (i64 N = 1; N <= 12; ++N) {
        for (i64 m = 1; m <= N; ++m) {
            FamilyVerdict v = validate(m, N, t, level);
            if (v.ok())
                return v;
        }
    }
    verdict.violations.push_back({Clause::range, "no family found"});
    return verdict;
}

void require_level(CongruenceFamily const & f, Level level)
{
    FamilyVerdict v = validate(f.m, f.N, f.t, level);
    if (!v.ok())
        throw FamilyRejected(std::move(v));
}

} // namespace qfc
