#ifndef QFCLASS_FAMILIES_HPP
#define QFCLASS_FAMILIES_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qfclass/arith.hpp"

namespace qfc {

/* How much structure a progression D = m (mod N) is required to carry.
 * nh: the averaging hypotheses on (m, N) for the 3-rank mean.
 * theorem: pair construction with shift t = 0 (mod 4).
 * lambda: pair construction with 3 inert in both fields. */
enum class Level { nh = 0, theorem = 1, lambda = 2 };

std::string_view to_string(Level level);
std::optional<Level> parse_level(std::string_view s);

enum class Clause {
    range,
    odd_prime,
    even_n,
    gcd,
    mod4,
    mod12,
    t,
};

std::string_view to_string(Clause c);

struct Violation
{
    Clause clause;
    std::string detail;
};

struct CongruenceFamily
{
    i64 m = 1; /* normalized into [1, N] */
    i64 N = 1;
    i64 t = 0;
    Level level = Level::nh;

    friend bool operator==(CongruenceFamily const &, CongruenceFamily const &) = default;
};

struct FamilyVerdict
{
    std::optional<CongruenceFamily> family;
    std::vector<Violation> violations;

    bool ok() const { return family.has_value(); }
    bool violates(Clause c) const;
    /* one line per violated clause, "<clause>: <detail>" */
    std::string describe() const;
};

class FamilyRejected : public std::invalid_argument
{
  public:
    explicit FamilyRejected(FamilyVerdict v);
    FamilyVerdict const & verdict() const { return verdict_; }

  private:
    FamilyVerdict verdict_;
};

FamilyVerdict validate(i64 m, i64 N, i64 t, Level level);

/* Smallest N, then smallest m in [1, N], valid at `level` for shift t. */
FamilyVerdict suggest(Level level, i64 t);

/* Throws FamilyRejected unless the family carries at least `level`. */
void require_level(CongruenceFamily const & f, Level level);

} // namespace qfc

#endif
