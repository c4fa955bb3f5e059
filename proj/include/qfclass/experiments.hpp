#ifndef QFCLASS_EXPERIMENTS_HPP
#define QFCLASS_EXPERIMENTS_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfclass/arith.hpp"
#include "qfclass/families.hpp"
#include "qfclass/forms.hpp"

namespace qfc {

inline constexpr double kNhLimit = 4.0 / 3.0;
inline constexpr double kIndivisibilityBound = 5.0 / 6.0;
inline constexpr double kPairSingleBound = 5.0 / (std::numbers::pi * std::numbers::pi);
inline constexpr double kPairIntersectionBound =
        (10.0 - std::numbers::pi * std::numbers::pi) / (std::numbers::pi * std::numbers::pi);
inline constexpr double kImaginaryBound = 0.5;

/* A cached record disagrees with a fresh computation, or a record is
 * malformed. */
class CacheCorruption : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/* Append-only store of per-discriminant results. Inserting a value that
 * differs from the one already stored throws CacheCorruption. */
class ClassInfoCache
{
  public:
    std::optional<ClassGroupInfo> find(i64 D) const;
    void insert(ClassGroupInfo const & info);
    std::size_t size() const { return entries_.size(); }
    /* sorted by D */
    std::vector<ClassGroupInfo> records() const;

  private:
    std::map<i64, ClassGroupInfo> entries_;
};

struct RunOptions
{
    int jobs = 1;
    ClassInfoCache * cache = nullptr;
    std::ostream * progress = nullptr;
};

/* class_group_info for every entry, fanned out over opts.jobs workers and
 * served from / added to opts.cache. Output order matches input order. */
std::vector<ClassGroupInfo> compute_class_infos(std::span<Discriminant const> ds,
                                                RunOptions const & opts);

/* #{lo <= D <= hi : D = m (mod N)} */
i64 progression_count(i64 lo, i64 hi, i64 m, i64 N);

/* Fundamental 0 < D < X with D = m (mod N), increasing. */
std::vector<Discriminant> enumerate_s_plus(i64 X, CongruenceFamily const & family);

/* Fundamental -X < D < 0 with D = m (mod N), by increasing |D|. */
std::vector<Discriminant> enumerate_s_minus(i64 X, CongruenceFamily const & family);

/* {10^3, 10^4, 10^5, 10^6} below X, then X itself. */
std::vector<i64> default_checkpoints(i64 X);

/* Throws std::invalid_argument unless strictly increasing within [1, X]. */
void validate_checkpoints(i64 X, std::span<i64 const> checkpoints);

struct CheckpointRow
{
    i64 x = 0;
    i64 count_S = 0;
    i64 count_S_plus = 0;
    i64 count_L = 0;
    i64 count_Lt = 0;
    i64 count_intersection = 0;
    i64 count_union = 0;
    i64 count_r3_zero = 0;
    i64 sum_three_torsion = 0;
    std::optional<double> ratio_L;
    std::optional<double> ratio_Lt;
    std::optional<double> ratio_intersection;
    std::optional<double> nh_average;
    double target_bound = 0.0;
    bool no_data = false;
    /* S+ reports: 2 #{r3 = 0} / |S+| >= 3 - avg 3^r3, exactly */
    std::optional<double> proof_lhs;
    std::optional<double> proof_rhs;
    std::optional<bool> proof_holds;
    /* pair reports: |L cap Lt| = |L| + |Lt| - |L cup Lt| */
    std::optional<bool> inclusion_exclusion_holds;
};

struct Bound
{
    std::string ratio;
    double value;
};

struct DensityReport
{
    std::string experiment;
    std::string denominator;
    CongruenceFamily family;
    i64 X = 0;
    double target_bound = 0.0;
    std::vector<Bound> bounds;
    std::vector<CheckpointRow> checkpoints;
};

DensityReport nh_average(i64 X, CongruenceFamily const & family,
                         std::span<i64 const> checkpoints, RunOptions const & opts = {});

DensityReport indivisibility_density(i64 X, CongruenceFamily const & family,
                                     std::span<i64 const> checkpoints,
                                     RunOptions const & opts = {});

/* Requires a theorem-level family. Counts over S(X) = {1 <= D <= X}. */
DensityReport pair_experiment(i64 X, CongruenceFamily const & family,
                              std::span<i64 const> checkpoints, RunOptions const & opts = {});

struct Lambda3Certificate
{
    i64 D = 0;
    i64 t = 0;
    int legendre_D = 0;
    int legendre_Dt = 0;
    int h_D_mod3 = 0;
    int h_Dt_mod3 = 0;
};

struct LambdaSurvey
{
    std::vector<Lambda3Certificate> certificates;
    DensityReport report;
};

/* Requires a lambda-level family. Every D in L(X) cap L_t(X) becomes a
 * certificate after its constraints are rechecked from scratch. */
LambdaSurvey lambda_survey(i64 X, CongruenceFamily const & family,
                           std::span<i64 const> checkpoints, RunOptions const & opts = {});

DensityReport imaginary_density(i64 X, CongruenceFamily const & family,
                                std::span<i64 const> checkpoints, RunOptions const & opts = {});

} // namespace qfc

#endif
