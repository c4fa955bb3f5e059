#include "qfclass/experiments.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <random>

#include "qfclass/parallel.hpp"

namespace qfc {

namespace {

/* Fundamental-discriminant test for 0 < |d| <= w.hi using sieve flags. */
bool fundamental_in(SieveWindow const & w, i64 d)
{
    if (d == 0 || d == 1)
        return false;
    u64 mag = d < 0 ? static_cast<u64>(-d) : static_cast<u64>(d);
    i64 r = mod_floor(d, 4);
    if (r == 1)
        return w.is_squarefree(mag);
    if (r != 0)
        return false;
    i64 cr = mod_floor(d / 4, 4);
    return (cr == 2 || cr == 3) && w.is_squarefree(mag / 4);
}

/* first D >= lo with D = m (mod N) */
i64 first_in_progression(i64 lo, i64 m, i64 N)
{
    return lo + mod_floor(m - lo, N);
}

double ratio(i64 num, i64 den) { return static_cast<double>(num) / static_cast<double>(den); }

void check_ratio(std::optional<double> const & r, char const * what)
{
    if (r && (*r < 0.0 || *r > 1.0))
        throw std::logic_error(std::string(what) + " outside [0, 1]");
}

/* Per-discriminant summary the S+ and S- aggregations need. */
struct Tally
{
    i64 key; /* |D| */
    bool indivisible;
    bool r3_zero;
    i64 three_torsion;
};

std::vector<Tally> tally(std::vector<Discriminant> const & ds, RunOptions const & opts)
{
    std::vector<ClassGroupInfo> infos = compute_class_infos(ds, opts);
    std::vector<Tally> out;
    out.reserve(infos.size());
    for (auto const & info : infos) {
        i64 v = info.D.value();
        out.push_back({v < 0 ? -v : v, info.h % 3 != 0, info.r3 == 0, info.three_torsion_count});
    }
    return out;
}

/*
 * Rows for reports whose denominator is a set of fundamental discriminants
 * with |D| < x. count_S counts the whole progression over the same range;
 * `sign` selects positive or negative D.
 */
std::vector<CheckpointRow> progression_rows(std::vector<Tally> const & tallies, CongruenceFamily const & f,
                                      std::span<i64 const> checkpoints, int sign, double target)
{
    std::vector<CheckpointRow> rows;
    std::size_t pos = 0;
    CheckpointRow acc;
    for (i64 x : checkpoints) {
        while (pos < tallies.size() && tallies[pos].key < x) {
            auto const & t = tallies[pos++];
            ++acc.count_S_plus;
            acc.count_L += t.indivisible ? 1 : 0;
            acc.count_r3_zero += t.r3_zero ? 1 : 0;
            acc.sum_three_torsion += t.three_torsion;
        }
        CheckpointRow row = acc;
        row.x = x;
        row.count_S = sign > 0 ? progression_count(1, x - 1, f.m, f.N)
                               : progression_count(-(x - 1), -1, f.m, f.N);
        row.target_bound = target;
        if (row.count_L != row.count_r3_zero)
            throw std::logic_error("#{3 does not divide h} differs from #{r3 = 0}");
        if (row.count_S_plus == 0) {
            row.no_data = true;
        } else {
            i64 n = row.count_S_plus;
            row.ratio_L = ratio(row.count_L, n);
            row.nh_average = ratio(row.sum_three_torsion, n);
            row.proof_lhs = 2.0 * ratio(row.count_r3_zero, n);
            row.proof_rhs = 3.0 - *row.nh_average;
            row.proof_holds = 2 * row.count_r3_zero >= 3 * n - row.sum_three_torsion;
            if (!*row.proof_holds)
                throw std::logic_error("2 #{r3 = 0} >= 3 |S+| - sum 3^r3 fails");
            if (*row.nh_average < 1.0)
                throw std::logic_error("average of 3^r3 below 1");
            check_ratio(row.ratio_L, "ratio_L");
        }
        rows.push_back(row);
    }
    return rows;
}

DensityReport progression_report(char const * name, i64 X, CongruenceFamily const & family,
                           std::span<i64 const> checkpoints, RunOptions const & opts, double target)
{
    validate_checkpoints(X, checkpoints);
    auto tallies = tally(enumerate_s_plus(X, family), opts);
    DensityReport report;
    report.experiment = name;
    report.denominator = "S_plus";
    report.family = family;
    report.X = X;
    report.target_bound = target;
    report.bounds = {{"ratio_L", kIndivisibilityBound}, {"nh_average", kNhLimit}};
    report.checkpoints = progression_rows(tallies, family, checkpoints, +1, target);
    return report;
}

struct PairData
{
    DensityReport report;
    /* D in L(X) cap L_t(X), increasing */
    std::vector<i64> intersection;
};

bool in_L_fresh(i64 D, CongruenceFamily const & f)
{
    if (D < 1 || mod_floor(D - f.m, f.N) != 0)
        return false;
    if (mobius(static_cast<u64>(D)) == 0 || !is_fundamental(D))
        return false;
    return class_group_info(make_discriminant(D)).h % 3 != 0;
}

PairData run_pairs(char const * name, i64 X, CongruenceFamily const & f,
                   std::span<i64 const> checkpoints, RunOptions const & opts)
{
    validate_checkpoints(X, checkpoints);
    i64 const t = f.t;
    std::vector<i64> members;
    for (i64 D = first_in_progression(1, f.m, f.N); D <= X; D += f.N)
        members.push_back(D);

    SieveWindow sieve = sieve_squarefree(1, static_cast<u64>(std::max<i64>(X + t, 1)));
    std::vector<char> fund(members.size()), fund_t(members.size());
    std::vector<Discriminant> needed;
    for (std::size_t i = 0; i < members.size(); ++i) {
        i64 D = members[i];
        bool sf = sieve.is_squarefree(static_cast<u64>(D));
        bool sf_t = sieve.is_squarefree(static_cast<u64>(D + t));
        fund[i] = fundamental_in(sieve, D);
        fund_t[i] = fundamental_in(sieve, D + t);
        // for these families D and D + t are 1 mod 4, so squarefree means
        // fundamental (D = 1 aside, which is no field)
        if ((sf && D != 1 && !fund[i]) || (sf_t && !fund_t[i]))
            throw std::logic_error("squarefree member of the progression is not fundamental");
        if (fund[i])
            needed.push_back(make_discriminant(D));
        if (fund_t[i])
            needed.push_back(make_discriminant(D + t));
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    std::vector<ClassGroupInfo> infos = compute_class_infos(needed, opts);

    auto indivisible = [&](i64 d) {
        auto it = std::lower_bound(infos.begin(), infos.end(), d,
                                   [](ClassGroupInfo const & x, i64 v) { return x.D.value() < v; });
        return it->h % 3 != 0;
    };

    std::vector<char> in_L(members.size()), in_Lt(members.size());
    PairData out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        in_L[i] = fund[i] && indivisible(members[i]);
        in_Lt[i] = fund_t[i] && indivisible(members[i] + t);
        if (in_L[i] && in_Lt[i])
            out.intersection.push_back(members[i]);
    }

    std::mt19937_64 rng(0x5eed0f3ull ^ static_cast<u64>(X) ^ (static_cast<u64>(f.m) << 20)
                        ^ (static_cast<u64>(f.N) << 40) ^ static_cast<u64>(t));
    std::size_t samples = std::min<std::size_t>(100, members.size());
    for (std::size_t s = 0; s < samples; ++s) {
        std::size_t i = static_cast<std::size_t>(rng() % members.size());
        CongruenceFamily shifted = f;
        shifted.m = mod_floor(f.m + t, f.N);
        bool L = in_L_fresh(members[i], f);
        bool Lt = in_L_fresh(members[i] + t, shifted);
        if (L != static_cast<bool>(in_L[i]) || Lt != static_cast<bool>(in_Lt[i]))
            throw std::logic_error("set membership disagrees with recomputation at D = "
                                   + std::to_string(members[i]));
    }

    DensityReport & report = out.report;
    report.experiment = name;
    report.denominator = "S";
    report.family = f;
    report.X = X;
    report.target_bound = kPairIntersectionBound;
    report.bounds = {{"ratio_L", kPairSingleBound},
                     {"ratio_Lt", kPairSingleBound},
                     {"ratio_intersection", kPairIntersectionBound}};

    std::size_t pos = 0;
    CheckpointRow acc;
    for (i64 x : checkpoints) {
        for (; pos < members.size() && members[pos] <= x; ++pos) {
            ++acc.count_S;
            acc.count_S_plus += fund[pos] ? 1 : 0;
            acc.count_L += in_L[pos] ? 1 : 0;
            acc.count_Lt += in_Lt[pos] ? 1 : 0;
            acc.count_intersection += (in_L[pos] && in_Lt[pos]) ? 1 : 0;
            acc.count_union += (in_L[pos] || in_Lt[pos]) ? 1 : 0;
        }
        CheckpointRow row = acc;
        row.x = x;
        row.target_bound = kPairIntersectionBound;
        row.inclusion_exclusion_holds =
                row.count_intersection == row.count_L + row.count_Lt - row.count_union;
        if (!*row.inclusion_exclusion_holds)
            throw std::logic_error("inclusion-exclusion fails on computed counts");
        if (row.count_intersection > std::min(row.count_L, row.count_Lt)
            || row.count_L > row.count_S_plus || row.count_S_plus > row.count_S)
            throw std::logic_error("pair counts out of order");
        if (row.count_S == 0) {
            row.no_data = true;
        } else {
            row.ratio_L = ratio(row.count_L, row.count_S);
            row.ratio_Lt = ratio(row.count_Lt, row.count_S);
            row.ratio_intersection = ratio(row.count_intersection, row.count_S);
            check_ratio(row.ratio_L, "ratio_L");
            check_ratio(row.ratio_Lt, "ratio_Lt");
            check_ratio(row.ratio_intersection, "ratio_intersection");
        }
        report.checkpoints.push_back(row);
    }
    return out;
}

} // namespace

std::optional<ClassGroupInfo> ClassInfoCache::find(i64 D) const
{
    auto it = entries_.find(D);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

void ClassInfoCache::insert(ClassGroupInfo const & info)
{
    auto [it, fresh] = entries_.emplace(info.D.value(), info);
    if (!fresh && !(it->second == info))
        throw CacheCorruption("cached class group data for D = " + std::to_string(info.D.value())
                              + " disagrees with a fresh computation");
}

std::vector<ClassGroupInfo> ClassInfoCache::records() const
{
    std::vector<ClassGroupInfo> out;
    out.reserve(entries_.size());
    for (auto const & [d, info] : entries_)
        out.push_back(info);
    return out;
}

std::vector<ClassGroupInfo> compute_class_infos(std::span<Discriminant const> ds,
                                                RunOptions const & opts)
{
    std::vector<std::optional<ClassGroupInfo>> slots(ds.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (opts.cache)
            slots[i] = opts.cache->find(ds[i].value());
        if (!slots[i])
            missing.push_back(i);
    }

    std::mutex progress_lock;
    std::atomic<std::size_t> done{0};
    std::size_t const stride = std::max<std::size_t>(1, missing.size() / 20);
    parallel_for(missing.size(), opts.jobs, [&](std::size_t k) {
        std::size_t i = missing[k];
        slots[i] = class_group_info(ds[i]);
        std::size_t n = ++done;
        if (opts.progress && (n % stride == 0 || n == missing.size())) {
            std::lock_guard<std::mutex> g(progress_lock);
            *opts.progress << "qfclass: " << n << "/" << missing.size()
                           << " class groups computed\n";
        }
    });

    std::vector<ClassGroupInfo> out;
    out.reserve(ds.size());
    for (auto & s : slots)
        out.push_back(*s);
    if (opts.cache) {
        for (std::size_t i : missing)
            opts.cache->insert(out[i]);
    }
    return out;
}

i64 progression_count(i64 lo, i64 hi, i64 m, i64 N)
{
    if (hi < lo)
        return 0;
    auto fl = [N](i64 a) { return (a - mod_floor(a, N)) / N; };
    return fl(hi - m) - fl(lo - 1 - m);
}

std::vector<Discriminant> enumerate_s_plus(i64 X, CongruenceFamily const & family)
{
    std::vector<Discriminant> out;
    if (X <= 2)
        return out;
    SieveWindow sieve = sieve_squarefree(1, static_cast<u64>(X - 1));
    for (i64 D = first_in_progression(2, family.m, family.N); D < X; D += family.N) {
        if (fundamental_in(sieve, D))
            out.push_back(make_discriminant(D));
    }
    return out;
}

std::vector<Discriminant> enumerate_s_minus(i64 X, CongruenceFamily const & family)
{
    std::vector<Discriminant> out;
    if (X <= 1)
        return out;
    SieveWindow sieve = sieve_squarefree(1, static_cast<u64>(X - 1));
    // largest D <= -1 in the progression, then step down
    i64 D = -1 - mod_floor(-1 - family.m, family.N);
    for (; D > -X; D -= family.N) {
        if (fundamental_in(sieve, D))
            out.push_back(make_discriminant(D));
    }
    return out;
}

std::vector<i64> default_checkpoints(i64 X)
{
    std::vector<i64> out;
    for (i64 c : {i64{1000}, i64{10000}, i64{100000}, i64{1000000}})
        if (c < X)
            out.push_back(c);
    if (X >= 1)
        out.push_back(X);
    return out;
}

void validate_checkpoints(i64 X, std::span<i64 const> checkpoints)
{
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > X)
            throw std::invalid_argument("checkpoint " + std::to_string(checkpoints[i])
                                        + " outside [1, " + std::to_string(X) + "]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("checkpoints must be strictly increasing");
    }
}

DensityReport nh_average(i64 X, CongruenceFamily const & family,
                         std::span<i64 const> checkpoints, RunOptions const & opts)
{
    require_level(family, Level::nh);
    return progression_report("nh-average", X, family, checkpoints, opts, kNhLimit);
}

DensityReport indivisibility_density(i64 X, CongruenceFamily const & family,
                                     std::span<i64 const> checkpoints, RunOptions const & opts)
{
    require_level(family, Level::nh);
    return progression_report("indivisibility", X, family, checkpoints, opts, kIndivisibilityBound);
}

DensityReport pair_experiment(i64 X, CongruenceFamily const & family,
                              std::span<i64 const> checkpoints, RunOptions const & opts)
{
    require_level(family, Level::theorem);
    return run_pairs("pairs", X, family, checkpoints, opts).report;
}

LambdaSurvey lambda_survey(i64 X, CongruenceFamily const & family,
                           std::span<i64 const> checkpoints, RunOptions const & opts)
{
    require_level(family, Level::lambda);
    PairData data = run_pairs("lambda", X, family, checkpoints, opts);
    LambdaSurvey survey;
    survey.report = std::move(data.report);
    i64 const t = family.t;
    for (i64 D : data.intersection) {
        // everything below is recomputed without the cache
        Lambda3Certificate cert;
        cert.D = D;
        cert.t = t;
        cert.legendre_D = kronecker(D, 3);
        cert.legendre_Dt = kronecker(D + t, 3);
        cert.h_D_mod3 = static_cast<int>(class_group_info(make_discriminant(D)).h % 3);
        cert.h_Dt_mod3 = static_cast<int>(class_group_info(make_discriminant(D + t)).h % 3);
        if (mod_floor(D, 3) != 2 || mod_floor(D + t, 3) != 2 || cert.legendre_D != -1
            || cert.legendre_Dt != -1)
            throw std::logic_error("3 is not inert in Q(sqrt(" + std::to_string(D) + ")) or Q(sqrt("
                                   + std::to_string(D + t) + "))");
        if (cert.h_D_mod3 == 0 || cert.h_Dt_mod3 == 0)
            throw std::logic_error("certificate candidate " + std::to_string(D)
                                   + " has a class number divisible by 3");
        survey.certificates.push_back(cert);
    }
    return survey;
}

DensityReport imaginary_density(i64 X, CongruenceFamily const & family,
                                std::span<i64 const> checkpoints, RunOptions const & opts)
{
    require_level(family, Level::nh);
    validate_checkpoints(X, checkpoints);
    auto tallies = tally(enumerate_s_minus(X, family), opts);
    DensityReport report;
    report.experiment = "imaginary";
    report.denominator = "S_minus";
    report.family = family;
    report.X = X;
    report.target_bound = kImaginaryBound;
    report.bounds = {{"ratio_L", kImaginaryBound}};
    report.checkpoints = progression_rows(tallies, family, checkpoints, -1, kImaginaryBound);
    return report;
}

} // namespace qfc
