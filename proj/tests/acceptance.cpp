// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "qfclass/cli.hpp"
#include "qfclass/experiments.hpp"

using namespace qfc;

namespace {

struct Outcome
{
    bool pass = true;
    std::string detail;

    void fail(std::string const & why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
};

int jobs()
{
    unsigned n = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(n, 1u, 16u));
}

std::vector<Discriminant> fundamentals(i64 lo, i64 hi)
{
    std::vector<Discriminant> out;
    for (i64 d = lo; d <= hi; ++d)
        if (is_fundamental(d))
            out.push_back(make_discriminant(d));
    return out;
}

Outcome a1()
{
    Outcome o;
    i64 n = 0;
    for (auto const & D : fundamentals(-4999, -1)) {
        i64 forms = static_cast<i64>(enumerate_classes(D).size());
        i64 scan = oracle::definite_class_count(D.value());
        i64 analytic = analytic_h_imaginary(D);
        if (forms != analytic || forms != scan)
            o.fail("D=" + std::to_string(D.value()) + " reduced forms " + std::to_string(forms)
                   + ", character sum " + std::to_string(analytic));
        ++n;
    }
    if (o.pass)
        o.detail = std::to_string(n) + " discriminants, reduced-form count = character sum";
    return o;
}

/* order of the subgroup generated by every class, grown from the identity */
std::size_t generated_order(ClassGroup const & G)
{
    std::set<std::size_t> seen{G.identity()};
    std::vector<std::size_t> frontier{G.identity()};
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t x : frontier)
            for (std::size_t g = 0; g < G.order(); ++g) {
                std::size_t y = G.multiply(x, g);
                if (seen.insert(y).second)
                    next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen.size();
}

Outcome a2()
{
    Outcome o;
    i64 n = 0;
    for (auto const & D : fundamentals(2, 4999)) {
        ++n;
        std::string at = "D=" + std::to_string(D.value()) + ": ";
        auto classes = enumerate_classes(D);
        std::set<ClassRep> all(classes.begin(), classes.end());
        ClassRep e = principal_class(D);

        // the cycles partition the reduced forms
        i64 members = 0;
        for (auto const & c : classes)
            members += c.cycle_length;
        if (members != static_cast<i64>(reduced_forms(D).size()))
            o.fail(at + "cycles do not cover the reduced forms");

        ClassGroup G(D);
        if (generated_order(G) != classes.size())
            o.fail(at + "generated group order differs from the cycle count");

        for (auto const & x : classes) {
            if (compose(e, x) != x)
                o.fail(at + "identity law");
            ClassRep xi = inverse(x);
            if (!all.count(xi) || compose(x, xi) != e)
                o.fail(at + "inverse law");
            for (auto const & y : classes) {
                ClassRep xy = compose(x, y);
                if (!all.count(xy))
                    o.fail(at + "closure");
                if (xy != compose(y, x))
                    o.fail(at + "commutativity");
            }
        }
        auto info = class_group_info(D);
        if (info.h_plus != static_cast<i64>(classes.size()))
            o.fail(at + "h+ differs from the cycle count");
        if (info.unit_norm == UnitNorm::plus_one && info.h_plus % 2 != 0)
            o.fail(at + "unit norm +1 with odd h+");
    }
    if (o.pass)
        o.detail = std::to_string(n) + " discriminants, group laws exhaustive";
    return o;
}

Outcome a3()
{
    Outcome o;
    auto d229 = class_group_info(make_discriminant(229));
    if (d229.h != 3 || d229.unit_norm != UnitNorm::minus_one)
        o.fail("h(229) or its unit norm");

    Discriminant m23 = make_discriminant(-23);
    if (class_group_info(m23).h != 3 || analytic_h_imaginary(m23) != 3
        || oracle::definite_class_count(-23) != 3)
        o.fail("h(-23)");

    Discriminant D32009 = make_discriminant(32009);
    auto info = class_group_info(D32009);
    ClassRep e = principal_class(D32009);
    i64 brute = 0;
    for (auto const & x : enumerate_classes(D32009))
        brute += compose(compose(x, x), x) == e ? 1 : 0;
    if (info.three_torsion_count != 9 || info.r3 != 2 || brute != 9)
        o.fail("3-torsion of 32009");

    Discriminant D12 = make_discriminant(12);
    auto d12 = class_group_info(D12);
    if (d12.h != 1 || d12.h_plus != 2 || generated_order(ClassGroup(D12)) != 2)
        o.fail("h(12) or h+(12)");
    if (o.pass)
        o.detail = "h(229)=3 norm -1, h(-23)=3, 3-torsion(32009)=9, h(12)=1 h+(12)=2";
    return o;
}

Outcome a4()
{
    Outcome o;
    auto c = count_squarefree_in_ap(1000000, 12, 5);
    i64 brute = oracle::count_squarefree_ap(1000000, 12, 5);
    if (c.count != brute)
        o.fail("sieve count " + std::to_string(c.count) + " vs enumeration " + std::to_string(brute));
    if (!(c.relative_error <= 0.02))
        o.fail("relative error " + std::to_string(c.relative_error));
    if (o.pass) {
        std::ostringstream s;
        s << "count " << c.count << ", main term " << c.main_term << ", relative error "
          << c.relative_error << " <= 0.02";
        o.detail = s.str();
    }
    return o;
}

std::vector<i64> const kCheckpoints{1000, 10000, 100000};

CongruenceFamily fam(i64 m, i64 N, i64 t, Level level) { return *validate(m, N, t, level).family; }

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

Outcome a5(RunOptions const & opts)
{
    Outcome o;
    auto r = indivisibility_density(100000, fam(1, 4, 0, Level::nh), kCheckpoints, opts);
    auto const & last = r.checkpoints.back();
    for (auto const & row : r.checkpoints)
        if (!row.proof_holds.value_or(false))
            o.fail("proof inequality at " + std::to_string(row.x));
    if (!last.ratio_L || *last.ratio_L < kIndivisibilityBound)
        o.fail("ratio " + fmt(last.ratio_L.value_or(-1)) + " < 5/6");
    if (o.pass)
        o.detail = "ratio " + fmt(*last.ratio_L) + " >= " + fmt(kIndivisibilityBound);
    return o;
}

Outcome a6(RunOptions const & opts)
{
    Outcome o;
    auto r = nh_average(100000, fam(1, 4, 0, Level::nh), kCheckpoints, opts);
    std::string trail;
    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
        auto const & row = r.checkpoints[i];
        if (!row.nh_average) {
            o.fail("no data at " + std::to_string(row.x));
            continue;
        }
        trail += (i ? " -> " : "") + fmt(*row.nh_average);
        if (i > 0) {
            auto const & prev = r.checkpoints[i - 1];
            if (prev.nh_average && std::abs(*row.nh_average - *prev.nh_average) > 0.08)
                o.fail("consecutive checkpoints differ by more than 0.08 at "
                       + std::to_string(row.x));
        }
    }
    double last = r.checkpoints.back().nh_average.value_or(0);
    if (last < 1.10 || last > 1.40)
        o.fail("average " + fmt(last) + " outside [1.10, 1.40]");
    if (o.pass)
        o.detail = "average " + trail + " in [1.10, 1.40]";
    return o;
}

Outcome a7(RunOptions const & opts)
{
    Outcome o;
    auto r = pair_experiment(100000, fam(1, 4, 4, Level::theorem), kCheckpoints, opts);
    for (auto const & row : r.checkpoints)
        if (!row.inclusion_exclusion_holds.value_or(false)
            || row.count_intersection != row.count_L + row.count_Lt - row.count_union)
            o.fail("inclusion-exclusion at " + std::to_string(row.x));
    auto const & last = r.checkpoints.back();
    if (!last.ratio_intersection || *last.ratio_intersection < 0.01321)
        o.fail("intersection ratio " + fmt(last.ratio_intersection.value_or(-1)) + " < 0.01321");
    if (o.pass)
        o.detail = "intersection ratio " + fmt(*last.ratio_intersection) + " >= "
                   + fmt(kPairIntersectionBound) + ", inclusion-exclusion exact";
    return o;
}

Outcome a8(RunOptions const & opts)
{
    Outcome o;
    auto s = lambda_survey(10000, fam(17, 12, 12, Level::lambda), std::vector<i64>{1000, 10000},
                           opts);
    if (s.certificates.empty())
        o.fail("no certificates");
    for (auto const & c : s.certificates) {
        std::string at = "D=" + std::to_string(c.D) + ": ";
        if (oracle::mod(c.D, 3) != 2 || oracle::mod(c.D + c.t, 3) != 2)
            o.fail(at + "not 2 mod 3");
        if (oracle::kronecker(c.D, 3) != -1 || oracle::kronecker(c.D + c.t, 3) != -1)
            o.fail(at + "3 not inert");
        if (class_group_info(make_discriminant(c.D)).h % 3 == 0
            || class_group_info(make_discriminant(c.D + c.t)).h % 3 == 0)
            o.fail(at + "3 divides a class number");
        if (c.legendre_D != -1 || c.legendre_Dt != -1 || c.h_D_mod3 == 0 || c.h_Dt_mod3 == 0)
            o.fail(at + "certificate fields");
    }
    if (o.pass)
        o.detail = std::to_string(s.certificates.size()) + " certificates, all rechecked";
    return o;
}

Outcome a9(RunOptions const & opts)
{
    Outcome o;
    auto r = imaginary_density(100000, fam(1, 4, 0, Level::nh), kCheckpoints, opts);
    auto const & last = r.checkpoints.back();
    if (!last.ratio_L || *last.ratio_L < 0.5)
        o.fail("ratio " + fmt(last.ratio_L.value_or(-1)) + " < 0.5");
    if (o.pass)
        o.detail = "ratio " + fmt(*last.ratio_L) + " >= 0.500000";
    return o;
}

std::string cli_output(std::vector<std::string> args, int& code)
{
    std::ostringstream out, err;
    code = run(args, out, err);
    return out.str();
}

Outcome a10()
{
    Outcome o;
    std::vector<std::vector<std::string>> runs{
            {"indivisibility", "--x", "100000", "--m", "1", "--n", "4"},
            {"nh-average", "--x", "100000", "--m", "1", "--n", "4"},
            {"pairs", "--x", "100000", "--m", "1", "--n", "4", "--t", "4"},
            {"lambda", "--x", "10000", "--m", "17", "--n", "12", "--t", "12"},
            {"imaginary", "--x", "100000", "--m", "1", "--n", "4"},
    };
    auto dir = std::filesystem::temp_directory_path()
               / ("qfclass-acceptance-"
                  + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(dir);
    std::string cache = (dir / "cache.txt").string();
    for (auto const & args : runs) {
        for (std::string format : {"csv", "json"}) {
            auto with = [&](std::vector<std::string> pre) {
                pre.insert(pre.begin(), {"--format", format});
                pre.insert(pre.end(), args.begin(), args.end());
                int code = 0;
                std::string out = cli_output(pre, code);
                if (code != 0)
                    o.fail(args[0] + " exited " + std::to_string(code));
                return out;
            };
            std::string one = with({"--jobs", "1"});
            std::string four = with({"--jobs", "4"});
            std::string cold = with({"--jobs", "4", "--cache", cache});
            std::string warm = with({"--jobs", "1", "--cache", cache});
            if (one != four)
                o.fail(args[0] + " " + format + " differs between --jobs 1 and 4");
            if (one != cold || one != warm)
                o.fail(args[0] + " " + format + " differs between cold and warm cache");
            std::filesystem::remove(cache);
        }
    }
    std::filesystem::remove_all(dir);
    if (o.pass)
        o.detail = "A5-A9 reports byte-identical for --jobs 1/4 and cold/warm cache";
    return o;
}

} // namespace

int main()
{
    RunOptions opts{jobs(), nullptr, nullptr};
    std::vector<std::pair<char const *, std::function<Outcome()>>> criteria{
            {"A1", a1},
            {"A2", a2},
            {"A3", a3},
            {"A4", a4},
            {"A5", [&] { return a5(opts); }},
            {"A6", [&] { return a6(opts); }},
            {"A7", [&] { return a7(opts); }},
            {"A8", [&] { return a8(opts); }},
            {"A9", [&] { return a9(opts); }},
            {"A10", a10},
    };
    int failures = 0;
    for (auto const & [name, fn] : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (std::exception const & e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s %s (%.1fs)\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
