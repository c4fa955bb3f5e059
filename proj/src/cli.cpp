#include "qfclass/cli.hpp"

#include <fstream>
#include <numeric>
#include <ostream>

#include "CLI11.hpp"

#include "qfclass/cache.hpp"

namespace qfc {

namespace {

constexpr std::size_t kCacheVerifySamples = 8;

struct ExperimentSpec
{
    char const * name;
    char const * help;
    Level level;
};

constexpr ExperimentSpec kExperiments[] = {
    {"nh-average", "running average of 3^r3 over S+(X, m, N)", Level::nh},
    {"indivisibility", "share of S+(X, m, N) with 3 not dividing h", Level::nh},
    {"pairs", "share of D with 3 dividing neither h(D) nor h(D + t)", Level::theorem},
    {"lambda", "certify lambda_3 = 0 for pairs D, D + t with 3 inert", Level::lambda},
    {"imaginary", "share of S-(X, m, N) with 3 not dividing h", Level::nh},
};

ClassInfoCache load_cache(RunConfig const & cfg)
{
    ClassInfoCache cache;
    if (!cfg.cache_path)
        return cache;
    auto records = cache_load(*cfg.cache_path);
    verify_cache_sample(records, kCacheVerifySamples);
    for (auto const & r : records)
        cache.insert(from_record(r));
    return cache;
}

void store_cache(RunConfig const & cfg, ClassInfoCache const & cache)
{
    if (!cfg.cache_path)
        return;
    std::vector<CacheRecord> records;
    for (auto const & info : cache.records())
        records.push_back(to_record(info));
    cache_store(*cfg.cache_path, records);
}

int run_classgroup(RunConfig const & cfg, std::ostream & out, std::ostream & err)
{
    if (cfg.d > kMaxDiscriminantMagnitude || cfg.d < -kMaxDiscriminantMagnitude) {
        err << "qfclass: |D| must not exceed 2^48\n";
        return exit_invalid;
    }
    auto cls = classify_discriminant(cfg.d);
    if (auto const * why = std::get_if<RejectReason>(&cls)) {
        err << "qfclass: " << cfg.d << " is not a fundamental discriminant (" << to_string(*why)
            << ")\n";
        return exit_domain;
    }
    ClassInfoCache cache = load_cache(cfg);
    ClassGroupInfo info = class_group_info(std::get<Discriminant>(cls));
    cache.insert(info);
    out << render_class_info(info, cfg.format);
    store_cache(cfg, cache);
    return exit_ok;
}

int run_sieve_count(RunConfig const & cfg, std::ostream & out, std::ostream & err)
{
    if (cfg.k < 1 || cfg.l < 1 || cfg.l > cfg.k || std::gcd(cfg.k, cfg.l) != 1) {
        err << "qfclass: need k >= 1, 1 <= l <= k and gcd(k, l) = 1\n";
        return exit_invalid;
    }
    out << render_sieve_count(count_squarefree_in_ap(cfg.X, cfg.k, cfg.l), cfg.format);
    return exit_ok;
}

int run_experiment(RunConfig const & cfg, Level level, std::ostream & out, std::ostream & err)
{
    FamilyVerdict verdict = validate(cfg.m, cfg.N, cfg.t, level);
    if (!verdict.ok()) {
        err << "qfclass: (m, N, t) = (" << cfg.m << ", " << cfg.N << ", " << cfg.t
            << ") rejected at level " << to_string(level) << ":\n"
            << verdict.describe();
        return exit_invalid;
    }
    if (cfg.X + cfg.t > kMaxX) {
        err << "qfclass: X + t must not exceed 2^48\n";
        return exit_invalid;
    }
    std::vector<i64> checkpoints =
            cfg.checkpoints.empty() ? default_checkpoints(cfg.X) : cfg.checkpoints;
    validate_checkpoints(cfg.X, checkpoints);

    CongruenceFamily const & family = *verdict.family;
    ClassInfoCache cache = load_cache(cfg);
    RunOptions opts{cfg.jobs, &cache, cfg.progress ? &err : nullptr};

    std::string const & sub = cfg.subcommand;
    if (sub == "nh-average") {
        out << render_report(nh_average(cfg.X, family, checkpoints, opts), cfg.format);
    } else if (sub == "indivisibility") {
        out << render_report(indivisibility_density(cfg.X, family, checkpoints, opts), cfg.format);
    } else if (sub == "pairs") {
        out << render_report(pair_experiment(cfg.X, family, checkpoints, opts), cfg.format);
    } else if (sub == "imaginary") {
        out << render_report(imaginary_density(cfg.X, family, checkpoints, opts), cfg.format);
    } else {
        LambdaSurvey survey = lambda_survey(cfg.X, family, checkpoints, opts);
        out << render_lambda(survey, cfg.format);
        if (cfg.certificates) {
            std::ofstream cert(*cfg.certificates, std::ios::binary | std::ios::trunc);
            if (!cert)
                throw std::invalid_argument("cannot write " + *cfg.certificates);
            cert << render_certificates_csv(survey.certificates);
        }
    }
    store_cache(cfg, cache);
    return exit_ok;
}

} // namespace

int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Class numbers, 3-ranks and 3-indivisibility densities of quadratic fields",
                 "qfclass"};
    RunConfig cfg;
    std::string format = "csv";
    std::string cache_path;

    app.add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1, 4096));
    app.add_option("--cache", cache_path, "discriminant cache file");
    app.add_flag("--progress", cfg.progress, "progress on stderr");
    app.require_subcommand(1);

    auto * classgroup = app.add_subcommand("classgroup", "class group data of one discriminant");
    classgroup->add_option("--d", cfg.d, "fundamental discriminant")->required();

    auto * sieve = app.add_subcommand("sieve-count", "squarefree n <= X with n = l (mod k)");
    sieve->add_option("--x", cfg.X, "upper bound X")->required()->check(CLI::Range(i64{0}, kMaxX));
    sieve->add_option("--k", cfg.k, "modulus")->required();
    sieve->add_option("--l", cfg.l, "residue")->required();

    for (auto const & spec : kExperiments) {
        auto * sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("--x", cfg.X, "upper bound X")->required()->check(CLI::Range(i64{1}, kMaxX));
        sub->add_option("--m", cfg.m, "progression residue")->required();
        sub->add_option("--n", cfg.N, "progression modulus")->required();
        auto * t = sub->add_option("--t", cfg.t, "shift");
        if (spec.level != Level::nh)
            t->required();
        sub->add_option("--checkpoints", cfg.checkpoints, "comma-separated X values")
                ->delimiter(',');
        if (spec.level == Level::lambda)
            sub->add_option("--certificates", cfg.certificates, "write certificates as csv");
    }
    for (auto * sub : app.get_subcommands({}))
        sub->fallthrough();

    std::vector<char const *> argv{"qfclass"};
    for (auto const & a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::ParseError const & e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format = *parse_format(format);
    if (!cache_path.empty())
        cfg.cache_path = cache_path;

    try {
        if (cfg.subcommand == "classgroup")
            return run_classgroup(cfg, out, err);
        if (cfg.subcommand == "sieve-count")
            return run_sieve_count(cfg, out, err);
        for (auto const & spec : kExperiments)
            if (cfg.subcommand == spec.name)
                return run_experiment(cfg, spec.level, out, err);
        err << "qfclass: unknown subcommand " << cfg.subcommand << "\n";
        return exit_invalid;
    } catch (FamilyRejected const & e) {
        err << "qfclass: " << e.what();
        return exit_invalid;
    } catch (CacheCorruption const & e) {
        err << "qfclass: cache corruption: " << e.what() << "\n";
        return exit_cache;
    } catch (DomainError const & e) {
        err << "qfclass: domain error: " << e.what() << "\n";
        return exit_domain;
    } catch (WindowTooLarge const & e) {
        err << "qfclass: " << e.what() << "\n";
        return exit_invalid;
    } catch (std::invalid_argument const & e) {
        err << "qfclass: " << e.what() << "\n";
        return exit_invalid;
    } catch (std::exception const & e) {
        err << "qfclass: internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace qfc
