#ifndef QFCLASS_CLI_HPP
#define QFCLASS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qfclass/report.hpp"

namespace qfc {

inline constexpr i64 kMaxX = i64{1} << 48;

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_invalid = 2,
    exit_domain = 3,
    exit_cache = 4,
};

struct RunConfig
{
    std::string subcommand;
    i64 X = 0;
    i64 m = 1;
    i64 N = 1;
    i64 t = 0;
    std::vector<i64> checkpoints;
    int jobs = 1;
    Format format = Format::csv;
    std::optional<std::string> cache_path;
    bool progress = false;

    i64 d = 0;                                  /* classgroup */
    i64 k = 1;                                  /* sieve-count */
    i64 l = 1;                                  /* sieve-count */
    std::optional<std::string> certificates;    /* lambda, csv side file */
};

/* Entry point behind the qfclass tool. args excludes the program name.
 * Data goes to `out`, verdicts, errors and progress to `err`. */
int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err);

} // namespace qfc

#endif
