#ifndef QFCLASS_REPORT_HPP
#define QFCLASS_REPORT_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qfclass/experiments.hpp"

namespace qfc {

enum class Format { csv, json };

std::optional<Format> parse_format(std::string_view s);

inline constexpr char const * kReportCsvHeader =
        "checkpoint_x,count_S,count_S_plus,count_L,count_Lt,count_intersection,"
        "ratio_L,ratio_Lt,ratio_intersection,nh_average,target_bound";

/* Values reported with six decimals; the JSON rendering carries the same
 * rounded values so both formats agree number for number. */
double round6(double v);

/* CSV: header plus one row per checkpoint, not-applicable fields empty.
 * JSON: report metadata with a "checkpoints" array using the CSV names. */
std::string render_report(DensityReport const & report, Format format);

std::string render_lambda(LambdaSurvey const & survey, Format format);

std::string render_certificates_csv(std::span<Lambda3Certificate const> certs);

std::string render_class_info(ClassGroupInfo const & info, Format format);

std::string render_sieve_count(SquarefreeAPCount const & count, Format format);

} // namespace qfc

#endif
