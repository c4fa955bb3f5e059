#include "qfclass/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace qfc {

namespace {

using ojson = nlohmann::ordered_json;

std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", round6(v));
    return buf;
}

std::string fixed6(std::optional<double> const & v) { return v ? fixed6(*v) : std::string(); }

ojson json_value(std::optional<double> const & v)
{
    return v ? ojson(round6(*v)) : ojson(nullptr);
}

ojson family_json(CongruenceFamily const & f)
{
    ojson j;
    j["m"] = f.m;
    j["N"] = f.N;
    j["t"] = f.t;
    j["level"] = std::string(to_string(f.level));
    return j;
}

ojson report_json(DensityReport const & report)
{
    ojson j;
    j["experiment"] = report.experiment;
    j["denominator"] = report.denominator;
    j["family"] = family_json(report.family);
    j["X"] = report.X;
    j["target_bound"] = round6(report.target_bound);
    ojson bounds = ojson::object();
    for (auto const & b : report.bounds)
        bounds[b.ratio] = round6(b.value);
    j["bounds"] = bounds;
    ojson rows = ojson::array();
    for (auto const & r : report.checkpoints) {
        ojson row;
        row["checkpoint_x"] = r.x;
        row["count_S"] = r.count_S;
        row["count_S_plus"] = r.count_S_plus;
        row["count_L"] = r.count_L;
        row["count_Lt"] = r.count_Lt;
        row["count_intersection"] = r.count_intersection;
        row["ratio_L"] = json_value(r.ratio_L);
        row["ratio_Lt"] = json_value(r.ratio_Lt);
        row["ratio_intersection"] = json_value(r.ratio_intersection);
        row["nh_average"] = json_value(r.nh_average);
        row["target_bound"] = round6(r.target_bound);
        row["no_data"] = r.no_data;
        if (r.proof_holds) {
            row["count_r3_zero"] = r.count_r3_zero;
            row["sum_three_torsion"] = r.sum_three_torsion;
            row["proof_lhs"] = json_value(r.proof_lhs);
            row["proof_rhs"] = json_value(r.proof_rhs);
            row["proof_holds"] = *r.proof_holds;
        }
        if (r.inclusion_exclusion_holds) {
            row["count_union"] = r.count_union;
            row["inclusion_exclusion_holds"] = *r.inclusion_exclusion_holds;
        }
        rows.push_back(std::move(row));
    }
    j["checkpoints"] = std::move(rows);
    return j;
}

ojson certificates_json(std::span<Lambda3Certificate const> certs)
{
    ojson arr = ojson::array();
    for (auto const & c : certs) {
        ojson o;
        o["D"] = c.D;
        o["D_plus_t"] = c.D + c.t;
        o["legendre_D"] = c.legendre_D;
        o["legendre_Dt"] = c.legendre_Dt;
        o["h_D_mod3"] = c.h_D_mod3;
        o["h_Dt_mod3"] = c.h_Dt_mod3;
        o["lambda3_vanishes"] = true;
        arr.push_back(std::move(o));
    }
    return arr;
}

} // namespace

std::optional<Format> parse_format(std::string_view s)
{
    if (s == "csv")
        return Format::csv;
    if (s == "json")
        return Format::json;
    return std::nullopt;
}

double round6(double v)
{
    double r = std::round(v * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r; // no "-0.000000"
}

std::string render_report(DensityReport const & report, Format format)
{
    if (format == Format::json)
        return report_json(report).dump(2) + "\n";

    std::string out = kReportCsvHeader;
    out += '\n';
    for (auto const & r : report.checkpoints) {
        out += std::to_string(r.x) + ',' + std::to_string(r.count_S) + ','
               + std::to_string(r.count_S_plus) + ',' + std::to_string(r.count_L) + ','
               + std::to_string(r.count_Lt) + ',' + std::to_string(r.count_intersection) + ','
               + fixed6(r.ratio_L) + ',' + fixed6(r.ratio_Lt) + ','
               + fixed6(r.ratio_intersection) + ',' + fixed6(r.nh_average) + ','
               + fixed6(r.target_bound) + '\n';
    }
    return out;
}

std::string render_certificates_csv(std::span<Lambda3Certificate const> certs)
{
    std::string out = "D,D_plus_t,legendre_D,legendre_Dt,h_D_mod3,h_Dt_mod3\n";
    for (auto const & c : certs) {
        out += std::to_string(c.D) + ',' + std::to_string(c.D + c.t) + ','
               + std::to_string(c.legendre_D) + ',' + std::to_string(c.legendre_Dt) + ','
               + std::to_string(c.h_D_mod3) + ',' + std::to_string(c.h_Dt_mod3) + '\n';
    }
    return out;
}

std::string render_lambda(LambdaSurvey const & survey, Format format)
{
    if (format == Format::csv)
        return render_report(survey.report, format);
    ojson j = report_json(survey.report);
    j["certificate_count"] = survey.certificates.size();
    j["certificates"] = certificates_json(survey.certificates);
    return j.dump(2) + "\n";
}

std::string render_class_info(ClassGroupInfo const & info, Format format)
{
    int un = static_cast<int>(info.unit_norm);
    if (format == Format::json) {
        ojson j;
        j["D"] = info.D.value();
        j["h_plus"] = info.h_plus;
        j["h"] = info.h;
        j["unit_norm"] = un;
        j["r3"] = info.r3;
        j["three_torsion_count"] = info.three_torsion_count;
        return j.dump(2) + "\n";
    }
    return "D,h_plus,h,unit_norm,r3,three_torsion_count\n" + std::to_string(info.D.value()) + ','
           + std::to_string(info.h_plus) + ',' + std::to_string(info.h) + ',' + std::to_string(un)
           + ',' + std::to_string(info.r3) + ',' + std::to_string(info.three_torsion_count) + '\n';
}

std::string render_sieve_count(SquarefreeAPCount const & c, Format format)
{
    if (format == Format::json) {
        ojson j;
        j["x"] = c.X;
        j["k"] = c.k;
        j["l"] = c.l;
        j["count"] = c.count;
        j["main_term"] = round6(c.main_term);
        j["relative_error"] = round6(c.relative_error);
        return j.dump(2) + "\n";
    }
    return "x,k,l,count,main_term,relative_error\n" + std::to_string(c.X) + ','
           + std::to_string(c.k) + ',' + std::to_string(c.l) + ',' + std::to_string(c.count) + ','
           + fixed6(c.main_term) + ',' + fixed6(c.relative_error) + '\n';
}

} // namespace qfc
