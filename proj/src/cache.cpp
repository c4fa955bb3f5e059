#include "qfclass/cache.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace qfc {

namespace {

bool parse_int(std::string_view field, i64 & out)
{
    if (field.empty())
        return false;
    // no leading '+', no leading zeros except "0", no "-0"
    std::size_t digits = field[0] == '-' ? 1 : 0;
    if (digits == field.size())
        return false;
    if (field[digits] == '0' && (field.size() > digits + 1 || digits == 1))
        return false;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

[[noreturn]] void corrupt(std::size_t line, std::string const & why)
{
    throw CacheCorruption("cache line " + std::to_string(line) + ": " + why);
}

} // namespace

CacheRecord to_record(ClassGroupInfo const & info)
{
    return {info.D.value(), info.h_plus, info.h, static_cast<int>(info.unit_norm), info.r3};
}

ClassGroupInfo from_record(CacheRecord const & rec)
{
    auto fail = [&rec](char const * why) {
        throw CacheCorruption("record " + format_record(rec) + ": " + why);
    };
    auto cls = classify_discriminant(rec.D);
    if (!std::holds_alternative<Discriminant>(cls))
        fail("D is not a fundamental discriminant");
    if (rec.unit_norm < -1 || rec.unit_norm > 1)
        fail("unit_norm must be -1, 0 or 1");
    if ((rec.unit_norm == 0) != (rec.D < 0))
        fail("unit_norm is 0 exactly for negative D");
    if (rec.h_plus < 1 || rec.h < 1)
        fail("class numbers must be positive");
    if (rec.r3 < 0 || rec.r3 > 39)
        fail("r3 out of range");
    i64 torsion = 1;
    for (int i = 0; i < rec.r3; ++i)
        torsion *= 3;
    if (torsion > rec.h_plus)
        fail("3^r3 exceeds h_plus");
    if (rec.h_plus % torsion != 0)
        fail("3^r3 does not divide h_plus");
    i64 expected_plus = rec.unit_norm == 1 ? 2 * rec.h : rec.h;
    if (rec.h_plus != expected_plus)
        fail("h_plus inconsistent with h and unit_norm");

    ClassGroupInfo info{std::get<Discriminant>(cls)};
    info.h_plus = rec.h_plus;
    info.h = rec.h;
    info.unit_norm = static_cast<UnitNorm>(rec.unit_norm);
    info.three_torsion_count = torsion;
    info.r3 = rec.r3;
    return info;
}

std::string format_record(CacheRecord const & r)
{
    return std::to_string(r.D) + ',' + std::to_string(r.h_plus) + ',' + std::to_string(r.h) + ','
           + std::to_string(r.unit_norm) + ',' + std::to_string(r.r3);
}

std::vector<CacheRecord> parse_cache(std::istream & in)
{
    std::vector<CacheRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of("-0123456789,") != std::string::npos)
            corrupt(lineno, "unexpected character");
        i64 fields[5];
        std::size_t start = 0;
        for (int f = 0; f < 5; ++f) {
            std::size_t end = f < 4 ? line.find(',', start) : line.size();
            if (end == std::string::npos)
                corrupt(lineno, "expected 5 comma-separated fields");
            if (!parse_int(std::string_view(line).substr(start, end - start), fields[f]))
                corrupt(lineno, "malformed integer field");
            start = end + 1;
        }
        if (start != line.size() + 1)
            corrupt(lineno, "expected 5 comma-separated fields");
        if (fields[3] < -1 || fields[3] > 1 || fields[4] < 0 || fields[4] > 39)
            corrupt(lineno, "field out of range");
        CacheRecord rec{fields[0], fields[1], fields[2], static_cast<int>(fields[3]),
                        static_cast<int>(fields[4])};
        if (!out.empty() && out.back().D >= rec.D)
            corrupt(lineno, "records must be sorted by D without duplicates");
        try {
            from_record(rec);
        } catch (CacheCorruption const & e) {
            corrupt(lineno, e.what());
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<CacheRecord> cache_load(std::string const & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path))
            return {};
        throw CacheCorruption("cannot read cache file " + path);
    }
    return parse_cache(in);
}

void cache_store(std::string const & path, std::span<CacheRecord const> records)
{
    std::map<i64, CacheRecord> merged;
    for (auto const & r : cache_load(path))
        merged.emplace(r.D, r);
    for (auto const & r : records) {
        auto [it, fresh] = merged.emplace(r.D, r);
        if (!fresh && !(it->second == r))
            throw CacheCorruption("cache record for D = " + std::to_string(r.D)
                                  + " conflicts with the stored one");
    }
    std::ostringstream body;
    for (auto const & [d, r] : merged)
        body << format_record(r) << '\n';

    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw CacheCorruption("cannot write cache file " + tmp);
        out << body.str();
        if (!out.flush())
            throw CacheCorruption("short write to cache file " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void verify_cache_sample(std::span<CacheRecord const> records, std::size_t samples)
{
    if (records.empty() || samples == 0)
        return;
    std::size_t n = std::min(samples, records.size());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = n == 1 ? 0 : k * (records.size() - 1) / (n - 1);
        CacheRecord const & r = records[i];
        CacheRecord fresh = to_record(class_group_info(make_discriminant(r.D)));
        if (!(fresh == r))
            throw CacheCorruption("cached record " + format_record(r)
                                  + " disagrees with fresh computation " + format_record(fresh));
    }
}

} // namespace qfc
