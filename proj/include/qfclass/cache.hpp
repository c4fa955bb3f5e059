#ifndef QFCLASS_CACHE_HPP
#define QFCLASS_CACHE_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qfclass/experiments.hpp"

namespace qfc {

/*
 * One line of the discriminant cache file:
 *
 *     D,h_plus,h,unit_norm,r3
 *
 * ASCII, LF terminated, sorted by D, no duplicates. unit_norm is 0 for
 * negative D.
 */
struct CacheRecord
{
    i64 D = 0;
    i64 h_plus = 0;
    i64 h = 0;
    int unit_norm = 0;
    int r3 = 0;

    friend bool operator==(CacheRecord const &, CacheRecord const &) = default;
};

CacheRecord to_record(ClassGroupInfo const & info);

/* Throws CacheCorruption when the record breaks an invariant. */
ClassGroupInfo from_record(CacheRecord const & rec);

std::string format_record(CacheRecord const & rec);

/* Throws CacheCorruption on malformed input, naming the line number. */
std::vector<CacheRecord> parse_cache(std::istream & in);

/* A missing file loads as empty. */
std::vector<CacheRecord> cache_load(std::string const & path);

/* Merges `records` with what is already at `path` and rewrites it. */
void cache_store(std::string const & path, std::span<CacheRecord const> records);

/* Recomputes up to `samples` evenly spaced records from scratch. */
void verify_cache_sample(std::span<CacheRecord const> records, std::size_t samples);

} // namespace qfc

#endif
