#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sperfect {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Resource cap exceeded (memory, sieve size).
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A solver hit its node/memory budget where an exact answer was required.
struct exhausted_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed on-disk data; carries the 1-based offending line.
struct format_error : std::runtime_error {
    format_error(const std::string& what, long line_no)
        : std::runtime_error(what), line(line_no) {}
    long line;
};

std::string to_string_i128(i128 v);

// Narrow with a range check; throws std::overflow_error.
i64 checked_i64(i128 v, const char* what);

}  // namespace sperfect
