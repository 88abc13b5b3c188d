#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kfree {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Error categories; the C API and the CLI exit codes mirror these 1:1.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct internal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline i64 checked_mul(i64 a, i64 b) {
    i128 r = static_cast<i128>(a) * b;
    if (r > INT64_MAX || r < INT64_MIN)
        throw resource_error("integer overflow in exact arithmetic");
    return static_cast<i64>(r);
}

std::string format_real(long double x, int digits);

}  // namespace kfree
