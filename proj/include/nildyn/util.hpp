#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nildyn {

/// Bad input: malformed parameter files, constraint violations, unusable
/// preconditions. Maps to CLI exit code 1.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// An internal cross-check contradicted something the analysis guarantees
/// to be true (e.g. a verified second cross-check disagreeing with the
/// first). Maps to CLI exit code 2.
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

/// Format a double with 15 significant digits (round-half-even via libc).
inline std::string fmt15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

/// Round a double through its 15-significant-digit decimal form. Used when
/// emitting numbers into reports so output is byte-stable.
inline double round15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return std::strtod(buf, nullptr);
}

inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace nildyn
