#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <sstream>
#include <string>

#include "nildyn/util.hpp"

namespace nildyn {

// Exact coefficients everywhere in the symbolic layer; numerics convert on
// demand. cpp_rational keeps values in lowest terms with positive denominator.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline int sign(const Rational& q) { return q.sign(); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Render as "p/q", or plain "p" for integers.
inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

/// Parse "p", "-p", or "p/q" with arbitrary-precision parts. Returns nullopt
/// on malformed text (callers attach the field path).
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Integer(text));
        }
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) return std::nullopt;
        return Rational(num, den);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline Rational rational_pow(const Rational& base, unsigned e) {
    Rational r(1);
    Rational b = base;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

} // namespace nildyn
