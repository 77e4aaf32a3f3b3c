#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace nsctl {

// Arbitrary-precision rational, always kept in canonical reduced form
// (denominator > 0, gcd = 1) by the backend. Equality is structural.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "p/q" or a bare integer "p". Rejects q <= 0 and junk.
inline Rational parse_rational(const std::string& tok) {
    auto bad = [&]() -> ParseError {
        return ParseError("invalid rational token: '" + tok + "'");
    };
    auto slash = tok.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(tok));
        }
        BigInt num(tok.substr(0, slash));
        BigInt den(tok.substr(slash + 1));
        if (den <= 0) throw bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw bad();
    }
}

/// Canonical text form: "p/q", or "p" when the value is an integer.
inline std::string format_rational(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

}  // namespace nsctl
