// Exact rational scalars used throughout the library.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gktorus {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

inline bool is_integer(const Rational& q) {
    return denominator(q) == 1;
}

/// Renders "n" for integers and "n/d" otherwise.
inline std::string to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (!is_integer(q)) {
        s += "/" + denominator(q).str();
    }
    return s;
}

/// Parses "n" or "n/d" with optional sign.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(text));
        }
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational literal: " + text);
    }
}

}  // namespace gktorus
