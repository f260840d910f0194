#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "ornlab/errors.hpp"

namespace ornlab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(std::int64_t num, std::int64_t den) { return Rat(BigInt(num), BigInt(den)); }

/// Parses "a/b" or "a" into an exact rational.
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(BigInt(s));
    return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline double rat_to_double(const Rat& r) { return r.template convert_to<double>(); }

/// floor(r) for non-negative r.
inline BigInt rat_floor(const Rat& r) { return numerator(r) / denominator(r); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline BigInt bigint_pow(const BigInt& base, unsigned exp) {
    BigInt out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

/// binomial(n, k) with exact integer arithmetic.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        out *= BigInt(n - k + i);
        out /= BigInt(i);
    }
    return out;
}

}  // namespace ornlab
