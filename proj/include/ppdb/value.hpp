#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>
#include <compare>

namespace ppdb {

/// A scalar attribute value: integer, finite real, or string.
using Value = std::variant<std::int64_t, double, std::string>;

/// IEEE-754 total order on doubles (-0.0 < +0.0, NaN sorts last).  Stored
/// values are NaN-free by construction; the total order is still used so
/// canonical forms are deterministic for every representable bit pattern.
inline std::strong_ordering total_order(double a, double b) {
    auto key = [](double x) {
        std::int64_t bits = std::bit_cast<std::int64_t>(x);
        return bits < 0 ? std::int64_t(0x8000000000000000ULL) - bits : bits;
    };
    return key(a) <=> key(b);
}

/// Total order on Values: by alternative index, then by value.
inline std::strong_ordering compare_values(const Value& a, const Value& b) {
    if (a.index() != b.index()) return a.index() <=> b.index();
    switch (a.index()) {
        case 0: return std::get<0>(a) <=> std::get<0>(b);
        case 1: return total_order(std::get<1>(a), std::get<1>(b));
        default: return std::get<2>(a).compare(std::get<2>(b)) <=> 0;
    }
}

inline bool value_less(const Value& a, const Value& b) {
    return compare_values(a, b) < 0;
}

inline std::string value_to_string(const Value& v) {
    switch (v.index()) {
        case 0: return std::to_string(std::get<0>(v));
        case 1: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", std::get<1>(v));
            return buf;
        }
        default: return std::get<2>(v);
    }
}

}  // namespace ppdb
