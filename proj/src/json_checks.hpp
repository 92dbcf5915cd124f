#pragma once

// Small helpers shared by the strict document validators.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "json.hpp"

namespace destfinder::detail {

using json = nlohmann::json;

inline std::string describe(const json& v) {
    switch (v.type()) {
        case json::value_t::null: return "null";
        case json::value_t::boolean: return "a boolean";
        case json::value_t::string: return "a string";
        case json::value_t::array: return "an array";
        case json::value_t::object: return "an object";
        case json::value_t::number_float: return "a non-integer number";
        case json::value_t::number_integer:
        case json::value_t::number_unsigned: return "an integer";
        default: return "an unsupported value";
    }
}

inline bool is_finite_number(const json& v) {
    return v.is_number() && std::isfinite(v.get<double>());
}

/// Integer in [lo, hi]; rejects floats even when integral-valued.
inline bool int_in_range(const json& v, long long lo, long long hi) {
    if (v.is_number_unsigned()) {
        auto u = v.get<unsigned long long>();
        return u <= static_cast<unsigned long long>(std::numeric_limits<long long>::max()) &&
               static_cast<long long>(u) >= lo && static_cast<long long>(u) <= hi;
    }
    if (v.is_number_integer()) {
        auto i = v.get<long long>();
        return i >= lo && i <= hi;
    }
    return false;
}

inline std::string join_path(std::string_view base, std::string_view field) {
    std::string out(base);
    if (!out.empty()) out += '.';
    out += field;
    return out;
}

}  // namespace destfinder::detail
