#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace destfinder {

/// The nine activity attributes scored on both regions and user preferences.
/// Declaration order is the canonical order used for serialization and display.
enum class Attribute : std::size_t {
    Nature,
    Architecture,
    Hiking,
    WinterSports,
    Beach,
    Culture,
    Culinary,
    Entertainment,
    Shopping,
};

inline constexpr std::size_t kAttributeCount = 9;

inline constexpr std::array<Attribute, kAttributeCount> kAttributes = {
    Attribute::Nature,  Attribute::Architecture, Attribute::Hiking,
    Attribute::WinterSports, Attribute::Beach,   Attribute::Culture,
    Attribute::Culinary, Attribute::Entertainment, Attribute::Shopping,
};

inline constexpr std::array<std::string_view, kAttributeCount> kAttributeNames = {
    "nature",  "architecture", "hiking",        "winter_sports", "beach",
    "culture", "culinary",     "entertainment", "shopping",
};

constexpr std::string_view to_string(Attribute a) {
    return kAttributeNames[static_cast<std::size_t>(a)];
}

constexpr std::optional<Attribute> parse_attribute(std::string_view name) {
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (kAttributeNames[i] == name) return kAttributes[i];
    }
    return std::nullopt;
}

/// Total map from Attribute to T. Every attribute always has a value.
template <typename T>
struct AttributeMap {
    std::array<T, kAttributeCount> values{};

    constexpr T& operator[](Attribute a) { return values[static_cast<std::size_t>(a)]; }
    constexpr const T& operator[](Attribute a) const {
        return values[static_cast<std::size_t>(a)];
    }

    static constexpr AttributeMap filled(T v) {
        AttributeMap m;
        m.values.fill(v);
        return m;
    }

    friend constexpr bool operator==(const AttributeMap&, const AttributeMap&) = default;
};

}  // namespace destfinder
