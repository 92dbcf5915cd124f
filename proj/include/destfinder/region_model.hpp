#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "destfinder/attributes.hpp"

namespace destfinder {

enum class BudgetLevel { Low, Medium, High };

inline constexpr std::array<BudgetLevel, 3> kBudgetLevels = {
    BudgetLevel::Low, BudgetLevel::Medium, BudgetLevel::High};

std::string_view to_string(BudgetLevel level);
std::optional<BudgetLevel> parse_budget_level(std::string_view name);

/// Total trip budget per level, in dataset currency units. low < medium < high.
struct BudgetTable {
    std::array<double, 3> totals{};

    double operator[](BudgetLevel level) const { return totals[static_cast<std::size_t>(level)]; }
    double& operator[](BudgetLevel level) { return totals[static_cast<std::size_t>(level)]; }

    friend bool operator==(const BudgetTable&, const BudgetTable&) = default;
};

struct RegionRecord {
    std::string id;
    std::string name;
    std::vector<std::string> countries;  // ISO-3166 alpha-2
    double cost_per_day = 0.0;
    AttributeMap<int> scores;

    friend bool operator==(const RegionRecord&, const RegionRecord&) = default;
};

struct RegionDataset {
    int schema_version = 1;
    std::string currency;
    BudgetTable budgets;
    std::vector<RegionRecord> regions;

    const RegionRecord* find(std::string_view id) const;

    friend bool operator==(const RegionDataset&, const RegionDataset&) = default;
};

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const LonLat&, const LonLat&) = default;
};

using Ring = std::vector<LonLat>;
/// Exterior ring first, then holes.
using Polygon = std::vector<Ring>;

struct BoundingBox {
    LonLat min;
    LonLat max;

    LonLat center() const { return {(min.lon + max.lon) / 2.0, (min.lat + max.lat) / 2.0}; }
};

struct GeometryFeature {
    std::string region_id;
    /// A Polygon source yields one entry; a MultiPolygon yields one per member.
    std::vector<Polygon> polygons;
    std::optional<LonLat> anchor;

    BoundingBox bounds() const;
    /// Where the rank label goes: the explicit anchor, else the bounding-box center.
    LonLat label_point() const { return anchor ? *anchor : bounds().center(); }
};

struct GeometrySet {
    std::vector<GeometryFeature> features;
    /// The exact bytes the set was parsed from, served verbatim to map clients.
    std::string source;

    const GeometryFeature* find(std::string_view region_id) const;
};

/// Validated, immutable pairing of a region dataset with its geometry.
/// Region ids are in bijection between the two halves.
class LinkedAtlas {
public:
    const RegionDataset& dataset() const noexcept { return dataset_; }
    const GeometrySet& geometry() const noexcept { return geometry_; }
    const std::vector<RegionRecord>& regions() const noexcept { return dataset_.regions; }
    std::size_t size() const noexcept { return dataset_.regions.size(); }

private:
    LinkedAtlas(RegionDataset dataset, GeometrySet geometry)
        : dataset_(std::move(dataset)), geometry_(std::move(geometry)) {}

    friend LinkedAtlas link_atlas(RegionDataset dataset, GeometrySet geometry);

    RegionDataset dataset_;
    GeometrySet geometry_;
};

/// Parses and strictly validates a region dataset document. Throws
/// ValidationError listing every violation; nothing is repaired.
RegionDataset parse_region_dataset(std::string_view bytes);

/// Canonical JSON form of a dataset; parse_region_dataset accepts it back.
std::string serialize_region_dataset(const RegionDataset& dataset);

/// Parses a feature collection whose features are tagged with
/// `properties.region_id`. Throws ValidationError.
GeometrySet parse_geometry(std::string_view bytes);

/// Throws ValidationError(IdMismatch) unless both sides carry the same ids.
LinkedAtlas link_atlas(RegionDataset dataset, GeometrySet geometry);

/// Reads a whole file. Throws IoError.
std::string read_file(const std::string& path);

/// Reads, parses and links both files. Throws IoError before any parsing if a
/// file is unreadable; otherwise ValidationError with the violations of both.
LinkedAtlas load_atlas(const std::string& regions_path, const std::string& geometry_path);

}  // namespace destfinder
