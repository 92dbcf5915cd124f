#include "destfinder/region_model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "destfinder/errors.hpp"
#include "json_checks.hpp"

namespace destfinder {

using detail::describe;
using detail::json;

std::string_view to_string(BudgetLevel level) {
    switch (level) {
        case BudgetLevel::Low: return "low";
        case BudgetLevel::Medium: return "medium";
        case BudgetLevel::High: return "high";
    }
    return "unknown";
}

std::optional<BudgetLevel> parse_budget_level(std::string_view name) {
    for (auto level : kBudgetLevels) {
        if (to_string(level) == name) return level;
    }
    return std::nullopt;
}

const RegionRecord* RegionDataset::find(std::string_view id) const {
    auto it = std::find_if(regions.begin(), regions.end(),
                           [id](const RegionRecord& r) { return r.id == id; });
    return it == regions.end() ? nullptr : &*it;
}

const GeometryFeature* GeometrySet::find(std::string_view region_id) const {
    auto it = std::find_if(features.begin(), features.end(),
                           [region_id](const GeometryFeature& f) { return f.region_id == region_id; });
    return it == features.end() ? nullptr : &*it;
}

BoundingBox GeometryFeature::bounds() const {
    BoundingBox box{{180.0, 90.0}, {-180.0, -90.0}};
    for (const auto& polygon : polygons) {
        for (const auto& ring : polygon) {
            for (const auto& p : ring) {
                box.min.lon = std::min(box.min.lon, p.lon);
                box.min.lat = std::min(box.min.lat, p.lat);
                box.max.lon = std::max(box.max.lon, p.lon);
                box.max.lat = std::max(box.max.lat, p.lat);
            }
        }
    }
    return box;
}

namespace {

const std::regex& id_pattern() {
    static const std::regex re("^[a-z0-9_-]+$");
    return re;
}

const std::regex& country_pattern() {
    static const std::regex re("^[A-Z]{2}$");
    return re;
}

std::optional<json> parse_json(std::string_view bytes, ViolationList& out) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        out.add(ErrorKind::MalformedDocument, "$", std::string("not valid JSON: ") + e.what());
        return std::nullopt;
    }
}

void reject_unknown_keys(const json& obj, const std::set<std::string_view>& allowed,
                         const std::string& path, const std::string& owner, ViolationList& out) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            out.add(ErrorKind::SchemaViolation, detail::join_path(path, key),
                    owner + "unknown field \"" + key + "\"");
        }
    }
}

// ---------------------------------------------------------------------------
// Region dataset

void check_budgets(const json& root, BudgetTable& budgets, ViolationList& out) {
    if (!root.contains("budgets")) {
        out.add(ErrorKind::SchemaViolation, "budgets", "missing required field \"budgets\"");
        return;
    }
    const json& b = root["budgets"];
    if (!b.is_object()) {
        out.add(ErrorKind::SchemaViolation, "budgets", "\"budgets\" must be an object, got " + describe(b));
        return;
    }
    reject_unknown_keys(b, {"low", "medium", "high"}, "budgets", "", out);
    bool all_valid = true;
    for (auto level : kBudgetLevels) {
        std::string key(to_string(level));
        std::string path = "budgets." + key;
        if (!b.contains(key)) {
            out.add(ErrorKind::SchemaViolation, path, "missing budget level \"" + key + "\"");
            all_valid = false;
            continue;
        }
        const json& v = b[key];
        if (!detail::is_finite_number(v) || v.get<double>() <= 0.0) {
            out.add(ErrorKind::SchemaViolation, path,
                    "budget \"" + key + "\" must be a positive number, got " + v.dump());
            all_valid = false;
            continue;
        }
        budgets[level] = v.get<double>();
    }
    if (all_valid && !(budgets[BudgetLevel::Low] < budgets[BudgetLevel::Medium] &&
                       budgets[BudgetLevel::Medium] < budgets[BudgetLevel::High])) {
        out.add(ErrorKind::SchemaViolation, "budgets",
                "budget levels must be strictly ascending (low < medium < high)");
    }
}

// Regions are addressed by id when they have a usable one, so reported paths
// do not depend on list order.
std::string region_label(const json& region, std::size_t index) {
    if (region.is_object() && region.contains("id") && region["id"].is_string()) {
        const auto& id = region["id"].get_ref<const std::string&>();
        if (!id.empty()) return id;
    }
    return "#" + std::to_string(index);
}

std::optional<RegionRecord> check_region(const json& r, std::size_t index, ViolationList& out) {
    const std::string label = region_label(r, index);
    const std::string path = "regions[" + label + "]";
    const std::string owner = "region \"" + label + "\": ";
    if (!r.is_object()) {
        out.add(ErrorKind::SchemaViolation, path, owner + "must be an object, got " + describe(r));
        return std::nullopt;
    }
    const std::size_t before = out.size();
    reject_unknown_keys(r, {"id", "name", "countries", "costPerDay", "scores"}, path, owner, out);

    RegionRecord rec;
    auto require = [&](const char* key) -> const json* {
        if (!r.contains(key)) {
            out.add(ErrorKind::SchemaViolation, detail::join_path(path, key),
                    owner + "missing required field \"" + key + "\"");
            return nullptr;
        }
        return &r[key];
    };

    if (const json* id = require("id")) {
        if (!id->is_string() || !std::regex_match(id->get<std::string>(), id_pattern())) {
            out.add(ErrorKind::SchemaViolation, path + ".id",
                    owner + "field \"id\" must be a non-empty slug matching [a-z0-9_-]+, got " +
                        id->dump());
        } else {
            rec.id = id->get<std::string>();
        }
    }
    if (const json* name = require("name")) {
        if (!name->is_string() || name->get_ref<const std::string&>().empty()) {
            out.add(ErrorKind::SchemaViolation, path + ".name",
                    owner + "field \"name\" must be a non-empty string, got " + name->dump());
        } else {
            rec.name = name->get<std::string>();
        }
    }
    if (const json* countries = require("countries")) {
        if (!countries->is_array() || countries->empty()) {
            out.add(ErrorKind::SchemaViolation, path + ".countries",
                    owner + "field \"countries\" must be a non-empty array of ISO-3166 alpha-2 codes");
        } else {
            for (std::size_t i = 0; i < countries->size(); ++i) {
                const json& c = (*countries)[i];
                if (!c.is_string() || !std::regex_match(c.get<std::string>(), country_pattern())) {
                    out.add(ErrorKind::SchemaViolation,
                            path + ".countries[" + std::to_string(i) + "]",
                            owner + "field \"countries\" entry " + c.dump() +
                                " is not an ISO-3166 alpha-2 code");
                } else {
                    rec.countries.push_back(c.get<std::string>());
                }
            }
        }
    }
    if (const json* cost = require("costPerDay")) {
        if (!detail::is_finite_number(*cost) || cost->get<double>() <= 0.0) {
            out.add(ErrorKind::SchemaViolation, path + ".costPerDay",
                    owner + "field \"costPerDay\" must be a positive number, got " + cost->dump());
        } else {
            rec.cost_per_day = cost->get<double>();
        }
    }
    if (const json* scores = require("scores")) {
        if (!scores->is_object()) {
            out.add(ErrorKind::SchemaViolation, path + ".scores",
                    owner + "field \"scores\" must be an object, got " + describe(*scores));
        } else {
            for (const auto& [key, value] : scores->items()) {
                if (!parse_attribute(key)) {
                    out.add(ErrorKind::SchemaViolation, path + ".scores." + key,
                            owner + "unknown attribute \"scores." + key + "\"");
                }
            }
            for (auto a : kAttributes) {
                std::string key(to_string(a));
                std::string field = "scores." + key;
                if (!scores->contains(key)) {
                    out.add(ErrorKind::SchemaViolation, path + "." + field,
                            owner + "missing attribute \"" + field + "\"");
                    continue;
                }
                const json& v = (*scores)[key];
                if (!detail::int_in_range(v, 0, 100)) {
                    out.add(ErrorKind::SchemaViolation, path + "." + field,
                            owner + "field \"" + field + "\" must be an integer in [0, 100], got " +
                                v.dump());
                    continue;
                }
                rec.scores[a] = v.get<int>();
            }
        }
    }
    if (out.size() != before) return std::nullopt;
    return rec;
}

// ---------------------------------------------------------------------------
// Geometry

std::optional<LonLat> check_position(const json& p, const std::string& path, const std::string& owner,
                                     ViolationList& out) {
    if (!p.is_array() || p.size() < 2 || p.size() > 3 ||
        !std::all_of(p.begin(), p.end(), [](const json& c) { return detail::is_finite_number(c); })) {
        out.add(ErrorKind::SchemaViolation, path,
                owner + "position must be [lon, lat] or [lon, lat, alt] numbers, got " + p.dump());
        return std::nullopt;
    }
    LonLat ll{p[0].get<double>(), p[1].get<double>()};
    if (ll.lon < -180.0 || ll.lon > 180.0 || ll.lat < -90.0 || ll.lat > 90.0) {
        out.add(ErrorKind::SchemaViolation, path,
                owner + "position " + p.dump() + " is outside WGS-84 lon/lat bounds");
        return std::nullopt;
    }
    return ll;
}

std::optional<Polygon> check_polygon(const json& rings, const std::string& path,
                                     const std::string& owner, ViolationList& out) {
    if (!rings.is_array() || rings.empty()) {
        out.add(ErrorKind::SchemaViolation, path, owner + "polygon must be a non-empty array of rings");
        return std::nullopt;
    }
    Polygon polygon;
    bool ok = true;
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const json& ring = rings[r];
        std::string ring_path = path + "[" + std::to_string(r) + "]";
        if (!ring.is_array() || ring.size() < 4) {
            out.add(ErrorKind::SchemaViolation, ring_path,
                    owner + "ring must hold at least 4 positions");
            ok = false;
            continue;
        }
        Ring parsed;
        bool ring_ok = true;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            auto p = check_position(ring[i], ring_path + "[" + std::to_string(i) + "]", owner, out);
            if (!p) {
                ring_ok = false;
                continue;
            }
            parsed.push_back(*p);
        }
        if (ring_ok && !(parsed.front() == parsed.back())) {
            out.add(ErrorKind::SchemaViolation, ring_path,
                    owner + "ring is not closed (first position != last position)");
            ring_ok = false;
        }
        ok = ok && ring_ok;
        if (ring_ok) polygon.push_back(std::move(parsed));
    }
    if (!ok) return std::nullopt;
    return polygon;
}

std::optional<std::vector<Polygon>> check_geometry(const json& feature, const std::string& path,
                                                   const std::string& owner, ViolationList& out) {
    const std::string gpath = path + ".geometry";
    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
        out.add(ErrorKind::SchemaViolation, gpath, owner + "geometry must be a Polygon or MultiPolygon object");
        return std::nullopt;
    }
    const json& g = feature["geometry"];
    const std::string type = g.contains("type") && g["type"].is_string() ? g["type"].get<std::string>() : "";
    if (type != "Polygon" && type != "MultiPolygon") {
        out.add(ErrorKind::SchemaViolation, gpath + ".type",
                owner + "geometry type must be Polygon or MultiPolygon, got " +
                    (g.contains("type") ? g["type"].dump() : std::string("nothing")));
        return std::nullopt;
    }
    if (!g.contains("coordinates")) {
        out.add(ErrorKind::SchemaViolation, gpath + ".coordinates", owner + "geometry has no coordinates");
        return std::nullopt;
    }
    const json& coords = g["coordinates"];
    std::vector<Polygon> polygons;
    if (type == "Polygon") {
        auto p = check_polygon(coords, gpath + ".coordinates", owner, out);
        if (!p) return std::nullopt;
        polygons.push_back(std::move(*p));
        return polygons;
    }
    if (!coords.is_array() || coords.empty()) {
        out.add(ErrorKind::SchemaViolation, gpath + ".coordinates",
                owner + "MultiPolygon must hold at least one polygon");
        return std::nullopt;
    }
    bool ok = true;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        auto p = check_polygon(coords[i], gpath + ".coordinates[" + std::to_string(i) + "]", owner, out);
        if (!p) {
            ok = false;
            continue;
        }
        polygons.push_back(std::move(*p));
    }
    if (!ok) return std::nullopt;
    return polygons;
}

}  // namespace

RegionDataset parse_region_dataset(std::string_view bytes) {
    ViolationList out;
    auto doc = parse_json(bytes, out);
    out.throw_if_any();
    const json& root = *doc;
    if (!root.is_object()) {
        out.add(ErrorKind::SchemaViolation, "$", "dataset must be a JSON object, got " + describe(root));
        out.throw_if_any();
    }

    RegionDataset ds;
    reject_unknown_keys(root, {"schemaVersion", "currency", "budgets", "regions"}, "", "", out);

    if (!root.contains("schemaVersion")) {
        out.add(ErrorKind::SchemaViolation, "schemaVersion", "missing required field \"schemaVersion\"");
    } else if (!detail::int_in_range(root["schemaVersion"], 1, 1)) {
        out.add(ErrorKind::SchemaViolation, "schemaVersion",
                "unsupported schemaVersion " + root["schemaVersion"].dump() + " (expected 1)");
    }

    if (!root.contains("currency")) {
        out.add(ErrorKind::SchemaViolation, "currency", "missing required field \"currency\"");
    } else if (!root["currency"].is_string() || root["currency"].get_ref<const std::string&>().empty()) {
        out.add(ErrorKind::SchemaViolation, "currency", "\"currency\" must be a non-empty string");
    } else {
        ds.currency = root["currency"].get<std::string>();
    }

    check_budgets(root, ds.budgets, out);

    if (!root.contains("regions")) {
        out.add(ErrorKind::SchemaViolation, "regions", "missing required field \"regions\"");
    } else if (!root["regions"].is_array()) {
        out.add(ErrorKind::SchemaViolation, "regions", "\"regions\" must be an array, got " + describe(root["regions"]));
    } else if (root["regions"].empty()) {
        out.add(ErrorKind::SchemaViolation, "regions", "dataset must contain at least one region");
    } else {
        const json& regions = root["regions"];
        std::map<std::string, int> seen;
        for (std::size_t i = 0; i < regions.size(); ++i) {
            if (auto rec = check_region(regions[i], i, out)) {
                ds.regions.push_back(std::move(*rec));
            }
            if (regions[i].is_object() && regions[i].contains("id") && regions[i]["id"].is_string()) {
                ++seen[regions[i]["id"].get<std::string>()];
            }
        }
        for (const auto& [id, count] : seen) {
            if (count > 1 && !id.empty()) {
                out.add(ErrorKind::SchemaViolation, "regions[" + id + "].id",
                        "region \"" + id + "\": duplicate id (appears " + std::to_string(count) + " times)");
            }
        }
    }

    out.throw_if_any();
    return ds;
}

std::string serialize_region_dataset(const RegionDataset& dataset) {
    nlohmann::ordered_json doc;
    doc["schemaVersion"] = dataset.schema_version;
    doc["currency"] = dataset.currency;
    for (auto level : kBudgetLevels) {
        doc["budgets"][std::string(to_string(level))] = dataset.budgets[level];
    }
    doc["regions"] = nlohmann::ordered_json::array();
    for (const auto& r : dataset.regions) {
        nlohmann::ordered_json rj;
        rj["id"] = r.id;
        rj["name"] = r.name;
        rj["countries"] = r.countries;
        rj["costPerDay"] = r.cost_per_day;
        for (auto a : kAttributes) rj["scores"][std::string(to_string(a))] = r.scores[a];
        doc["regions"].push_back(std::move(rj));
    }
    return doc.dump(2) + "\n";
}

GeometrySet parse_geometry(std::string_view bytes) {
    ViolationList out;
    auto doc = parse_json(bytes, out);
    out.throw_if_any();
    const json& root = *doc;
    if (!root.is_object() || !root.contains("type") || root["type"] != "FeatureCollection") {
        out.add(ErrorKind::SchemaViolation, "type", "geometry document must be a FeatureCollection");
        out.throw_if_any();
    }
    if (!root.contains("features") || !root["features"].is_array()) {
        out.add(ErrorKind::SchemaViolation, "features", "FeatureCollection must carry a \"features\" array");
        out.throw_if_any();
    }

    GeometrySet set;
    set.source.assign(bytes.begin(), bytes.end());
    const json& features = root["features"];
    std::map<std::string, std::vector<std::size_t>> tags;

    for (std::size_t i = 0; i < features.size(); ++i) {
        const json& f = features[i];
        const std::string path = "features[" + std::to_string(i) + "]";
        if (!f.is_object() || !f.contains("type") || f["type"] != "Feature") {
            out.add(ErrorKind::SchemaViolation, path + ".type", "feature " + std::to_string(i) + " is not a Feature object");
            continue;
        }
        GeometryFeature feature;
        bool ok = true;
        const json* props = f.contains("properties") && f["properties"].is_object() ? &f["properties"] : nullptr;
        if (!props || !props->contains("region_id") || !(*props)["region_id"].is_string() ||
            (*props)["region_id"].get_ref<const std::string&>().empty()) {
            out.add(ErrorKind::MissingRegionTag, path + ".properties.region_id",
                    "feature " + std::to_string(i) + " has no string properties.region_id");
            ok = false;
        } else {
            feature.region_id = (*props)["region_id"].get<std::string>();
            tags[feature.region_id].push_back(i);
        }
        const std::string owner =
            feature.region_id.empty() ? "feature " + std::to_string(i) + ": " : "feature \"" + feature.region_id + "\": ";
        if (props && props->contains("anchor")) {
            auto a = check_position((*props)["anchor"], path + ".properties.anchor", owner, out);
            if (a) feature.anchor = *a;
            else ok = false;
        }
        auto polygons = check_geometry(f, path, owner, out);
        if (!polygons) ok = false;
        else feature.polygons = std::move(*polygons);
        if (ok) set.features.push_back(std::move(feature));
    }

    for (const auto& [id, indices] : tags) {
        if (indices.size() < 2) continue;
        std::string list;
        for (auto idx : indices) list += (list.empty() ? "" : ", ") + std::to_string(idx);
        out.add(ErrorKind::DuplicateRegionTag, "features[" + std::to_string(indices[1]) + "].properties.region_id",
                "region_id \"" + id + "\" tags multiple features (indices " + list + ")");
    }

    out.throw_if_any();
    return set;
}

LinkedAtlas link_atlas(RegionDataset dataset, GeometrySet geometry) {
    std::set<std::string> dataset_ids;
    std::set<std::string> geometry_ids;
    for (const auto& r : dataset.regions) dataset_ids.insert(r.id);
    for (const auto& f : geometry.features) geometry_ids.insert(f.region_id);

    ViolationList out;
    for (const auto& id : dataset_ids) {
        if (!geometry_ids.contains(id)) {
            out.add(ErrorKind::IdMismatch, "geometry",
                    "region \"" + id + "\" is missing from the geometry (geometry-missing)");
        }
    }
    for (const auto& id : geometry_ids) {
        if (!dataset_ids.contains(id)) {
            out.add(ErrorKind::IdMismatch, "dataset",
                    "geometry feature \"" + id + "\" is missing from the dataset (dataset-missing)");
        }
    }
    if (dataset_ids.empty() && out.empty()) {
        out.add(ErrorKind::EmptyAtlas, "regions", "atlas would contain no regions");
    }
    out.throw_if_any();
    return LinkedAtlas(std::move(dataset), std::move(geometry));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open \"" + path + "\" for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading \"" + path + "\"");
    return buf.str();
}

LinkedAtlas load_atlas(const std::string& regions_path, const std::string& geometry_path) {
    const std::string regions_bytes = read_file(regions_path);
    const std::string geometry_bytes = read_file(geometry_path);

    ViolationList out;
    std::optional<RegionDataset> dataset;
    std::optional<GeometrySet> geometry;
    try {
        dataset = parse_region_dataset(regions_bytes);
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) out.add(v.kind, regions_path + ": " + v.path, v.message);
    }
    try {
        geometry = parse_geometry(geometry_bytes);
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) out.add(v.kind, geometry_path + ": " + v.path, v.message);
    }
    out.throw_if_any();
    return link_atlas(std::move(*dataset), std::move(*geometry));
}

}  // namespace destfinder
