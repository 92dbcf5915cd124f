#include "destfinder/api.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "json_checks.hpp"

namespace destfinder {

using detail::json;

Preferences parse_preferences(std::string_view bytes) {
    ViolationList out;
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        out.add(ErrorKind::MalformedDocument, "$", std::string("not valid JSON: ") + e.what());
        out.throw_if_any();
    }
    if (!root.is_object()) {
        out.add(ErrorKind::SchemaViolation, "$", "preferences must be a JSON object, got " + detail::describe(root));
        out.throw_if_any();
    }

    Preferences prefs;
    for (const auto& [key, value] : root.items()) {
        if (key != "budgetLevel" && key != "days" && key != "filterOverBudget" && key != "weights") {
            out.add(ErrorKind::SchemaViolation, key, "unknown field \"" + key + "\"");
        }
    }

    if (!root.contains("budgetLevel")) {
        out.add(ErrorKind::SchemaViolation, "budgetLevel", "missing required field \"budgetLevel\"");
    } else {
        const json& v = root["budgetLevel"];
        std::optional<BudgetLevel> level;
        if (v.is_string()) level = parse_budget_level(v.get<std::string>());
        if (!level) {
            out.add(ErrorKind::SchemaViolation, "budgetLevel",
                    "\"budgetLevel\" must be one of low, medium, high; got " + v.dump());
        } else {
            prefs.budget_level = *level;
        }
    }

    if (!root.contains("days")) {
        out.add(ErrorKind::SchemaViolation, "days", "missing required field \"days\"");
    } else if (!detail::int_in_range(root["days"], 1, std::numeric_limits<int>::max())) {
        out.add(ErrorKind::SchemaViolation, "days", "\"days\" must be an integer >= 1, got " + root["days"].dump());
    } else {
        prefs.days = root["days"].get<int>();
    }

    if (!root.contains("filterOverBudget")) {
        out.add(ErrorKind::SchemaViolation, "filterOverBudget", "missing required field \"filterOverBudget\"");
    } else if (!root["filterOverBudget"].is_boolean()) {
        out.add(ErrorKind::SchemaViolation, "filterOverBudget",
                "\"filterOverBudget\" must be a boolean, got " + root["filterOverBudget"].dump());
    } else {
        prefs.filter_over_budget = root["filterOverBudget"].get<bool>();
    }

    if (!root.contains("weights")) {
        out.add(ErrorKind::SchemaViolation, "weights", "missing required field \"weights\"");
    } else if (!root["weights"].is_object()) {
        out.add(ErrorKind::SchemaViolation, "weights",
                "\"weights\" must be an object, got " + detail::describe(root["weights"]));
    } else {
        const json& w = root["weights"];
        for (const auto& [key, value] : w.items()) {
            if (!parse_attribute(key)) {
                out.add(ErrorKind::SchemaViolation, "weights." + key, "unknown attribute \"weights." + key + "\"");
            }
        }
        for (auto a : kAttributes) {
            const std::string key(to_string(a));
            const std::string path = "weights." + key;
            if (!w.contains(key)) {
                out.add(ErrorKind::SchemaViolation, path, "missing weight \"" + path + "\"");
            } else if (!detail::int_in_range(w[key], 0, 100)) {
                out.add(ErrorKind::SchemaViolation, path,
                        "\"" + path + "\" must be an integer in [0, 100], got " + w[key].dump());
            } else {
                prefs.weights[a] = w[key].get<int>();
            }
        }
    }

    out.throw_if_any();
    return prefs;
}

Document preferences_to_json(const Preferences& prefs) {
    Document doc;
    doc["budgetLevel"] = std::string(to_string(prefs.budget_level));
    doc["days"] = prefs.days;
    doc["filterOverBudget"] = prefs.filter_over_budget;
    Document& w = doc["weights"];
    w = Document::object();
    for (auto a : kAttributes) w[std::string(to_string(a))] = prefs.weights[a];
    return doc;
}

double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::floor(value * scale + 0.5) / scale;
}

namespace {

template <typename T, typename F>
Document attribute_object(const AttributeMap<T>& m, F&& transform) {
    Document obj = Document::object();
    for (auto a : kAttributes) obj[std::string(to_string(a))] = transform(m[a]);
    return obj;
}

Document budgets_object(const BudgetTable& budgets) {
    Document obj = Document::object();
    for (auto level : kBudgetLevels) obj[std::string(to_string(level))] = budgets[level];
    return obj;
}

}  // namespace

Document region_metadata(const LinkedAtlas& atlas) {
    const auto& ds = atlas.dataset();
    Document doc;
    doc["currency"] = ds.currency;
    doc["budgets"] = budgets_object(ds.budgets);
    doc["attributes"] = Document::array();
    for (auto a : kAttributes) doc["attributes"].push_back(std::string(to_string(a)));
    doc["bands"] = Document::array();
    for (std::size_t i = 0; i < kBands.size(); ++i) {
        Document b;
        b["band"] = std::string(to_string(kBands[i]));
        b["color"] = std::string(band_color(kBands[i]));
        b["minScore"] = i < kBandThresholds.size() ? kBandThresholds[i] : 0.0;
        doc["bands"].push_back(std::move(b));
    }
    doc["regions"] = Document::array();
    for (const auto& r : ds.regions) {
        Document rj;
        rj["id"] = r.id;
        rj["name"] = r.name;
        rj["countries"] = r.countries;
        rj["costPerDay"] = r.cost_per_day;
        rj["scores"] = attribute_object(r.scores, [](int v) { return v; });
        doc["regions"].push_back(std::move(rj));
    }
    return doc;
}

Document recommend_response(const LinkedAtlas& atlas, const Preferences& prefs,
                            const RecommendationResult& result) {
    auto two = [](double v) { return round_half_up(v, 2); };
    auto four = [](double v) { return round_half_up(v, 4); };

    Document doc;
    doc["scores"] = Document::array();
    for (const auto& s : result.all) {
        Document sj;
        sj["regionId"] = s.region_id;
        sj["score"] = two(s.score);
        sj["band"] = std::string(to_string(s.band));
        sj["budgetFulfilled"] = s.budget_fulfilled;
        sj["filteredOut"] = s.filtered_out;
        sj["estimatedCost"] = two(s.estimated_cost);
        doc["scores"].push_back(std::move(sj));
    }
    doc["topK"] = Document::array();
    for (const auto& entry : result.top) {
        const auto& scored = result.all[entry.index];
        const auto& region = atlas.regions()[entry.index];
        Document tj;
        tj["rank"] = entry.rank;
        tj["regionId"] = entry.region_id;
        tj["name"] = region.name;
        tj["score"] = two(scored.score);
        tj["band"] = std::string(to_string(scored.band));
        tj["explanation"] = attribute_object(entry.explanation.shares, four);
        tj["attributeMatches"] = attribute_object(scored.attribute_matches, two);
        tj["regionScores"] = attribute_object(region.scores, [](int v) { return v; });
        tj["benchmarks"] = attribute_object(prefs.weights, [](int v) { return v; });
        doc["topK"].push_back(std::move(tj));
    }
    return doc;
}

std::string render_recommendation(const LinkedAtlas& atlas, const Preferences& prefs, std::size_t k) {
    return recommend_response(atlas, prefs, recommend(atlas, prefs, k)).dump(2);
}

Document violations_document(std::string_view error, const std::vector<Violation>& violations) {
    Document doc;
    doc["error"] = std::string(error);
    doc["violations"] = Document::array();
    for (const auto& v : violations) {
        Document vj;
        vj["kind"] = std::string(to_string(v.kind));
        vj["path"] = v.path;
        vj["message"] = v.message;
        doc["violations"].push_back(std::move(vj));
    }
    return doc;
}

}  // namespace destfinder
