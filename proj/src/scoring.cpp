#include "destfinder/scoring.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "destfinder/errors.hpp"

namespace destfinder {

std::string_view to_string(ScoreBand band) {
    switch (band) {
        case ScoreBand::Excellent: return "Excellent";
        case ScoreBand::Good: return "Good";
        case ScoreBand::Fair: return "Fair";
        case ScoreBand::Uncertain: return "Uncertain";
        case ScoreBand::Poor: return "Poor";
    }
    return "Poor";
}

std::string_view band_color(ScoreBand band) {
    switch (band) {
        case ScoreBand::Excellent: return "#1a9850";
        case ScoreBand::Good: return "#91cf60";
        case ScoreBand::Fair: return "#fee08b";
        case ScoreBand::Uncertain: return "#fc8d59";
        case ScoreBand::Poor: return "#d73027";
    }
    return "#d73027";
}

ScoreBand band_of(double score) {
    for (std::size_t i = 0; i < kBandThresholds.size(); ++i) {
        if (score >= kBandThresholds[i]) return kBands[i];
    }
    return ScoreBand::Poor;
}

double estimate_trip_cost(const RegionRecord& region, int days) {
    return region.cost_per_day * static_cast<double>(days);
}

bool budget_fulfilled(const RegionRecord& region, const Preferences& prefs, const BudgetTable& budgets) {
    return estimate_trip_cost(region, prefs.days) <= budgets[prefs.budget_level];
}

ScoredRegion score_region(const RegionRecord& region, const Preferences& prefs, const BudgetTable& budgets) {
    ScoredRegion out;
    out.region_id = region.id;
    out.estimated_cost = estimate_trip_cost(region, prefs.days);
    out.budget_fulfilled = out.estimated_cost <= budgets[prefs.budget_level];

    // Integer sum keeps the average exact before the single division.
    int diff_sum = 0;
    for (auto a : kAttributes) {
        out.attribute_matches[a] = attribute_match(prefs.weights[a], region.scores[a]);
        diff_sum += std::abs(prefs.weights[a] - region.scores[a]);
    }

    if (out.budget_fulfilled) {
        out.score = 100.0 - static_cast<double>(diff_sum) / 10.0;
    } else if (prefs.filter_over_budget) {
        out.score = 0.0;
        out.filtered_out = true;
    } else {
        out.score = 100.0 - static_cast<double>(diff_sum) / 9.0;
    }
    out.band = band_of(out.score);
    return out;
}

Explanation explain(const RegionRecord& region, const Preferences& prefs) {
    AttributeMap<double> raw;
    double total = 0.0;
    for (auto a : kAttributes) {
        raw[a] = static_cast<double>(prefs.weights[a]) * attribute_match(prefs.weights[a], region.scores[a]);
        total += raw[a];
    }
    Explanation e;
    if (total <= 0.0) {
        e.shares = AttributeMap<double>::filled(1.0 / static_cast<double>(kAttributeCount));
        return e;
    }
    for (auto a : kAttributes) e.shares[a] = raw[a] / total;
    return e;
}

RecommendationResult recommend(std::span<const RegionRecord> regions, const BudgetTable& budgets,
                               const Preferences& prefs, std::size_t k) {
    if (regions.empty()) {
        throw ValidationError({{ErrorKind::EmptyAtlas, "regions", "cannot recommend from an empty atlas"}});
    }
    RecommendationResult result;
    result.all.reserve(regions.size());
    for (const auto& r : regions) result.all.push_back(score_region(r, prefs, budgets));

    std::vector<std::size_t> order(regions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t n = std::min(k, order.size());
    auto better = [&](std::size_t lhs, std::size_t rhs) {
        const auto& a = result.all[lhs];
        const auto& b = result.all[rhs];
        if (a.score != b.score) return a.score > b.score;
        return a.region_id < b.region_id;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), better);

    result.top.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = order[i];
        result.top.push_back({static_cast<int>(i + 1), regions[idx].id, idx, explain(regions[idx], prefs)});
    }
    return result;
}

RecommendationResult recommend(const LinkedAtlas& atlas, const Preferences& prefs, std::size_t k) {
    return recommend(std::span<const RegionRecord>(atlas.regions()), atlas.dataset().budgets, prefs, k);
}

}  // namespace destfinder
