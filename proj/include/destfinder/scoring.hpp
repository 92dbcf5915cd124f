#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "destfinder/attributes.hpp"
#include "destfinder/region_model.hpp"

namespace destfinder {

struct Preferences {
    BudgetLevel budget_level = BudgetLevel::Medium;
    int days = 7;
    bool filter_over_budget = false;
    AttributeMap<int> weights = AttributeMap<int>::filled(50);

    friend bool operator==(const Preferences&, const Preferences&) = default;
};

enum class ScoreBand { Excellent, Good, Fair, Uncertain, Poor };

inline constexpr std::array<ScoreBand, 5> kBands = {
    ScoreBand::Excellent, ScoreBand::Good, ScoreBand::Fair, ScoreBand::Uncertain, ScoreBand::Poor};

/// Lower bounds (inclusive) for Excellent, Good, Fair, Uncertain. Anything
/// below the last is Poor.
inline constexpr std::array<double, 4> kBandThresholds = {85.0, 70.0, 55.0, 40.0};

std::string_view to_string(ScoreBand band);
/// Legend / choropleth fill color, as "#rrggbb".
std::string_view band_color(ScoreBand band);

ScoreBand band_of(double score);

/// 100 - |weight - region_score|.
constexpr double attribute_match(int weight, int region_score) {
    const int diff = weight > region_score ? weight - region_score : region_score - weight;
    return 100.0 - static_cast<double>(diff);
}

double estimate_trip_cost(const RegionRecord& region, int days);

/// Estimated cost at or below the selected budget counts as fulfilled.
bool budget_fulfilled(const RegionRecord& region, const Preferences& prefs, const BudgetTable& budgets);

struct ScoredRegion {
    std::string region_id;
    double score = 0.0;
    ScoreBand band = ScoreBand::Poor;
    bool budget_fulfilled = false;
    double estimated_cost = 0.0;
    AttributeMap<double> attribute_matches;
    bool filtered_out = false;
};

/// Score in [0, 100]. When the budget is fulfilled it enters the average as a
/// tenth, perfectly matched term; when it is not, it is left out of the
/// average, or the score is forced to 0 if the over-budget filter is on.
ScoredRegion score_region(const RegionRecord& region, const Preferences& prefs, const BudgetTable& budgets);

/// Per-attribute share of a region's recommendation (the explanation pie).
struct Explanation {
    AttributeMap<double> shares;
};

/// share_a = weight_a * match_a / sum_b(weight_b * match_b); uniform when the
/// sum is zero. The budget never appears in explanations.
Explanation explain(const RegionRecord& region, const Preferences& prefs);

struct RankedRegion {
    int rank = 0;  // 1-based
    std::string region_id;
    std::size_t index = 0;  // position in the scored list
    Explanation explanation;
};

struct RecommendationResult {
    std::vector<ScoredRegion> all;  // input order
    std::vector<RankedRegion> top;  // score descending, then id ascending
};

inline constexpr std::size_t kDefaultTopK = 10;

/// Scores every region and ranks the best min(k, N). Throws
/// ValidationError(EmptyAtlas) on an empty region list.
RecommendationResult recommend(std::span<const RegionRecord> regions, const BudgetTable& budgets,
                               const Preferences& prefs, std::size_t k = kDefaultTopK);

RecommendationResult recommend(const LinkedAtlas& atlas, const Preferences& prefs,
                               std::size_t k = kDefaultTopK);

}  // namespace destfinder
