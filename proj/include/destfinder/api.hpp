#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "destfinder/errors.hpp"
#include "destfinder/region_model.hpp"
#include "destfinder/scoring.hpp"

namespace destfinder {

/// JSON documents exchanged by the CLI and the HTTP service. Objects keep
/// insertion order so attribute maps serialize in canonical order.
using Document = nlohmann::ordered_json;

/// Parses a preferences document. All nine weights are required; unknown keys
/// and out-of-range values are rejected. Throws ValidationError with every
/// violation, paths like `weights.shopping`.
Preferences parse_preferences(std::string_view bytes);

Document preferences_to_json(const Preferences& prefs);

/// Round half up to `decimals` places.
double round_half_up(double value, int decimals);

/// GET /api/v1/regions body.
Document region_metadata(const LinkedAtlas& atlas);

/// Recommendation response: every region's score plus the explained top-K.
Document recommend_response(const LinkedAtlas& atlas, const Preferences& prefs,
                            const RecommendationResult& result);

/// Runs the engine and renders the response text shared by the CLI and the
/// service, so both frontends emit identical bytes.
std::string render_recommendation(const LinkedAtlas& atlas, const Preferences& prefs, std::size_t k);

/// Error body: {"error": <kind>, "violations": [{kind, path, message}...]}.
Document violations_document(std::string_view error, const std::vector<Violation>& violations);

}  // namespace destfinder
