#pragma once

#include <string>

#include "destfinder/region_model.hpp"
#include "destfinder/scoring.hpp"

namespace destfinder {

/// The atlas geometry document with each feature's properties augmented by
/// `score` (2 decimals), `band`, `color` and, for ranked regions, `rank`.
/// Original properties and their order are preserved.
std::string render_choropleth(const LinkedAtlas& atlas, const RecommendationResult& result);

/// Writes via a sibling temp file and rename, so `path` is either untouched or
/// complete. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace destfinder
