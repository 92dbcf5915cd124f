#include "destfinder/choropleth.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <system_error>

#include <unistd.h>

#include "destfinder/api.hpp"

namespace destfinder {

std::string render_choropleth(const LinkedAtlas& atlas, const RecommendationResult& result) {
    std::map<std::string, std::size_t, std::less<>> by_id;
    for (std::size_t i = 0; i < result.all.size(); ++i) by_id.emplace(result.all[i].region_id, i);
    std::map<std::string, int, std::less<>> ranks;
    for (const auto& entry : result.top) ranks.emplace(entry.region_id, entry.rank);

    Document doc = Document::parse(atlas.geometry().source);
    for (auto& feature : doc["features"]) {
        auto& props = feature["properties"];
        const auto id = props["region_id"].get<std::string>();
        const auto& scored = result.all.at(by_id.at(id));
        props["score"] = round_half_up(scored.score, 2);
        props["band"] = std::string(to_string(scored.band));
        props["color"] = std::string(band_color(scored.band));
        if (auto it = ranks.find(id); it != ranks.end()) props["rank"] = it->second;
    }
    return doc.dump(1) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open \"" + tmp.string() + "\" for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("failed writing \"" + tmp.string() + "\"");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot move output into place at \"" + path + "\": " + ec.message());
    }
}

}  // namespace destfinder
