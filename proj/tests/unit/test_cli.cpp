#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "httplib.h"
#include "json.hpp"

#include "destfinder/api.hpp"
#include "support/generators.hpp"
#include "support/paths.hpp"
#include "support/process.hpp"

using namespace destfinder;
using nlohmann::json;
using testsupport::fixture;
using testsupport::run_cli;

namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("destfinder-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& contents) const {
        auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << contents;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

const std::string kRegions = testsupport::regions_fixture();
const std::string kGeometry = testsupport::geometry_fixture();

}  // namespace

TEST(CliValidate, FixturesAreValid) {
    auto r = run_cli({"validate", "--regions", kRegions, "--geometry", kGeometry});
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out, "OK: 30 regions\n");
}

TEST(CliValidate, DuplicateIdIsExitOne) {
    auto doc = json::parse(read_file(kRegions));
    doc["regions"][1]["id"] = "benelux";
    TempDir tmp;
    auto r = run_cli({"validate", "--regions", tmp.file("r.json", doc.dump()), "--geometry", kGeometry});
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.out.find("duplicate id"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("benelux"), std::string::npos);
}

TEST(CliValidate, ReportsViolationsFromBothFiles) {
    auto doc = json::parse(read_file(kRegions));
    doc["regions"][0]["scores"]["nature"] = 101;
    auto geo = json::parse(read_file(kGeometry));
    geo["features"][3]["properties"].erase("region_id");
    TempDir tmp;
    auto r = run_cli({"validate", "--regions", tmp.file("r.json", doc.dump()), "--geometry",
                      tmp.file("g.json", geo.dump())});
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.out.find("scores.nature"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("MissingRegionTag"), std::string::npos) << r.out;
}

TEST(CliValidate, MissingFileIsExitTwo) {
    auto r = run_cli({"validate", "--regions", "/nonexistent.json", "--geometry", kGeometry});
    EXPECT_EQ(r.exit_code, 2);
}

TEST(CliUsage, UnknownFlagsAndSubcommandsAreExitTwo) {
    EXPECT_EQ(run_cli({"validate", "--regions", kRegions, "--geometry", kGeometry, "--bogus"}).exit_code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).exit_code, 2);
    EXPECT_EQ(run_cli({}).exit_code, 2);
    EXPECT_EQ(run_cli({"recommend", "--regions", kRegions, "--geometry", kGeometry}).exit_code, 2);
    EXPECT_EQ(run_cli({"recommend", "--regions", kRegions, "--geometry", kGeometry, "--prefs",
                       fixture("prefs_neutral.json"), "--format", "xml"})
                  .exit_code,
              2);
    auto help = run_cli({"--help"});
    EXPECT_EQ(help.exit_code, 0);
    EXPECT_NE(help.out.find("export-choropleth"), std::string::npos);
}

TEST(CliRecommend, TableTopThree) {
    auto r = run_cli({"recommend", "--regions", kRegions, "--geometry", kGeometry, "--prefs",
                      fixture("prefs_neutral.json"), "--top", "3"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_NE(line.find("SCORE"), std::string::npos);
    std::vector<double> scores;
    while (std::getline(lines, line)) {
        std::istringstream row(line);
        int rank;
        row >> rank;
        // The score column is the first token that parses as a decimal number after the name.
        std::string token;
        std::vector<std::string> tokens;
        while (row >> token) tokens.push_back(token);
        for (const auto& t : tokens) {
            if (t.find('.') != std::string::npos && std::isdigit(static_cast<unsigned char>(t[0]))) {
                scores.push_back(std::stod(t));
                break;
            }
        }
    }
    ASSERT_EQ(scores.size(), 3u) << r.out;
    EXPECT_GE(scores[0], scores[1]);
    EXPECT_GE(scores[1], scores[2]);
    EXPECT_NE(r.out.find("Western Balkans"), std::string::npos);
}

TEST(CliRecommend, TopClampsToAtlasSize) {
    std::mt19937_64 rng(4);
    RegionDataset ds;
    ds.currency = "EUR";
    ds.budgets = testsupport::default_budgets();
    ds.regions = testsupport::random_regions(rng, 4);
    json geo = {{"type", "FeatureCollection"}, {"features", json::array()}};
    for (const auto& r : ds.regions) {
        geo["features"].push_back({{"type", "Feature"},
                                   {"properties", {{"region_id", r.id}}},
                                   {"geometry",
                                    {{"type", "Polygon"},
                                     {"coordinates", {{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}}}}}});
    }
    TempDir tmp;
    auto r = run_cli({"recommend", "--regions", tmp.file("r.json", serialize_region_dataset(ds)), "--geometry",
                      tmp.file("g.json", geo.dump()), "--prefs", fixture("prefs_neutral.json"), "--top", "10",
                      "--format", "json"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["topK"].size(), 4u);
}

TEST(CliRecommend, JsonMatchesEngineAndIsDeterministic) {
    auto args = std::vector<std::string>{"recommend", "--regions", kRegions, "--geometry", kGeometry,
                                         "--prefs", fixture("prefs_neutral.json"), "--format", "json"};
    auto a = run_cli(args);
    auto b = run_cli(args);
    ASSERT_EQ(a.exit_code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto atlas = testsupport::fixture_atlas();
    auto prefs = parse_preferences(read_file(fixture("prefs_neutral.json")));
    EXPECT_EQ(a.out, render_recommendation(atlas, prefs, 10) + "\n");
}

TEST(CliRecommend, InvalidPreferencesIsExitOne) {
    TempDir tmp;
    auto r = run_cli({"recommend", "--regions", kRegions, "--geometry", kGeometry, "--prefs",
                      tmp.file("p.json", R"({"budgetLevel": "medium", "days": 7, "filterOverBudget": false,
                                              "weights": {}})")});
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("weights.shopping"), std::string::npos) << r.err;
    EXPECT_EQ(run_cli({"recommend", "--regions", kRegions, "--geometry", kGeometry, "--prefs", "/nope.json"})
                  .exit_code,
              2);
}

TEST(CliExport, FlipPreferencesRankFranceFirst) {
    TempDir tmp;
    auto out = tmp.path("choropleth.geojson");
    auto args = std::vector<std::string>{"export-choropleth", "--regions", kRegions, "--geometry", kGeometry,
                                         "--prefs", fixture("prefs_flip_winter100.json"), "--out", out};
    auto r = run_cli(args);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto first = read_file(out);
    auto doc = json::parse(first);
    ASSERT_EQ(doc["features"].size(), 30u);
    for (const auto& f : doc["features"]) {
        const auto& p = f["properties"];
        EXPECT_GE(p["score"].get<double>(), 0.0);
        EXPECT_LE(p["score"].get<double>(), 100.0);
        static const std::set<std::string> bands = {"Excellent", "Good", "Fair", "Uncertain", "Poor"};
        EXPECT_TRUE(bands.contains(p["band"].get<std::string>()));
        if (p["region_id"] == "france") EXPECT_EQ(p["rank"], 1);
        if (p["region_id"] == "greece") EXPECT_NE(p.value("rank", 0), 1);
    }

    ASSERT_EQ(run_cli(args).exit_code, 0);
    EXPECT_EQ(read_file(out), first);
    for (const auto& entry : fs::directory_iterator(fs::path(out).parent_path())) {
        EXPECT_EQ(entry.path().filename(), "choropleth.geojson") << "leftover temp file";
    }
}

TEST(CliExport, FailuresLeaveNoPartialFile) {
    TempDir tmp;
    auto out = tmp.path("out.geojson");
    auto bad = tmp.file("bad.json", "{}");
    auto r = run_cli({"export-choropleth", "--regions", bad, "--geometry", kGeometry, "--prefs",
                      fixture("prefs_neutral.json"), "--out", out});
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_FALSE(fs::exists(out));

    auto unwritable = run_cli({"export-choropleth", "--regions", kRegions, "--geometry", kGeometry, "--prefs",
                               fixture("prefs_neutral.json"), "--out", "/nonexistent-dir/out.geojson"});
    EXPECT_EQ(unwritable.exit_code, 2);
}

TEST(CliServe, EphemeralPortAnswersHealthz) {
    testsupport::Child child({DESTFINDER_CLI_PATH, "serve", "--regions", kRegions, "--geometry", kGeometry,
                              "--port", "0", "--host", "127.0.0.1"});
    auto line = child.read_line(std::chrono::seconds(10));
    ASSERT_TRUE(line.has_value());
    auto colon = line->rfind(':');
    ASSERT_NE(colon, std::string::npos) << *line;
    int port = std::stoi(line->substr(colon + 1));
    EXPECT_GT(port, 0);

    httplib::Client cli("127.0.0.1", port);
    auto res = cli.Get("/healthz");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, "ok");

    child.signal(SIGTERM);
    auto result = child.wait();
    EXPECT_EQ(result.exit_code, 0) << result.err;
}

TEST(CliServe, InvalidDatasetExitsOneBeforeBinding) {
    TempDir tmp;
    auto r = run_cli({"serve", "--regions", tmp.file("r.json", "{\"schemaVersion\": 1}"), "--geometry", kGeometry,
                      "--port", "0"});
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(r.out.find("listening"), std::string::npos);
}

TEST(CliServe, OccupiedPortExitsTwo) {
    testsupport::Child first({DESTFINDER_CLI_PATH, "serve", "--regions", kRegions, "--geometry", kGeometry, "--port",
                              "0", "--host", "127.0.0.1"});
    auto line = first.read_line(std::chrono::seconds(10));
    ASSERT_TRUE(line.has_value());
    auto port = line->substr(line->rfind(':') + 1);
    auto r = run_cli({"serve", "--regions", kRegions, "--geometry", kGeometry, "--port", port, "--host",
                      "127.0.0.1"});
    EXPECT_EQ(r.exit_code, 2) << r.err;
}
