#include "destfinder/cli.hpp"

#include <atomic>
#include <csignal>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"

#include "destfinder/api.hpp"
#include "destfinder/choropleth.hpp"
#include "destfinder/errors.hpp"
#include "destfinder/region_model.hpp"
#include "destfinder/scoring.hpp"
#include "destfinder/service.hpp"

namespace destfinder {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitEnvironment = 2;

void print_violations(std::ostream& os, const ValidationError& e) {
    os << e.violations().size() << " violation(s):\n";
    for (const auto& v : e.violations()) {
        os << "  " << to_string(v.kind) << " at " << v.path << ": " << v.message << "\n";
    }
}

std::string fixed2(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << round_half_up(v, 2);
    return ss.str();
}

void print_table(std::ostream& os, const LinkedAtlas& atlas, const RecommendationResult& result) {
    const auto& currency = atlas.dataset().currency;
    os << std::left << std::setw(5) << "RANK" << "  " << std::setw(36) << "REGION" << "  " << std::right
       << std::setw(6) << "SCORE" << "  " << std::left << std::setw(9) << "BAND" << "  BUDGET\n";
    for (const auto& entry : result.top) {
        const auto& s = result.all[entry.index];
        const auto& r = atlas.regions()[entry.index];
        std::string budget = s.filtered_out ? "filtered" : (s.budget_fulfilled ? "within" : "over");
        budget += " (" + fixed2(s.estimated_cost) + " " + currency + ")";
        os << std::right << std::setw(5) << entry.rank << "  " << std::left << std::setw(36) << r.name << "  "
           << std::right << std::setw(6) << fixed2(s.score) << "  " << std::left << std::setw(9)
           << to_string(s.band) << "  " << budget << "\n";
    }
}

struct AtlasFlags {
    std::string regions;
    std::string geometry;
};

void add_atlas_flags(CLI::App* cmd, AtlasFlags& flags) {
    cmd->add_option("--regions", flags.regions, "Region dataset file (JSON)")->required();
    cmd->add_option("--geometry", flags.geometry, "Region geometry file (GeoJSON FeatureCollection)")->required();
}

int cmd_validate(const AtlasFlags& flags, std::ostream& out) {
    auto atlas = load_atlas(flags.regions, flags.geometry);
    out << "OK: " << atlas.size() << " regions\n";
    return kExitOk;
}

int cmd_recommend(const AtlasFlags& flags, const std::string& prefs_path, std::size_t top,
                  const std::string& format, std::ostream& out) {
    auto atlas = load_atlas(flags.regions, flags.geometry);
    auto prefs = parse_preferences(read_file(prefs_path));
    if (format == "json") {
        out << render_recommendation(atlas, prefs, top) << "\n";
    } else {
        print_table(out, atlas, recommend(atlas, prefs, top));
    }
    return kExitOk;
}

int cmd_export(const AtlasFlags& flags, const std::string& prefs_path, const std::string& out_path,
               std::ostream& out) {
    auto atlas = load_atlas(flags.regions, flags.geometry);
    auto prefs = parse_preferences(read_file(prefs_path));
    auto result = recommend(atlas, prefs, kDefaultTopK);
    write_file_atomic(out_path, render_choropleth(atlas, result));
    out << "wrote " << atlas.size() << " features to " << out_path << "\n";
    return kExitOk;
}

int cmd_serve(const ServiceFlags& flags, std::ostream& out) {
    ServiceConfig cfg = resolve_service_config(flags);
    auto atlas = load_atlas(cfg.regions_path, cfg.geometry_path);
    RecommendService service(std::move(atlas), cfg);

    // Route SIGINT/SIGTERM to a watcher thread; the server threads inherit the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    const int port = service.bind();
    out << "listening on http://" << cfg.host << ":" << port << std::endl;

    std::atomic<bool> stopping{false};
    std::thread watcher([&service, &stopping, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        stopping = true;
        service.stop();
    });
    service.listen();
    if (!stopping) pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Travel destination recommender", "destfinder"};
    app.require_subcommand(1);

    AtlasFlags atlas_flags;
    std::string prefs_path;
    std::string out_path;
    std::size_t top = kDefaultTopK;
    std::string format = "table";
    ServiceFlags serve_flags;
    std::optional<std::string> regions_opt, geometry_opt, static_opt, host_opt;
    std::optional<int> port_opt;
    std::optional<long long> top_k_opt;

    auto* validate = app.add_subcommand("validate", "Validate a region dataset and its geometry");
    add_atlas_flags(validate, atlas_flags);

    auto* rec = app.add_subcommand("recommend", "Rank regions for a preferences file");
    add_atlas_flags(rec, atlas_flags);
    rec->add_option("--prefs", prefs_path, "Preferences document (JSON)")->required();
    rec->add_option("--top", top, "Number of ranked regions")->check(CLI::PositiveNumber);
    rec->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));

    auto* exp = app.add_subcommand("export-choropleth", "Write the geometry annotated with scores and bands");
    add_atlas_flags(exp, atlas_flags);
    exp->add_option("--prefs", prefs_path, "Preferences document (JSON)")->required();
    exp->add_option("--out", out_path, "Output GeoJSON file")->required();

    auto* serve = app.add_subcommand("serve", "Run the HTTP recommendation service");
    serve->add_option("--regions", regions_opt, "Region dataset file (or DF_REGIONS)");
    serve->add_option("--geometry", geometry_opt, "Region geometry file (or DF_GEOMETRY)");
    serve->add_option("--port", port_opt, "Listen port, 0 for ephemeral (or DF_PORT, default 8080)");
    serve->add_option("--host", host_opt, "Listen address (default 0.0.0.0)");
    serve->add_option("--static", static_opt, "Directory of UI assets served under / (or DF_STATIC)");
    serve->add_option("--top-k", top_k_opt, "Ranked regions per response (or DF_TOPK, default 10)");
    serve->add_option("--cors-origin", serve_flags.cors_origins, "Origin allowed cross-origin access (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitEnvironment;
    }

    try {
        if (*validate) return cmd_validate(atlas_flags, out);
        if (*rec) return cmd_recommend(atlas_flags, prefs_path, top, format, out);
        if (*exp) return cmd_export(atlas_flags, prefs_path, out_path, out);
        serve_flags.regions_path = regions_opt;
        serve_flags.geometry_path = geometry_opt;
        serve_flags.static_dir = static_opt;
        serve_flags.host = host_opt;
        serve_flags.port = port_opt;
        serve_flags.top_k = top_k_opt;
        return cmd_serve(serve_flags, out);
    } catch (const ValidationError& e) {
        print_violations(*validate ? out : err, e);
        return kExitInvalid;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitEnvironment;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitEnvironment;
    }
}

}  // namespace destfinder
