#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "destfinder/region_model.hpp"

namespace destfinder {

struct ServiceConfig {
    std::string host = "0.0.0.0";
    int port = 8080;  // 0 picks an ephemeral port
    std::string regions_path;
    std::string geometry_path;
    std::optional<std::string> static_dir;
    std::size_t top_k = 10;
    /// Origins allowed cross-origin access. Empty means same-origin only.
    std::vector<std::string> cors_origins;
};

/// Values given on the command line; unset fields fall back to the
/// environment (DF_PORT, DF_REGIONS, DF_GEOMETRY, DF_STATIC, DF_TOPK), then
/// to defaults.
struct ServiceFlags {
    std::optional<std::string> host;
    std::optional<int> port;
    std::optional<std::string> regions_path;
    std::optional<std::string> geometry_path;
    std::optional<std::string> static_dir;
    std::optional<long long> top_k;
    std::vector<std::string> cors_origins;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Reads the process environment.
std::optional<std::string> process_env(const char* name);

/// Applies flags > environment > defaults. Throws ConfigError on unparsable
/// or out-of-range values and when no dataset or geometry path is given.
ServiceConfig resolve_service_config(const ServiceFlags& flags, const EnvLookup& env = process_env);

struct HttpReply {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// Stateless HTTP front for the scoring engine over one immutable atlas.
///
/// Routes:
///   GET  /api/v1/regions    region metadata (no geometry)
///   GET  /api/v1/geometry   geometry document, verbatim
///   POST /api/v1/recommend  Preferences document -> recommendation response
///   GET  /healthz           "ok"
/// plus static files under "/" when a static directory is configured.
///
/// The handler methods are usable without a socket; bind()/listen() put them
/// behind an HTTP server. Handlers share only const data.
class RecommendService {
public:
    RecommendService(LinkedAtlas atlas, ServiceConfig config);
    ~RecommendService();

    RecommendService(const RecommendService&) = delete;
    RecommendService& operator=(const RecommendService&) = delete;

    HttpReply regions() const;
    HttpReply geometry() const;
    HttpReply recommend(std::string_view body, std::string_view content_type) const;
    HttpReply health() const;

    /// Binds the listening socket and returns the bound port. Throws IoError
    /// if the address is unavailable, ConfigError for a missing static dir.
    int bind();
    /// Serves until stop(). bind() must have succeeded.
    void listen();
    void stop();
    /// Blocks until the server accepts connections (after listen() started elsewhere).
    void wait_until_ready() const;

    const LinkedAtlas& atlas() const noexcept { return *atlas_; }
    const ServiceConfig& config() const noexcept { return config_; }

private:
    struct Server;

    std::shared_ptr<const LinkedAtlas> atlas_;
    ServiceConfig config_;
    std::string regions_body_;
    std::unique_ptr<Server> server_;
};

}  // namespace destfinder
