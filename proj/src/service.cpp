#include "destfinder/service.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "httplib.h"

#include "destfinder/api.hpp"
#include "destfinder/errors.hpp"
#include "destfinder/scoring.hpp"

namespace destfinder {

std::optional<std::string> process_env(const char* name) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') return std::string(v);
    return std::nullopt;
}

namespace {

long long parse_integer(const std::string& text, const char* what) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError(std::string(what) + " must be an integer, got \"" + text + "\"");
    }
    return value;
}

std::string media_type(std::string_view content_type) {
    auto semi = content_type.find(';');
    std::string_view base = content_type.substr(0, semi);
    while (!base.empty() && std::isspace(static_cast<unsigned char>(base.front()))) base.remove_prefix(1);
    while (!base.empty() && std::isspace(static_cast<unsigned char>(base.back()))) base.remove_suffix(1);
    std::string out(base);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

ServiceConfig resolve_service_config(const ServiceFlags& flags, const EnvLookup& env) {
    ServiceConfig cfg;
    if (flags.host) cfg.host = *flags.host;

    long long port = cfg.port;
    if (flags.port) port = *flags.port;
    else if (auto v = env("DF_PORT")) port = parse_integer(*v, "DF_PORT");
    if (port < 0 || port > 65535) throw ConfigError("port must be in 0-65535, got " + std::to_string(port));
    cfg.port = static_cast<int>(port);

    if (flags.regions_path) cfg.regions_path = *flags.regions_path;
    else if (auto v = env("DF_REGIONS")) cfg.regions_path = *v;
    if (cfg.regions_path.empty()) throw ConfigError("no region dataset given (--regions or DF_REGIONS)");

    if (flags.geometry_path) cfg.geometry_path = *flags.geometry_path;
    else if (auto v = env("DF_GEOMETRY")) cfg.geometry_path = *v;
    if (cfg.geometry_path.empty()) throw ConfigError("no geometry given (--geometry or DF_GEOMETRY)");

    if (flags.static_dir) cfg.static_dir = *flags.static_dir;
    else if (auto v = env("DF_STATIC")) cfg.static_dir = *v;

    long long top_k = static_cast<long long>(cfg.top_k);
    if (flags.top_k) top_k = *flags.top_k;
    else if (auto v = env("DF_TOPK")) top_k = parse_integer(*v, "DF_TOPK");
    if (top_k < 1) throw ConfigError("top-k must be >= 1, got " + std::to_string(top_k));
    cfg.top_k = static_cast<std::size_t>(top_k);

    cfg.cors_origins = flags.cors_origins;
    return cfg;
}

struct RecommendService::Server {
    httplib::Server http;
    bool bound = false;
};

RecommendService::RecommendService(LinkedAtlas atlas, ServiceConfig config)
    : atlas_(std::make_shared<const LinkedAtlas>(std::move(atlas))),
      config_(std::move(config)),
      regions_body_(region_metadata(*atlas_).dump(2)),
      server_(std::make_unique<Server>()) {
    auto& http = server_->http;
    http.set_payload_max_length(1 << 20);
    http.set_tcp_nodelay(true);
    // httplib's default also sets SO_REUSEPORT, which lets a second server share the port.
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });

    http.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
        auto r = health();
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    });
    http.Get("/api/v1/regions", [this](const httplib::Request&, httplib::Response& res) {
        auto r = regions();
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    });
    http.Get("/api/v1/geometry", [this](const httplib::Request&, httplib::Response& res) {
        auto r = geometry();
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    });
    http.Post("/api/v1/recommend", [this](const httplib::Request& req, httplib::Response& res) {
        auto r = recommend(req.body, req.get_header_value("Content-Type"));
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    });

    if (!config_.cors_origins.empty()) {
        auto allowed = config_.cors_origins;
        http.set_post_routing_handler([allowed](const httplib::Request& req, httplib::Response& res) {
            const auto origin = req.get_header_value("Origin");
            if (origin.empty() || std::find(allowed.begin(), allowed.end(), origin) == allowed.end()) return;
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        });
        http.Options(R"(/api/v1/.*)", [allowed](const httplib::Request& req, httplib::Response& res) {
            const auto origin = req.get_header_value("Origin");
            if (std::find(allowed.begin(), allowed.end(), origin) == allowed.end()) {
                res.status = 403;
                return;
            }
            res.status = 204;
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.set_header("Access-Control-Max-Age", "600");
        });
    }

    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        Document doc;
        doc["error"] = "InternalError";
        doc["message"] = what;
        res.status = 500;
        res.set_content(doc.dump(2), "application/json");
    });
}

RecommendService::~RecommendService() { stop(); }

HttpReply RecommendService::regions() const { return {200, "application/json", regions_body_}; }

HttpReply RecommendService::geometry() const {
    return {200, "application/json", atlas_->geometry().source};
}

HttpReply RecommendService::health() const { return {200, "text/plain", "ok"}; }

HttpReply RecommendService::recommend(std::string_view body, std::string_view content_type) const {
    if (media_type(content_type) != "application/json") {
        Document doc;
        doc["error"] = "UnsupportedMediaType";
        doc["message"] = "expected Content-Type: application/json, got \"" + std::string(content_type) + "\"";
        return {415, "application/json", doc.dump(2)};
    }
    Preferences prefs;
    try {
        prefs = parse_preferences(body);
    } catch (const ValidationError& e) {
        return {400, "application/json", violations_document("InvalidPreferences", e.violations()).dump(2)};
    }
    return {200, "application/json", render_recommendation(*atlas_, prefs, config_.top_k)};
}

int RecommendService::bind() {
    auto& http = server_->http;
    if (config_.static_dir && !http.set_mount_point("/", *config_.static_dir)) {
        throw ConfigError("static directory \"" + *config_.static_dir + "\" does not exist");
    }
    int port = config_.port;
    if (port == 0) {
        port = http.bind_to_any_port(config_.host);
        if (port < 0) throw IoError("cannot bind " + config_.host + " on an ephemeral port");
    } else if (!http.bind_to_port(config_.host, port)) {
        throw IoError("cannot bind " + config_.host + ":" + std::to_string(port));
    }
    server_->bound = true;
    config_.port = port;
    return port;
}

void RecommendService::listen() {
    if (!server_->bound) throw IoError("listen() called before bind()");
    server_->http.listen_after_bind();
}

void RecommendService::stop() {
    if (server_ && server_->http.is_running()) server_->http.stop();
}

void RecommendService::wait_until_ready() const { server_->http.wait_until_ready(); }

}  // namespace destfinder
