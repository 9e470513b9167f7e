#include "thriftidx/api.hpp"

#include "thriftidx/error.hpp"
#include "text_util.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <optional>

namespace thriftidx::api {

namespace {

struct BadRequest {
    std::string message;
};

Response error_response(int status, std::string_view kind, const std::string& message) {
    ojson j;
    j["error"] = kind;
    j["message"] = message;
    return {status, j.dump()};
}

Response ok(const ojson& j) { return {200, j.dump()}; }

std::optional<std::string> param(const QueryParams& q, const char* key) {
    const auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    return it->second;
}

double screen_param(const QueryParams& q, double fallback) {
    const auto text = param(q, "screen");
    if (!text) return fallback;
    const auto v = detail::parse_double(*text);
    if (!v || *v < 0.0) throw BadRequest{"screen must be a nonnegative number"};
    return *v;
}

std::optional<bool> bool_param(const QueryParams& q, const char* key) {
    const auto text = param(q, key);
    if (!text) return std::nullopt;
    if (*text == "true" || *text == "1") return true;
    if (*text == "false" || *text == "0") return false;
    throw BadRequest{std::string(key) + " must be true or false"};
}

std::optional<Quantity> quantity_param(const QueryParams& q) {
    const auto text = param(q, "quantity");
    if (!text) return std::nullopt;
    if (*text == "ratio") return Quantity::Ratio;
    if (*text == "theta") return Quantity::Theta;
    throw BadRequest{"quantity must be ratio or theta"};
}

}  // namespace

Router::Router(std::shared_ptr<const AnalysisSnapshot> snapshot) : snapshot_(std::move(snapshot)) {
    if (!snapshot_) throw Error(ErrorCode::SnapshotMissing, "router needs a snapshot");
}

Response Router::handle(std::string_view path, const QueryParams& query) const {
    try {
        if (path.size() > 1 && path.back() == '/') path.remove_suffix(1);
        if (path == "/countries") return countries();
        if (path == "/aggregate") return aggregate(query);
        if (path == "/yearly") return yearly(query);
        if (path == "/ladder") return ladder();
        if (path == "/meta") return meta();
        constexpr std::string_view series_prefix = "/series/";
        if (path.starts_with(series_prefix) && path.size() > series_prefix.size()) {
            const auto code = path.substr(series_prefix.size());
            if (code.find('/') == std::string_view::npos) return series(std::string(code), query);
        }
        return error_response(404, "NotFound", "no endpoint " + std::string(path));
    } catch (const BadRequest& e) {
        return error_response(400, "BadRequest", e.message);
    } catch (const Error& e) {
        return error_response(500, to_string(e.code()), e.what());
    }
}

Response Router::countries() const {
    ojson list = ojson::array();
    for (const auto& [code, points] : snapshot_->derived) {
        if (points.empty()) continue;
        list.push_back({{"code", code},
                        {"first_year", points.front().year},
                        {"last_year", points.back().year},
                        {"n_years", points.size()}});
    }
    ojson j;
    j["schema_version"] = kApiSchema;
    j["countries"] = std::move(list);
    return ok(j);
}

Response Router::series(const std::string& country, const QueryParams& q) const {
    const auto it = snapshot_->derived.find(country);
    if (it == snapshot_->derived.end()) return error_response(404, "NotFound", "unknown country " + country);
    const double screen = screen_param(q, 0.0);
    const ScreenSpec growth{screen, ScreenTarget::Growth};
    const ScreenSpec accel{screen, ScreenTarget::Acceleration};

    ojson points = ojson::array();
    for (const auto& p : it->second) {
        const bool pg = passes_screen(p, growth);
        const bool pa = passes_screen(p, accel);
        auto row = point_json(p);
        if (!pg) row["ratio"] = nullptr;
        if (!pa) row["theta"] = nullptr;
        row["passes_growth_screen"] = pg;
        row["passes_acceleration_screen"] = pa;
        points.push_back(std::move(row));
    }
    ojson j;
    j["schema_version"] = kApiSchema;
    j["country"] = country;
    j["screen"] = screen;
    j["points"] = std::move(points);
    return ok(j);
}

Response Router::aggregate(const QueryParams& q) const {
    auto config = snapshot_->config;
    const double screen = screen_param(q, config.display_screen);
    if (const auto weighted = bool_param(q, "weighted"))
        config.weighting = *weighted ? Weighting::Gdp : Weighting::Unweighted;
    const auto quantity = quantity_param(q);

    AggregateSummary s;
    try {
        s = pooled_summary(snapshot_->derived, config, screen);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyAfterScreen) throw;
        s.screen = screen;
        s.weighting = config.weighting;
        s.empty = true;
        s.reg_levels_note = s.reg_diffs_note = "no observations";
    }
    auto full = summary_json(s);
    ojson j;
    j["schema_version"] = kApiSchema;
    if (!quantity) {
        for (auto& [k, v] : full.items()) j[k] = v;
        return ok(j);
    }
    const bool ratio = *quantity == Quantity::Ratio;
    for (const char* key : {"screen", "weighting", "empty", "countries"}) j[key] = full[key];
    j["quantity"] = to_string(*quantity);
    if (ratio) {
        j["mean_ratio"] = full["mean_ratio"];
        j["n_ratio"] = full["n_ratio"];
        j["n_levels"] = full["n_levels"];
        j["reg_levels"] = full["reg_levels"];
    } else {
        j["mean_theta"] = full["mean_theta"];
        j["n_theta"] = full["n_theta"];
        j["n_diffs"] = full["n_diffs"];
        j["reg_diffs"] = full["reg_diffs"];
    }
    return ok(j);
}

Response Router::yearly(const QueryParams& q) const {
    const auto& config = snapshot_->config;
    const auto quantity = quantity_param(q).value_or(Quantity::Ratio);
    const double screen = screen_param(q, config.display_screen);
    const bool with_loess = bool_param(q, "loess").value_or(true);

    std::optional<YearlySeries> series;
    if (std::abs(screen - config.display_screen) <= 1e-12) {
        series = quantity == Quantity::Ratio ? snapshot_->yearly_ratio : snapshot_->yearly_theta;
    } else {
        try {
            series = yearly_series(snapshot_->derived, config, quantity, screen);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyYearRange) throw;
        }
    }
    ojson j;
    j["schema_version"] = kApiSchema;
    if (series) {
        auto body = yearly_json(*series);
        if (!with_loess) {
            body["smoothing"] = nullptr;
            for (auto& e : body["entries"]) {
                e.erase("smoothed");
                e.erase("smoothing_fallback");
            }
        }
        for (auto& [k, v] : body.items()) j[k] = v;
    } else {
        j["quantity"] = to_string(quantity);
        j["screen"] = screen;
        j["smoothing"] = nullptr;
        j["entries"] = ojson::array();
    }
    return ok(j);
}

Response Router::ladder() const {
    ojson list = ojson::array();
    for (const auto& l : snapshot_->ladder) list.push_back(summary_json(l));
    ojson j;
    j["schema_version"] = kApiSchema;
    j["ladder"] = std::move(list);
    return ok(j);
}

Response Router::meta() const {
    int lo = 0, hi = 0;
    bool any = false;
    for (const auto& [code, points] : snapshot_->derived) {
        if (points.empty()) continue;
        lo = any ? std::min(lo, points.front().year) : points.front().year;
        hi = any ? std::max(hi, points.back().year) : points.back().year;
        any = true;
    }
    ojson j;
    j["schema_version"] = kApiSchema;
    j["snapshot_schema"] = snapshot_->schema_version;
    j["fingerprint"] = snapshot_->fingerprint;
    j["config"] = config_json(snapshot_->config);
    j["countries"] = snapshot_->derived.size();
    j["year_coverage"] = any ? ojson{lo, hi} : ojson(nullptr);
    j["endpoints"] = {"/countries", "/series/{country}", "/aggregate", "/yearly", "/ladder", "/meta"};
    return ok(j);
}

struct Server::Impl {
    Router router;
    ServeOptions options;
    httplib::Server http;
    int bound_port = -1;

    Impl(std::shared_ptr<const AnalysisSnapshot> snapshot, ServeOptions opts)
        : router(std::move(snapshot)), options(std::move(opts)) {}
};

Server::Server(std::shared_ptr<const AnalysisSnapshot> snapshot, ServeOptions options)
    : impl_(std::make_unique<Impl>(std::move(snapshot), std::move(options))) {
    auto& http = impl_->http;
    const auto origin = impl_->options.cors_origin;
    // Without SO_REUSEPORT (the library default) a second server on the same
    // port fails to bind instead of silently sharing it.
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    http.set_default_headers({{"Access-Control-Allow-Origin", origin}});
    if (!impl_->options.static_dir.empty() && !http.set_mount_point("/app", impl_->options.static_dir))
        throw Error(ErrorCode::Io, "cannot mount static directory " + impl_->options.static_dir);
    http.Get(R"(/(countries|aggregate|yearly|ladder|meta|series/[^/]+)/?)",
             [this](const httplib::Request& req, httplib::Response& res) {
                 QueryParams q(req.params.begin(), req.params.end());
                 const auto r = impl_->router.handle(req.path, q);
                 res.status = r.status;
                 res.set_content(r.body, "application/json");
             });
    http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const auto r = error_response(res.status, res.status == 404 ? "NotFound" : "Error",
                                      "no endpoint " + req.path);
        res.set_content(r.body, "application/json");
    });
}

Server::~Server() { stop(); }

int Server::bind() {
    auto& impl = *impl_;
    if (impl.options.port == 0) {
        impl.bound_port = impl.http.bind_to_any_port(impl.options.host);
    } else if (impl.http.bind_to_port(impl.options.host, impl.options.port)) {
        impl.bound_port = impl.options.port;
    }
    if (impl.bound_port <= 0)
        throw Error(ErrorCode::PortInUse,
                    "cannot bind " + impl.options.host + ":" + std::to_string(impl.options.port));
    return impl.bound_port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
    if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace thriftidx::api
