#pragma once

#include "thriftidx/snapshot.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace thriftidx::api {

struct Response {
    int status = 200;
    std::string body;  // JSON
};

using QueryParams = std::multimap<std::string, std::string>;

/// Read-only request handling over one immutable snapshot. Every endpoint is
/// a pure function of (snapshot, path, query), so identical requests produce
/// identical bytes.
///
///   GET /countries
///   GET /series/{country}?screen=S
///   GET /aggregate?screen=S&weighted=B&quantity=ratio|theta
///   GET /yearly?quantity=ratio|theta&screen=S&loess=B
///   GET /ladder
///   GET /meta
class Router {
public:
    explicit Router(std::shared_ptr<const AnalysisSnapshot> snapshot);

    [[nodiscard]] Response handle(std::string_view path, const QueryParams& query) const;

    [[nodiscard]] const AnalysisSnapshot& snapshot() const noexcept { return *snapshot_; }

private:
    Response countries() const;
    Response series(const std::string& country, const QueryParams& q) const;
    Response aggregate(const QueryParams& q) const;
    Response yearly(const QueryParams& q) const;
    Response ladder() const;
    Response meta() const;

    std::shared_ptr<const AnalysisSnapshot> snapshot_;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::string cors_origin = "*";
    std::string static_dir;  // optional explorer bundle mounted at /app
};

/// HTTP front end for a Router. Handlers run on the server's worker pool and
/// only read the shared snapshot.
class Server {
public:
    Server(std::shared_ptr<const AnalysisSnapshot> snapshot, ServeOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds the socket; throws Error(PortInUse) on failure. Returns the port.
    int bind();
    /// Serves until stop() is called. bind() must have succeeded.
    void listen();
    void stop();
    [[nodiscard]] bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace thriftidx::api
