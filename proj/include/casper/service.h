#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "casper/orchestrator.h"

namespace httplib {
class Server;
}

namespace casper {

struct ApiResponse {
    int status = 200;
    Json body;
};

/// In-memory session table. Sessions idle for longer than the TTL are
/// dropped lazily and then answer 404.
class SessionManager {
public:
    using Clock = std::chrono::steady_clock;

    SessionManager(std::shared_ptr<const TrainedSystem> system, std::chrono::seconds ttl);

    /// Request dispatch independent of any socket layer.
    ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

    std::size_t size() const;
    /// Tests use this to move time forward.
    void set_clock(std::function<Clock::time_point()> now) { now_ = std::move(now); }

private:
    struct Entry {
        std::mutex mutex;
        SessionState state;
        Clock::time_point created_at;
        Clock::time_point touched_at;
    };

    ApiResponse create(const Json& body);
    ApiResponse message(const std::string& id, const Json& body);
    ApiResponse accept(const std::string& id, const Json& body);
    ApiResponse transcript(const std::string& id);

    std::shared_ptr<Entry> find(const std::string& id);
    std::string fresh_id();
    void expire();

    Orchestrator orchestrator_;
    std::chrono::seconds ttl_;
    std::function<Clock::time_point()> now_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

/// HTTP front end over a SessionManager. Every method and path goes to
/// SessionManager::handle; OPTIONS answers CORS preflight.
class HttpService {
public:
    explicit HttpService(SessionManager& manager);
    ~HttpService();

    /// Port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void run();
    void stop();
    bool running() const;

private:
    std::unique_ptr<httplib::Server> server_;
};

/// Blocks serving HTTP on host:port until the process is stopped.
void serve(SessionManager& manager, const std::string& host, int port);

} // namespace casper
