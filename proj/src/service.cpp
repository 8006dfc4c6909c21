#include "casper/service.h"

#include <httplib.h>

#include <random>
#include <sstream>
#include <vector>

#include "casper/error.h"

namespace casper {

namespace {

ApiResponse error(int status, const std::string& message) {
    return {status, {{"error", message}}};
}

std::vector<std::string> path_parts(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path.substr(0, path.find('?'))) {
        if (c == '/') {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

std::optional<std::string> string_field(const Json& body, const char* name) {
    if (!body.is_object()) return std::nullopt;
    const auto it = body.find(name);
    if (it == body.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

} // namespace

SessionManager::SessionManager(std::shared_ptr<const TrainedSystem> system, std::chrono::seconds ttl)
    : orchestrator_(std::move(system)), ttl_(ttl), now_([] { return Clock::now(); }) {
    if (ttl_.count() <= 0) throw InvalidArgument("session ttl must be > 0");
}

std::size_t SessionManager::size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

void SessionManager::expire() {
    const auto now = now_();
    std::unique_lock lock(mutex_);
    std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->touched_at > ttl_; });
}

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& id) {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    return it->second;
}

std::string SessionManager::fresh_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream os;
    os << std::hex << rng() << rng();
    return os.str();
}

ApiResponse SessionManager::handle(const std::string& method, const std::string& path, const std::string& body) {
    expire();
    Json doc;
    if (method == "POST") {
        doc = Json::parse(body.empty() ? "{}" : body, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) return error(400, "body must be a JSON object");
    }
    const auto parts = path_parts(path);
    if (parts.empty() || parts[0] != "sessions") return error(404, "not found");
    if (parts.size() == 1 && method == "POST") return create(doc);
    if (parts.size() == 3 && parts[2] == "message" && method == "POST") return message(parts[1], doc);
    if (parts.size() == 3 && parts[2] == "accept" && method == "POST") return accept(parts[1], doc);
    if (parts.size() == 3 && parts[2] == "transcript" && method == "GET") return transcript(parts[1]);
    if (parts.size() <= 3) return error(405, "method not allowed");
    return error(404, "not found");
}

ApiResponse SessionManager::create(const Json& body) {
    Mode mode = Mode::casper;
    if (body.contains("mode")) {
        const auto name = string_field(body, "mode");
        if (!name) return error(400, "mode must be a string");
        try {
            mode = mode_from_string(*name);
        } catch (const InvalidArgument& e) {
            return error(400, e.what());
        }
    }
    auto entry = std::make_shared<Entry>();
    entry->created_at = entry->touched_at = now_();
    std::unique_lock lock(mutex_);
    std::string id;
    do {
        id = fresh_id();
    } while (sessions_.count(id));
    entry->state = orchestrator_.start(id, mode);
    sessions_.emplace(id, std::move(entry));
    return {201, {{"session_id", id}, {"mode", to_string(mode)}}};
}

ApiResponse SessionManager::message(const std::string& id, const Json& body) {
    const auto text = string_field(body, "text");
    if (!text) return error(400, "text must be a string");
    auto entry = find(id);
    if (!entry) return error(404, "unknown session");
    std::lock_guard lock(entry->mutex);
    entry->touched_at = now_();
    try {
        const Turn reply = orchestrator_.step(entry->state, *text);
        Json j = {{"reply", reply.text},
                  {"model", reply.model},
                  {"recommendation", reply.recommendation},
                  {"timestep", reply.timestep},
                  {"status", to_string(entry->state.status)}};
        if (!reply.entity.empty()) j["entity"] = reply.entity;
        return {200, std::move(j)};
    } catch (const SessionClosed& e) {
        return error(409, e.what());
    } catch (const InvalidArgument& e) {
        return error(400, e.what());
    }
}

ApiResponse SessionManager::accept(const std::string& id, const Json& body) {
    const auto entity = string_field(body, "entity");
    if (!entity) return error(400, "entity must be a string");
    auto entry = find(id);
    if (!entry) return error(404, "unknown session");
    std::lock_guard lock(entry->mutex);
    entry->touched_at = now_();
    try {
        orchestrator_.accept(entry->state, *entity);
    } catch (const SessionClosed& e) {
        return error(409, e.what());
    } catch (const NoPendingRecommendation& e) {
        return error(409, e.what());
    }
    return {200, {{"status", to_string(entry->state.status)}, {"entity", entry->state.accepted_entity}}};
}

ApiResponse SessionManager::transcript(const std::string& id) {
    auto entry = find(id);
    if (!entry) return error(404, "unknown session");
    std::lock_guard lock(entry->mutex);
    return {200, to_json(entry->state)};
}

HttpService::HttpService(SessionManager& manager) : server_(std::make_unique<httplib::Server>()) {
    const auto cors = [](httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    };
    const auto dispatch = [&manager, cors](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse r = manager.handle(req.method, req.path, req.body);
        cors(res);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server_->Get(".*", dispatch);
    server_->Post(".*", dispatch);
    server_->Put(".*", dispatch);
    server_->Delete(".*", dispatch);
    server_->Patch(".*", dispatch);
    server_->Options(".*", [cors](const httplib::Request&, httplib::Response& res) {
        cors(res);
        res.status = 204;
    });
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
    return bound;
}

void HttpService::run() {
    if (!server_->listen_after_bind()) throw Error("http server stopped with an error");
}

void HttpService::stop() {
    server_->stop();
}

bool HttpService::running() const {
    return server_->is_running();
}

void serve(SessionManager& manager, const std::string& host, int port) {
    HttpService http(manager);
    http.bind(host, port);
    http.run();
}

} // namespace casper
