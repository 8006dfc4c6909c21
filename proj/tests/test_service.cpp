#include <doctest.h>

#include <httplib.h>

#include <set>
#include <thread>

#include "casper/service.h"
#include "fixtures.h"

using namespace casper;
using namespace std::chrono_literals;

namespace {

std::string create(SessionManager& m, const std::string& mode = "casper") {
    const auto r = m.handle("POST", "/sessions", Json{{"mode", mode}}.dump());
    REQUIRE(r.status == 201);
    return r.body.at("session_id").get<std::string>();
}

ApiResponse say(SessionManager& m, const std::string& id, const std::string& text) {
    return m.handle("POST", "/sessions/" + id + "/message", Json{{"text", text}}.dump());
}

} // namespace

TEST_CASE("create, greet, get a chatter reply") {
    SessionManager m(test::world_system(), 3600s);
    const auto id = create(m);
    const auto r = say(m, id, "hello there!");
    REQUIRE(r.status == 200);
    CHECK(r.body.at("model") == "chatter");
    CHECK(r.body.at("recommendation") == false);
    CHECK(r.body.at("timestep") == 1);
    CHECK(r.body.at("status") == "active");
    CHECK_FALSE(r.body.at("reply").get<std::string>().empty());
    CHECK_FALSE(r.body.contains("entity"));
}

TEST_CASE("create: default and bad modes") {
    SessionManager m(test::world_system(), 3600s);
    CHECK(m.handle("POST", "/sessions", "").body.at("mode") == "casper");
    CHECK(m.handle("POST", "/sessions", R"({"mode":"baseline"})").body.at("mode") == "baseline");
    CHECK(m.handle("POST", "/sessions", R"({"mode":"nope"})").status == 400);
    CHECK(m.handle("POST", "/sessions", R"({"mode":3})").status == 400);
    CHECK(m.handle("POST", "/sessions", "{oops").status == 400);
    CHECK(m.handle("POST", "/sessions", "[1]").status == 400);
    const auto a = create(m), b = create(m);
    CHECK(a != b);
    CHECK(m.size() == 4);
}

TEST_CASE("recommendation then accept gives task success") {
    SessionManager m(test::world_system(), 3600s);
    const auto id = create(m);
    CHECK(m.handle("POST", "/sessions/" + id + "/accept", R"({"entity":"Laid-Back Camp"})").status == 409);
    const auto r = say(m, id, "have you seen Laid-Back Camp?");
    CHECK(r.body.at("reply") == "How about Laid-Back Camp?");
    CHECK(r.body.at("model") == "performer:tv");
    CHECK(r.body.at("recommendation") == true);
    CHECK(r.body.at("entity") == "Laid-Back Camp");
    const auto a = m.handle("POST", "/sessions/" + id + "/accept", R"({"entity":"Laid-Back Camp"})");
    REQUIRE(a.status == 200);
    CHECK(a.body.at("status") == "task_success");
    CHECK(a.body.at("entity") == "Laid-Back Camp");
    CHECK(say(m, id, "thanks").status == 409);
    CHECK(m.handle("POST", "/sessions/" + id + "/accept", R"({"entity":"Laid-Back Camp"})").status == 409);
}

TEST_CASE("the 41st message is refused") {
    SessionManager m(test::world_system(), 3600s);
    const auto id = create(m, "casper_wo_shifter");
    for (int i = 1; i <= 40; ++i) {
        const auto r = say(m, id, "hello there!");
        REQUIRE(r.status == 200);
        CHECK(r.body.at("status") == (i == 40 ? "timeout" : "active"));
    }
    CHECK(say(m, id, "hello there!").status == 409);
}

TEST_CASE("bad requests") {
    SessionManager m(test::world_system(), 3600s);
    const auto id = create(m);
    CHECK(say(m, "nope", "hi").status == 404);
    CHECK(m.handle("GET", "/sessions/nope/transcript", "").status == 404);
    CHECK(m.handle("POST", "/sessions/nope/accept", R"({"entity":"x"})").status == 404);
    CHECK(m.handle("POST", "/sessions/" + id + "/message", R"({"txt":"hi"})").status == 400);
    CHECK(m.handle("POST", "/sessions/" + id + "/message", R"({"text":"   "})").status == 400);
    CHECK(m.handle("POST", "/sessions/" + id + "/message", R"({"text":5})").status == 400);
    CHECK(m.handle("POST", "/sessions/" + id + "/accept", "{}").status == 400);
    CHECK(m.handle("GET", "/sessions", "").status == 405);
    CHECK(m.handle("DELETE", "/sessions/" + id + "/message", "").status == 405);
    CHECK(m.handle("GET", "/other", "").status == 404);
    CHECK(m.handle("GET", "/sessions/" + id + "/transcript/extra", "").status == 404);
    // failed calls leave the session untouched
    CHECK(m.handle("GET", "/sessions/" + id + "/transcript", "").body.at("turns").empty());
}

TEST_CASE("idle sessions expire") {
    SessionManager m(test::world_system(), 60s);
    auto now = SessionManager::Clock::now();
    m.set_clock([&] { return now; });
    const auto id = create(m);
    const auto idle = create(m);
    now += 50s;
    CHECK(say(m, id, "hello there!").status == 200);
    now += 30s;
    CHECK(say(m, id, "hello there!").status == 200);
    CHECK(say(m, idle, "hello there!").status == 404);
    CHECK(m.size() == 1);
    now += 61s;
    CHECK(m.handle("GET", "/sessions/" + id + "/transcript", "").status == 404);
    CHECK(m.size() == 0);
    CHECK_THROWS(SessionManager(test::world_system(), 0s));
}

TEST_CASE("transcript replays exactly the produced turns") {
    SessionManager m(test::world_system(), 3600s);
    const auto id = create(m);
    std::vector<Json> replies;
    for (const char* u : {"hello there!", "i like to travel.", "i am bored.", "is it good?"}) {
        replies.push_back(say(m, id, u).body);
    }
    const auto t = m.handle("GET", "/sessions/" + id + "/transcript", "");
    REQUIRE(t.status == 200);
    const auto& turns = t.body.at("turns");
    REQUIRE(turns.size() == 8);
    for (std::size_t i = 0; i < replies.size(); ++i) {
        CHECK(turns[2 * i].at("speaker") == "user");
        CHECK(turns[2 * i + 1].at("text") == replies[i].at("reply"));
        CHECK(turns[2 * i + 1].at("model") == replies[i].at("model"));
        CHECK(turns[2 * i + 1].at("timestep") == replies[i].at("timestep"));
    }
}

TEST_CASE("concurrent messages to one session are serialized") {
    SessionManager m(test::world_system(), 3600s);
    const auto id = create(m, "casper_wo_shifter");
    std::mutex mu;
    std::vector<int> steps;
    {
        std::vector<std::jthread> workers;
        for (int w = 0; w < 8; ++w) {
            workers.emplace_back([&] {
                for (int i = 0; i < 4; ++i) {
                    const auto r = say(m, id, "hello there!");
                    std::lock_guard lock(mu);
                    steps.push_back(r.body.at("timestep").get<int>());
                }
            });
        }
    }
    std::sort(steps.begin(), steps.end());
    for (int i = 0; i < 32; ++i) CHECK(steps[i] == i + 1);
    const auto turns = m.handle("GET", "/sessions/" + id + "/transcript", "").body.at("turns");
    REQUIRE(turns.size() == 64);
    for (std::size_t i = 0; i < turns.size(); ++i) CHECK(turns[i].at("timestep") == i / 2 + 1);
}

TEST_CASE("http round trip on a local port") {
    SessionManager m(test::world_system(), 3600s);
    HttpService http(m);
    const int port = http.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread server([&] { http.run(); });
    while (!http.running()) std::this_thread::sleep_for(1ms);

    httplib::Client client("127.0.0.1", port);
    auto created = client.Post("/sessions", R"({"mode":"casper"})", "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
    const auto id = Json::parse(created->body).at("session_id").get<std::string>();

    auto msg = client.Post("/sessions/" + id + "/message", R"({"text":"tell me about Aimer"})", "application/json");
    REQUIRE(msg);
    CHECK(msg->status == 200);
    const auto body = Json::parse(msg->body);
    CHECK(body.at("model") == "performer:music");
    CHECK(body.at("entity") == "Aimer");

    auto acc = client.Post("/sessions/" + id + "/accept", R"({"entity":"Aimer"})", "application/json");
    REQUIRE(acc);
    CHECK(Json::parse(acc->body).at("status") == "task_success");

    auto tr = client.Get("/sessions/" + id + "/transcript");
    REQUIRE(tr);
    CHECK(Json::parse(tr->body).at("turns").size() == 2);

    auto missing = client.Get("/sessions/zzz/transcript");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto preflight = client.Options("/sessions");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);

    http.stop();
    server.join();
}
