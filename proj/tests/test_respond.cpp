#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "casper/error.h"
#include "casper/respond.h"
#include "fixtures.h"
#include "oracles.h"

using namespace casper;

namespace {

ContextReplyPair make_pair(std::string id, std::vector<std::string> context, std::string reply) {
    ContextReplyPair p;
    p.id = std::move(id);
    p.context = std::move(context);
    p.reply = std::move(reply);
    return p;
}

// Brute-force tf-idf cosine argmax, lowest index on ties.
std::size_t brute_best(const std::vector<IndexEntry>& entries, const std::vector<std::string>& history,
                       std::size_t window, double& best_score) {
    std::vector<std::map<std::string, double>> tfs;
    std::map<std::string, double> df;
    for (const auto& e : entries) {
        std::map<std::string, double> tf;
        for (const auto& turn : oracle::tail(e.context, window)) {
            for (const auto& w : tokenize(turn)) tf[w] += 1;
        }
        for (const auto& [w, _] : tf) df[w] += 1;
        tfs.push_back(tf);
    }
    const double n = static_cast<double>(entries.size());
    const auto idf = [&](const std::string& w) { return std::log((1 + n) / (1 + df[w])) + 1; };
    std::map<std::string, double> q;
    for (const auto& turn : oracle::tail(history, window)) {
        for (const auto& w : tokenize(turn)) {
            if (df.count(w)) q[w] += 1;
        }
    }
    double qn = 0;
    for (auto& [w, c] : q) qn += (c * idf(w)) * (c * idf(w));
    qn = std::sqrt(qn);
    best_score = -1;
    std::size_t best = 0;
    for (std::size_t e = 0; e < entries.size(); ++e) {
        double dot = 0, en = 0;
        for (const auto& [w, c] : tfs[e]) {
            const double x = c * idf(w);
            en += x * x;
            if (q.count(w)) dot += x * q[w] * idf(w);
        }
        const double s = (qn > 0 && en > 0) ? dot / (qn * std::sqrt(en)) : 0;
        if (s > best_score + 1e-12) {
            best_score = s;
            best = e;
        }
    }
    return best;
}

} // namespace

TEST_CASE("build: entry count and duplicates retained") {
    std::vector<ContextReplyPair> pairs;
    for (int i = 0; i < 10; ++i) pairs.push_back(make_pair("p" + std::to_string(i), {"ctx " + std::to_string(i)}, "r"));
    CHECK(ResponderIndex::build(pairs, "m").size() == 10);
    pairs.push_back(pairs.front());
    CHECK(ResponderIndex::build(pairs, "m").size() == 11);
}

TEST_CASE("build: empty input is untrained") {
    CHECK_THROWS_AS(ResponderIndex::build(std::vector<ContextReplyPair>{}, "chatter"), Untrained);
    CHECK_THROWS_AS(ResponderIndex::build({make_pair("a", {"x"}, "y")}, "m", 0), InvalidArgument);
    ResponderIndex empty;
    CHECK_THROWS_AS(empty.respond(std::vector<std::string>{"hi"}), Untrained);
}

TEST_CASE("respond: identical context gives score 1") {
    const auto index = ResponderIndex::build({make_pair("a", {"what should i call you?"}, "Call me whatever you want."),
                                              make_pair("b", {"i like to travel."}, "Traveling sounds nice!")},
                                             "chatter");
    const std::vector<std::string> q{"What should I call you?"};
    const auto r = index.respond(q);
    CHECK(r.reply == "Call me whatever you want.");
    CHECK(r.score == doctest::Approx(1.0));
    CHECK(r.entry == 0);
}

TEST_CASE("respond: unknown query falls back to the most frequent reply") {
    const auto index = ResponderIndex::build({make_pair("a", {"x"}, "one"), make_pair("b", {"y"}, "two"),
                                              make_pair("c", {"z"}, "two"), make_pair("d", {"w"}, "one"),
                                              make_pair("e", {"v"}, "two")},
                                             "m");
    const auto r = index.respond(std::vector<std::string>{"completely unseen words"});
    CHECK(r.reply == "two");
    CHECK(r.score == 0.0);
    CHECK(r.entry == 1);
    CHECK(index.respond(std::vector<std::string>{}).reply == "two");
}

TEST_CASE("respond: ties go to the lowest entry") {
    const auto index =
        ResponderIndex::build({make_pair("a", {"hello"}, "first"), make_pair("b", {"hello"}, "second")}, "m");
    CHECK(index.respond(std::vector<std::string>{"hello"}).reply == "first");
}

TEST_CASE("respond: travel statement gets the anime pilgrimage reply from the tv shifter") {
    const std::string travel =
        "Traveling sounds nice! I want to travel too! I want to go on a anime pilgrimage to the locations for "
        "Laid-Back Camp!";
    const auto index = ResponderIndex::build(
        {make_pair("s1", {"i love music festivals."}, "Then you should watch Tokyo Revengers, it has great songs!"),
         make_pair("s2", {"What kind of hobbies do you like?", "I like to travel."}, travel),
         make_pair("s3", {"i play games all day."}, "Space Brothers has a game too!")},
        "shifter:tv");
    const auto r = index.respond(std::vector<std::string>{"What kind of hobbies do you like?", "I like to travel."});
    CHECK(r.reply == travel);
    CHECK(index.respond(std::vector<std::string>{"I like to travel."}).reply == travel);
}

TEST_CASE("respond: only the last window turns count") {
    const auto index = ResponderIndex::build(
        {make_pair("a", {"apple"}, "fruit"), make_pair("b", {"car"}, "vehicle")}, "m", 1);
    CHECK(index.respond(std::vector<std::string>{"apple", "car"}).reply == "vehicle");
    CHECK(index.respond(std::vector<std::string>{"car", "apple"}).reply == "fruit");
}

TEST_CASE("respond: matches a brute-force tf-idf cosine over random corpora") {
    std::mt19937_64 rng(5);
    const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
    const auto sentence = [&] {
        std::string s;
        for (std::size_t w = 0, n = 1 + rng() % 5; w < n; ++w) s += vocab[rng() % vocab.size()] + " ";
        return s;
    };
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<IndexEntry> entries;
        for (int e = 0, n = 3 + static_cast<int>(rng() % 20); e < n; ++e) {
            std::vector<std::string> ctx(1 + rng() % 4);
            for (auto& c : ctx) c = sentence();
            entries.push_back({"e" + std::to_string(e), ctx, "reply " + std::to_string(e), {}});
        }
        const std::size_t window = 1 + rng() % 4;
        const auto index = ResponderIndex::build(entries, "m", window);
        for (int q = 0; q < 10; ++q) {
            std::vector<std::string> hist(1 + rng() % 5);
            for (auto& h : hist) h = sentence();
            double expected_score = 0;
            const std::size_t expected = brute_best(entries, hist, window, expected_score);
            const auto r = index.respond(hist);
            if (expected_score > 0) {
                CHECK(r.score == doctest::Approx(expected_score).epsilon(1e-9));
                CHECK(r.entry == expected);
            } else {
                CHECK(r.score == 0.0);
            }
            // pure function of (index, history)
            CHECK(index.respond(hist).entry == r.entry);
        }
    }
}

TEST_CASE("snapshot round trip preserves behaviour") {
    std::vector<IndexEntry> entries{{"a", {"hello there"}, "hi!", {}},
                                    {"b", {"is it good?"}, "How about Aimer?", "Aimer"}};
    const auto index = ResponderIndex::build(entries, "baseline", 3);
    test::TempDir dir;
    index.save(dir / "i.json");
    const auto back = ResponderIndex::load(dir / "i.json");
    CHECK(back.model_id() == "baseline");
    CHECK(back.window() == 3);
    CHECK(back.size() == 2);
    const auto r = back.respond(std::vector<std::string>{"is it good?"});
    CHECK(r.entity == "Aimer");
    CHECK(back.to_json() == index.to_json());

    Json bad = index.to_json();
    bad["version"] = 99;
    CHECK_THROWS_AS(ResponderIndex::from_json(bad), InvalidArgument);
    CHECK_THROWS_AS(ResponderIndex::from_json(Json{{"format", "other"}}), InvalidArgument);
}
