#include <doctest.h>

#include <random>

#include "casper/error.h"
#include "casper/performer.h"
#include "fixtures.h"
#include "oracles.h"

using namespace casper;

namespace {

PerformerRule tv_rule() {
    return PerformerRule(test::tv_lexicon(), {"How about {entity}?", "You should watch {entity}!"});
}

} // namespace

TEST_CASE("probe: direct match on Laid-Back Camp") {
    const auto rule = tv_rule();
    const std::vector<std::string> h{"hello", "I watched Laid-Back Camp yesterday"};
    const auto d = probe(rule, h);
    CHECK(d.can_respond);
    CHECK(d.entity == "Laid-Back Camp");
    CHECK(d.resolved_via == Resolution::direct);
    CHECK(d.matched == std::set<std::string>{"laid-back camp"});
    CHECK(perform(rule, d).text == "How about Laid-Back Camp?");
}

TEST_CASE("probe: pronoun resolves to the most recent entity") {
    const auto rule = tv_rule();
    const std::vector<std::string> h{"Tokyo Revengers is on tonight", "Have you seen Laid-Back Camp?",
                                     "is it good?"};
    const auto d = probe(rule, h);
    CHECK(d.can_respond);
    CHECK(d.entity == "Laid-Back Camp");
    CHECK(d.resolved_via == Resolution::coreference);
    CHECK(to_string(d.resolved_via) == "coreference");
}

TEST_CASE("probe: small talk without entities cannot respond") {
    const auto rule = tv_rule();
    for (const std::vector<std::string>& h : {std::vector<std::string>{"hi", "how are you?"},
                                              std::vector<std::string>{"is it good?"},
                                              std::vector<std::string>{}}) {
        const auto d = probe(rule, h);
        CHECK_FALSE(d.can_respond);
        CHECK_FALSE(d.entity.has_value());
        CHECK(d.resolved_via == Resolution::none);
        CHECK_THROWS_AS(perform(rule, d), InvalidArgument);
    }
}

TEST_CASE("probe: threshold gates weak keywords") {
    std::map<std::string, EntityKeywords> ents{{"GameX", {"GameX", {"gamex", "quest", "sword"}, {{"gamex", 1.0}, {"quest", 0.6}, {"sword", 0.5}}}}};
    const DomainLexicon lex("game", {"gamex", "quest", "sword"}, ents);
    const PerformerRule rule(lex, {"How about {entity}?"});
    CHECK_FALSE(probe(rule, std::vector<std::string>{"a long quest"}).can_respond);
    const auto both = probe(rule, std::vector<std::string>{"a quest with a sword"});
    CHECK(both.can_respond);
    CHECK(both.score == doctest::Approx(1.1));
    const PerformerRule loose(lex, {"How about {entity}?"}, 0.5);
    CHECK(probe(loose, std::vector<std::string>{"a long quest"}).entity == "GameX");
}

TEST_CASE("perform: rotation and determinism") {
    const auto rule = tv_rule();
    const auto d = probe(rule, std::vector<std::string>{"tokyo revengers"});
    CHECK(perform(rule, d, 0).text == "How about Tokyo Revengers?");
    CHECK(perform(rule, d, 1).text == "You should watch Tokyo Revengers!");
    CHECK(perform(rule, d, 2).text == perform(rule, d, 0).text);
    const auto r = perform(rule, d, 7);
    CHECK(r.recommendation);
    CHECK(r.entity == "Tokyo Revengers");
    CHECK(r.text == perform(rule, d, 7).text);
}

TEST_CASE("rule validation and file round trip") {
    const auto lex = test::tv_lexicon();
    CHECK_THROWS_AS(PerformerRule(lex, {}), InvalidArgument);
    CHECK_THROWS_AS(PerformerRule(lex, {"no slot"}), InvalidArgument);
    CHECK_THROWS_AS(PerformerRule(lex, {"{entity}"}, 0.0), InvalidArgument);

    const auto rule = tv_rule();
    test::TempDir dir;
    rule.save(dir / "tv.json");
    const auto back = PerformerRule::load(dir / "tv.json", lex);
    CHECK(back.to_json() == rule.to_json());
    CHECK(back.templates() == rule.templates());
    CHECK_THROWS_AS(PerformerRule::load(dir / "tv.json", test::simple_lexicon("music", {"Aimer"})),
                    InvalidArgument);
}

TEST_CASE("probe never fires without lexicon matches, output names one entity") {
    const auto lex = test::simple_lexicon("tv", {"Laid-Back Camp", "Space Brothers", "Tokyo Revengers"});
    const PerformerRule rule(lex, {"How about {entity}?"});
    const std::vector<std::string> words{"it", "that", "laid-back", "camp", "space", "brothers", "tokyo",
                                         "revengers", "good", "is", "the", "they"};
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<std::string> h(1 + rng() % 4);
        for (auto& t : h) {
            for (std::size_t w = 0, n = rng() % 6; w < n; ++w) t += words[rng() % words.size()] + " ";
        }
        const bool any = std::any_of(h.begin(), h.end(), [&](const auto& t) { return oracle::hits(lex.words(), t); });
        const auto d = probe(rule, h);
        if (!any) CHECK_FALSE(d.can_respond);
        if (d.can_respond) {
            const auto r = perform(rule, d);
            int named = 0;
            for (const auto& e : rule.entities()) named += oracle::contains_phrase(r.text, e) ? 1 : 0;
            CHECK(named == 1);
            CHECK(r.recommendation);
        }
    }
}
