#include "casper/synth.h"

#include <random>

#include "casper/error.h"
#include "casper/performer.h"

namespace casper {

namespace {

struct EntitySpec {
    std::string name;
    std::vector<std::string> keywords;
};

struct DomainSpec {
    std::string id;
    std::vector<EntitySpec> entities;
    std::vector<std::string> shared;  // domain words common to all entities
    std::vector<std::string> hobbies; // open-domain statements that lean towards this domain
    std::vector<std::string> shifts;  // topic-shift replies, one per hobby, with an {entity} slot
    std::vector<std::string> templates;
};

const std::vector<DomainSpec>& domain_specs() {
    static const std::vector<DomainSpec> specs = {
        {"game",
         {{"Monster Hunter", {"rathalos", "palico", "greatsword", "wyvern", "felyne"}},
          {"Splatoon", {"inkling", "turf", "splattershot", "squid", "octoling"}},
          {"Animal Crossing", {"villager", "nook", "turnip", "bells", "museum"}}},
         {"level", "boss", "online", "played"},
         {"i like to compete.", "i like to strategize.", "i like to explore.", "i like to build."},
         {"Competing is exciting! Have you tried {entity}? Teams fight it out there!",
          "Strategy is great for the brain. {entity} needs clever plans too!",
          "Exploring is fun! There is so much to find in {entity}!",
          "Building is relaxing. In {entity} you can design everything yourself!"},
         {"How about {entity}?", "You should try {entity}!"}},
        {"music",
         {{"BUMP OF CHICKEN", {"fujiwara", "karma", "tentai", "kansoku", "arena"}},
          {"Yoasobi", {"ikura", "ayase", "yoru", "kakeru", "gunjo"}},
          {"Aimer", {"zankyosanka", "brave", "shine", "husky", "ballad"}}},
         {"song", "album", "listened", "concert"},
         {"i like to sing.", "i like to dance.", "i like to hum.", "i like to drum."},
         {"Singing is the best! I always sing along to {entity}!",
          "Dancing is great! I would love to dance at a show by {entity} someday!",
          "Humming is nice. I catch myself humming {entity} all day!",
          "Drums are cool. The rhythm in {entity} is amazing!"},
         {"How about {entity}?", "You should listen to {entity}!"}},
        {"tv",
         {{"Laid-Back Camp", {"tent", "campfire", "fuji", "lantern", "shimarin"}},
          {"Tokyo Revengers", {"takemichi", "mikey", "timeleap", "delinquents", "toman"}},
          {"Space Brothers", {"mutta", "hibito", "astronaut", "jaxa", "moonbase"}}},
         {"anime", "episode", "season", "watched"},
         {"i like to travel.", "i like to relax.", "i like to draw.", "i like to daydream."},
         {"Traveling sounds nice! I want to travel too! I want to go on a anime pilgrimage to the locations for "
          "{entity}!",
          "Relaxing at home is great. I spent last weekend watching {entity}!",
          "Drawing is a great talent! The art style of {entity} is beautiful!",
          "Daydreaming is nice. {entity} is a story worth dreaming about!"},
         {"How about {entity}?", "You should watch {entity}!"}},
    };
    return specs;
}

const std::vector<std::string> kGreetings = {
    "hello there!",           "hi, how are you?",         "what should i call you?", "good morning!",
    "how was your day?",      "nice to meet you.",        "what is your name?",      "are you a robot?",
    "i had a long day at work.", "the weather is lovely today.",
};

const std::vector<std::string> kGreetingReplies = {
    "hi! nice to hear from you.",     "i am doing well, thanks for asking!",
    "call me whatever you want.",     "good morning to you as well!",
    "my day was calm and quiet.",     "nice to meet you too!",
    "yes, sir! what would you like me to call you?", "i am just a chat bot, but a friendly one.",
    "work can be tiring, take a rest.", "yes, a good day for a walk.",
};

// small talk that sometimes gets bridged straight to a title
const std::vector<std::string> kOpeners = {"i am bored.", "what should i do tonight?", "any plans for the weekend?"};
const std::vector<std::string> kOpenerReplies = {"maybe take a nap?", "you could call a friend.",
                                                 "i will just stay in."};
const std::vector<std::string> kBridges = {"Why not give {entity} a try?", "Have you heard of {entity}?"};

const std::vector<std::string> kHobbyReplies = {
    "that sounds like a good way to relax.", "oh nice, how often do you do that?",
    "that is a wonderful hobby.",             "i wish i could do that too.",
    "what kind of hobbies do you like?",
};

const std::vector<std::string> kFollowUps = {
    "oh, what is it about?",       "is it good?",           "tell me more about that.",
    "i have heard of them before.", "what makes it special?", "where can i find it?",
};

const std::vector<std::string> kContinuations = {"it is really popular these days.", "many people love it.",
                                                 "you can find it almost anywhere."};

const std::vector<std::string> kClosings = {"thanks, i will check it out.", "sounds interesting.",
                                            "okay, thank you!"};
const std::vector<std::string> kClosingReplies = {"you are welcome!", "have a nice day!", "enjoy!"};

const std::vector<std::string> kFillers = {"so good", "again today", "really love it", "cannot wait",
                                           "best thing", "what a ride"};

std::string fill(std::string text, const std::string& slot, const std::string& value) {
    for (auto pos = text.find(slot); pos != std::string::npos; pos = text.find(slot, pos + value.size())) {
        text.replace(pos, slot.size(), value);
    }
    return text;
}

} // namespace

SynthWorld make_world(const SynthOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    SynthWorld world;
    const auto& specs = domain_specs();
    for (const auto& spec : specs) {
        world.domains.push_back(spec.id);
        world.templates[spec.id] = spec.templates;
        auto& docs = world.entity_docs[spec.id];
        for (std::size_t ei = 0; ei < spec.entities.size(); ++ei) {
            const auto& e = spec.entities[ei];
            for (std::size_t j = 0; j < options.docs_per_entity; ++j) {
                const auto& kw1 = e.keywords[j % e.keywords.size()];
                const auto& kw2 = e.keywords[(j + 2) % e.keywords.size()];
                // shared words and fillers rotate evenly so none of them looks entity-specific
                const auto& shared = spec.shared[(j + ei) % spec.shared.size()];
                const auto& filler = kFillers[(j + ei) % kFillers.size()];
                std::string text;
                switch (j % 3) {
                    case 0: text = e.name + " " + shared + ": the " + kw1 + " and the " + kw2 + ", " + filler; break;
                    case 1: text = "thinking about the " + kw1 + " in " + e.name + " " + shared + " " + filler; break;
                    default: text = kw1 + " " + kw2 + " " + e.name + " " + filler; break;
                }
                docs.push_back({e.name, text});
            }
        }
    }

    for (std::size_t n = 0; n < options.dialogs; ++n) {
        RawDialog d;
        d.id = "d" + std::to_string(100000 + n);
        const auto say = [&](Speaker sp, std::string text) { d.turns.push_back({sp, std::move(text)}); };

        const auto shift_tail = [&] {
            say(Speaker::user, kFollowUps[pick(kFollowUps.size())]);
            say(Speaker::system, kContinuations[pick(kContinuations.size())]);
            const std::size_t c = pick(kClosings.size());
            say(Speaker::user, kClosings[c]);
            say(Speaker::system, kClosingReplies[c]);
        };

        // user turns follow the same distribution as the persona's open pool
        const std::size_t exchanges = 1 + pick(options.max_exchanges);
        const std::size_t spec_hobbies = specs.front().hobbies.size();
        const std::size_t hobby_count = specs.size() * spec_hobbies;
        const std::size_t pool = kGreetings.size() + kOpeners.size() + hobby_count;
        for (std::size_t x = 0; x < exchanges; ++x) {
            std::size_t k = pick(pool);
            if (k < kGreetings.size()) {
                say(Speaker::user, kGreetings[k]);
                say(Speaker::system, kGreetingReplies[k]);
                continue;
            }
            k -= kGreetings.size();
            if (k < kOpeners.size()) {
                say(Speaker::user, kOpeners[k]);
                if (coin(rng) < options.bridge_prob) {
                    const auto& spec = specs[pick(specs.size())];
                    const auto& entity = spec.entities[pick(spec.entities.size())];
                    say(Speaker::system, fill(kBridges[pick(kBridges.size())], "{entity}", entity.name));
                    shift_tail();
                    break;
                }
                say(Speaker::system, kOpenerReplies[k]);
                continue;
            }
            k -= kOpeners.size();
            const auto& spec = specs[k / spec_hobbies];
            k %= spec_hobbies;
            say(Speaker::user, spec.hobbies[k]);
            if (coin(rng) < options.shift_prob) {
                // the travel statement always bridges to the same title
                const auto& entity = (spec.id == "tv" && k == 0) ? spec.entities[0]
                                                                 : spec.entities[pick(spec.entities.size())];
                say(Speaker::system, fill(spec.shifts[k], "{entity}", entity.name));
                shift_tail();
                break;
            }
            say(Speaker::system, kHobbyReplies[pick(kHobbyReplies.size())]);
        }
        world.dialogs.push_back(std::move(d));
    }

    world.persona.id = "topic-follower";
    auto& open = world.persona.pools[kOpenDomainId];
    open = kGreetings;
    open.insert(open.end(), kOpeners.begin(), kOpeners.end());
    for (const auto& spec : specs) open.insert(open.end(), spec.hobbies.begin(), spec.hobbies.end());
    for (const auto& spec : specs) world.persona.pools[spec.id] = kFollowUps;
    world.persona.follow_prob = 0.6;
    world.persona.accept_prob = 0.8;
    return world;
}

void write_world(const std::filesystem::path& dir, const SynthWorld& world, const Config& config) {
    std::vector<Json> rows;
    for (const auto& d : world.dialogs) {
        Json turns = Json::array();
        for (const auto& t : d.turns) turns.push_back({{"speaker", to_string(t.speaker)}, {"text", t.text}});
        rows.push_back({{"id", d.id}, {"turns", std::move(turns)}});
    }
    write_jsonl(dir / "dialogs.jsonl", rows);
    for (const auto& [domain, docs] : world.entity_docs) {
        rows.clear();
        for (const auto& doc : docs) rows.push_back({{"entity", doc.entity}, {"text", doc.text}});
        write_jsonl(dir / "entity_docs" / (domain + ".jsonl"), rows);
    }
    for (const auto& [domain, templates] : world.templates) {
        write_json_file(dir / "rules" / (domain + ".json"),
                        {{"domain_id", domain}, {"threshold", config.trigger_threshold}, {"templates", templates}});
    }
    world.persona.save(dir / "persona.json");
    Config cfg = config;
    cfg.domains = world.domains;
    cfg.save(dir / "config.json");
}

std::vector<DomainLexicon> mine_world_lexicons(const SynthWorld& world, const Config& config) {
    MineOptions opts;
    opts.min_freq = config.min_freq;
    opts.min_distinct = config.min_distinct;
    opts.stopwords = config.effective_stopwords();
    std::vector<DomainLexicon> out;
    for (const auto& d : world.domains) out.push_back(mine(d, world.entity_docs.at(d), opts).lexicon);
    return out;
}

TrainedSystem build_system(const SynthWorld& world, const Config& config) {
    Config cfg = config;
    cfg.domains = world.domains;
    const auto lexicons = mine_world_lexicons(world, cfg);
    const auto pairs = pair_all(world.dialogs, cfg.window, lexicons);
    const auto bundle = split(pairs, world.domains);
    std::vector<PerformerRule> performers;
    for (std::size_t i = 0; i < world.domains.size(); ++i) {
        performers.emplace_back(lexicons[i], world.templates.at(world.domains[i]), cfg.trigger_threshold,
                                cfg.effective_pronouns());
    }
    return train_system(bundle, lexicons, performers, cfg);
}

} // namespace casper
