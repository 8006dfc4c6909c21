#include "casper/config.h"

#include <cstdlib>

#include "casper/error.h"
#include "casper/lexicon.h"
#include "casper/performer.h"

namespace casper {

AlphaSchedule Config::schedule(const std::vector<std::string>& domain_order) const {
    AlphaSchedule s = AlphaSchedule::uniform(domain_order.size() + 1, alpha0, alpha_decay, alpha_floor);
    for (std::size_t i = 0; i < domain_order.size(); ++i) {
        if (const auto it = alpha0_domain.find(domain_order[i]); it != alpha0_domain.end()) {
            s.base[i + 1] = it->second;
        }
    }
    s.validate();
    return s;
}

AlphaSchedule Config::unified_schedule() const {
    AlphaSchedule s = AlphaSchedule::uniform(2, alpha0_unified, alpha_decay, alpha_floor);
    s.validate();
    return s;
}

const std::set<std::string>& Config::effective_pronouns() const {
    return pronouns.empty() ? default_pronouns() : pronouns;
}

const std::set<std::string>& Config::effective_stopwords() const {
    return stopwords.empty() ? default_stopwords() : stopwords;
}

Json Config::to_json() const {
    return {{"domains", domains},
            {"window", window},
            {"min_freq", min_freq},
            {"min_distinct", min_distinct},
            {"stopwords", stopwords},
            {"ngram_order", ngram_order},
            {"ngram_k", ngram_k},
            {"ngram_unk_slot", ngram_unk_slot},
            {"classifier_smoothing", classifier_smoothing},
            {"alpha0", alpha0},
            {"alpha0_domain", alpha0_domain},
            {"alpha0_unified", alpha0_unified},
            {"alpha_decay", alpha_decay},
            {"alpha_floor", alpha_floor},
            {"trigger_threshold", trigger_threshold},
            {"pronouns", pronouns},
            {"default_templates", default_templates},
            {"port", port},
            {"session_ttl_seconds", session_ttl_seconds}};
}

Config Config::from_json(const Json& doc) {
    Config c;
    try {
        c.domains = doc.value("domains", c.domains);
        c.window = doc.value("window", c.window);
        c.min_freq = doc.value("min_freq", c.min_freq);
        c.min_distinct = doc.value("min_distinct", c.min_distinct);
        c.stopwords = doc.value("stopwords", c.stopwords);
        c.ngram_order = doc.value("ngram_order", c.ngram_order);
        c.ngram_k = doc.value("ngram_k", c.ngram_k);
        c.ngram_unk_slot = doc.value("ngram_unk_slot", c.ngram_unk_slot);
        c.classifier_smoothing = doc.value("classifier_smoothing", c.classifier_smoothing);
        c.alpha0 = doc.value("alpha0", c.alpha0);
        c.alpha0_domain = doc.value("alpha0_domain", c.alpha0_domain);
        c.alpha0_unified = doc.value("alpha0_unified", c.alpha0_unified);
        c.alpha_decay = doc.value("alpha_decay", c.alpha_decay);
        c.alpha_floor = doc.value("alpha_floor", c.alpha_floor);
        c.trigger_threshold = doc.value("trigger_threshold", c.trigger_threshold);
        c.pronouns = doc.value("pronouns", c.pronouns);
        c.default_templates = doc.value("default_templates", c.default_templates);
        c.port = doc.value("port", c.port);
        c.session_ttl_seconds = doc.value("session_ttl_seconds", c.session_ttl_seconds);
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    if (c.window < 1) throw InvalidArgument("config: window must be >= 1");
    if (c.ngram_order < 1) throw InvalidArgument("config: ngram_order must be >= 1");
    if (!(c.ngram_k > 0.0) || !(c.classifier_smoothing > 0.0)) {
        throw InvalidArgument("config: smoothing constants must be > 0");
    }
    if (!(c.min_distinct > 0.0 && c.min_distinct <= 1.0)) throw InvalidArgument("config: min_distinct out of (0, 1]");
    if (!(c.trigger_threshold > 0.0)) throw InvalidArgument("config: trigger_threshold must be > 0");
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    return from_json(read_json_file(path));
}

void Config::save(const std::filesystem::path& path) const {
    write_json_file(path, to_json());
}

std::uint16_t port_from_env(std::uint16_t fallback) {
    const char* raw = std::getenv("CASPER_PORT");
    if (!raw || !*raw) return fallback;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (*end != '\0' || v <= 0 || v > 65535) return fallback;
    return static_cast<std::uint16_t>(v);
}

} // namespace casper
