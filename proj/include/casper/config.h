#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "casper/jsonl.h"
#include "casper/selector.h"

namespace casper {

/// Every tunable threshold of the pipeline. All keys are optional in the
/// config file; missing keys keep the defaults below.
struct Config {
    std::vector<std::string> domains;  // domain index order; empty = sorted lexicon ids
    std::size_t window = kDefaultWindow;

    int min_freq = 3;
    double min_distinct = 0.8;
    std::set<std::string> stopwords;  // empty = built-in list

    std::size_t ngram_order = 2;
    double ngram_k = 0.1;
    bool ngram_unk_slot = true;

    double classifier_smoothing = kDefaultClassifierSmoothing;
    double alpha0 = kDefaultAlpha0;                 // shifters without an override
    std::map<std::string, double> alpha0_domain;    // per-domain override
    double alpha0_unified = kDefaultAlpha0;
    double alpha_decay = kDefaultAlphaDecay;
    double alpha_floor = kDefaultAlphaFloor;

    double trigger_threshold = 1.0;
    std::set<std::string> pronouns;  // empty = built-in list
    std::vector<std::string> default_templates = {"How about {entity}?"};

    std::uint16_t port = 8080;
    double session_ttl_seconds = 3600.0;

    /// Schedule over [open, domains...].
    AlphaSchedule schedule(const std::vector<std::string>& domain_order) const;
    /// Schedule over [open, unified shifter].
    AlphaSchedule unified_schedule() const;

    const std::set<std::string>& effective_pronouns() const;
    const std::set<std::string>& effective_stopwords() const;

    Json to_json() const;
    static Config from_json(const Json& doc);
    static Config load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

/// Port from CASPER_PORT when set and valid, else `fallback`.
std::uint16_t port_from_env(std::uint16_t fallback);

} // namespace casper
