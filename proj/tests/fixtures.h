#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "casper/corpus.h"
#include "casper/lexicon.h"
#include "casper/synth.h"
#include "casper/system.h"

namespace casper::test {

/// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("casper-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

/// Lexicon with one entity per name; every name is its own keyword.
inline DomainLexicon simple_lexicon(const std::string& domain, const std::vector<std::string>& names,
                                    const std::vector<std::string>& extra_words = {}) {
    std::set<std::string> words(extra_words.begin(), extra_words.end());
    std::map<std::string, EntityKeywords> entities;
    for (const auto& n : names) {
        const std::string norm = normalize_phrase(n);
        words.insert(norm);
        entities[n] = {n, {norm}, {{norm, 1.0}}};
    }
    return DomainLexicon(domain, words, entities);
}

inline DomainLexicon tv_lexicon() {
    return simple_lexicon("tv", {"Laid-Back Camp", "Tokyo Revengers"}, {"anime"});
}

inline RawDialog dialog(const std::string& id, const std::vector<std::string>& texts) {
    RawDialog d;
    d.id = id;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        d.turns.push_back({i % 2 == 0 ? Speaker::user : Speaker::system, texts[i]});
    }
    return d;
}

/// Trained system over the default synthetic world, built once per binary.
inline std::shared_ptr<const TrainedSystem> world_system() {
    static const auto sys = std::make_shared<const TrainedSystem>(build_system(make_world()));
    return sys;
}

} // namespace casper::test
