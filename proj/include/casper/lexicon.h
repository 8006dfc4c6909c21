#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "casper/jsonl.h"
#include "casper/text.h"

namespace casper {

struct PhraseMatch {
    std::string phrase;      // normalized phrase as stored in the lexicon
    std::size_t begin = 0;   // token offset
    std::size_t length = 0;  // token count
};

/// Finds lexicon phrases as contiguous token runs. Scans left to right,
/// taking the longest phrase that starts at each position and skipping past
/// it, so overlapping phrases are never double counted.
class PhraseMatcher {
public:
    PhraseMatcher() = default;
    explicit PhraseMatcher(const std::set<std::string>& phrases);

    std::vector<PhraseMatch> find(const Tokens& tokens) const;
    std::vector<PhraseMatch> find(std::string_view text) const { return find(tokenize(text)); }

    bool empty() const { return by_first_.empty(); }

private:
    // first token -> (phrase tokens, phrase), longest first
    std::unordered_map<std::string, std::vector<std::pair<Tokens, std::string>>> by_first_;
};

struct EntityKeywords {
    std::string entity;                    // display name
    std::set<std::string> keywords;        // normalized phrases
    std::map<std::string, double> scores;  // phrase -> distinctiveness in [0, 1]
};

/// The target-domain word set D plus per-entity keyword sets.
///
/// Immutable once built. Phrases are stored normalized (see
/// normalize_phrase) and the constructor enforces: no empty phrase, every
/// entity keyword has a score in [0, 1] and is also a member of D.
class DomainLexicon {
public:
    DomainLexicon() = default;
    DomainLexicon(std::string domain_id, std::set<std::string> words,
                  std::map<std::string, EntityKeywords> entities);

    const std::string& domain_id() const { return domain_id_; }
    const std::set<std::string>& words() const { return words_; }
    const std::map<std::string, EntityKeywords>& entities() const { return entities_; }
    bool usable() const { return !words_.empty(); }

    std::vector<PhraseMatch> find(std::string_view text) const;
    std::vector<PhraseMatch> find(const Tokens& tokens) const;

    Json to_json() const;
    static DomainLexicon from_json(const Json& doc);
    void save(const std::filesystem::path& path) const;
    static DomainLexicon load(const std::filesystem::path& path);

private:
    std::string domain_id_;
    std::set<std::string> words_;
    std::map<std::string, EntityKeywords> entities_;
    std::shared_ptr<const PhraseMatcher> matcher_;
};

/// All phrases of D found in `text`.
std::set<std::string> match(const DomainLexicon& lexicon, std::string_view text);

/// Number of tokens of `text` covered by D phrases.
std::size_t matched_token_count(const DomainLexicon& lexicon, std::string_view text);

const std::set<std::string>& default_stopwords();

struct EntityDoc {
    std::string entity;
    std::string text;
};

struct MineOptions {
    int min_freq = 3;
    double min_distinct = 0.8;
    std::set<std::string> stopwords = default_stopwords();
};

struct MineResult {
    DomainLexicon lexicon;
    std::vector<std::string> warnings;
};

/// Mines per-entity keywords from entity-tagged documents.
///
/// A token w is kept for entity e iff count(w in e's docs) >= min_freq and
/// count(w in e's docs) / count(w in all docs) >= min_distinct; that share is
/// its score. The entity's own name is always a keyword with score 1.0. D is
/// the union of entity names, their non-stopword tokens and the kept
/// keywords. Entities listed in `expected_entities` without documents are
/// omitted with a warning.
MineResult mine(const std::string& domain_id, const std::vector<EntityDoc>& docs,
                const MineOptions& options = {},
                const std::vector<std::string>& expected_entities = {});

/// Reads line-delimited {entity, text} records.
std::vector<EntityDoc> load_entity_docs(const std::filesystem::path& path);

/// Loads every *.json lexicon in a directory, ordered by domain id.
std::vector<DomainLexicon> load_lexicon_dir(const std::filesystem::path& dir);

} // namespace casper
