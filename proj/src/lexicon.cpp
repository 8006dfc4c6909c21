#include "casper/lexicon.h"

#include <algorithm>

#include "casper/error.h"

namespace casper {

PhraseMatcher::PhraseMatcher(const std::set<std::string>& phrases) {
    for (const auto& phrase : phrases) {
        Tokens toks = tokenize(phrase);
        if (toks.empty()) continue;
        const std::string first = toks.front();
        by_first_[first].emplace_back(std::move(toks), phrase);
    }
    for (auto& [_, list] : by_first_) {
        std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
            if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
            return a.second < b.second;
        });
    }
}

std::vector<PhraseMatch> PhraseMatcher::find(const Tokens& tokens) const {
    std::vector<PhraseMatch> out;
    std::size_t i = 0;
    while (i < tokens.size()) {
        const auto it = by_first_.find(tokens[i]);
        bool hit = false;
        if (it != by_first_.end()) {
            for (const auto& [toks, phrase] : it->second) {
                if (i + toks.size() > tokens.size()) continue;
                if (std::equal(toks.begin(), toks.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                    out.push_back({phrase, i, toks.size()});
                    i += toks.size();
                    hit = true;
                    break;
                }
            }
        }
        if (!hit) ++i;
    }
    return out;
}

DomainLexicon::DomainLexicon(std::string domain_id, std::set<std::string> words,
                             std::map<std::string, EntityKeywords> entities)
    : domain_id_(std::move(domain_id)), entities_(std::move(entities)) {
    if (domain_id_.empty()) throw InvalidArgument("lexicon: empty domain id");
    for (const auto& w : words) {
        std::string norm = normalize_phrase(w);
        if (norm.empty()) throw InvalidArgument("lexicon " + domain_id_ + ": empty phrase");
        words_.insert(std::move(norm));
    }
    for (auto& [name, ek] : entities_) {
        if (ek.entity.empty()) ek.entity = name;
        std::set<std::string> keywords;
        std::map<std::string, double> scores;
        for (const auto& [phrase, score] : ek.scores) {
            std::string norm = normalize_phrase(phrase);
            if (norm.empty()) throw InvalidArgument("lexicon " + domain_id_ + ": empty keyword");
            if (!(score >= 0.0 && score <= 1.0)) {
                throw InvalidArgument("lexicon " + domain_id_ + ": score out of [0,1] for " + phrase);
            }
            scores[norm] = score;
        }
        for (const auto& kw : ek.keywords) {
            std::string norm = normalize_phrase(kw);
            if (norm.empty()) throw InvalidArgument("lexicon " + domain_id_ + ": empty keyword");
            if (!scores.count(norm)) {
                throw InvalidArgument("lexicon " + domain_id_ + ": keyword without score: " + kw);
            }
            words_.insert(norm);
            keywords.insert(std::move(norm));
        }
        ek.keywords = std::move(keywords);
        ek.scores = std::move(scores);
    }
    matcher_ = std::make_shared<const PhraseMatcher>(words_);
}

std::vector<PhraseMatch> DomainLexicon::find(std::string_view text) const {
    return find(tokenize(text));
}

std::vector<PhraseMatch> DomainLexicon::find(const Tokens& tokens) const {
    if (!matcher_) return {};
    return matcher_->find(tokens);
}

Json DomainLexicon::to_json() const {
    Json entities = Json::object();
    for (const auto& [name, ek] : entities_) {
        Json scores = Json::object();
        for (const auto& [phrase, score] : ek.scores) scores[phrase] = score;
        entities[name] = {{"keywords", ek.keywords}, {"scores", scores}};
    }
    return {{"domain_id", domain_id_}, {"words", words_}, {"entities", entities}};
}

DomainLexicon DomainLexicon::from_json(const Json& doc) {
    try {
        std::map<std::string, EntityKeywords> entities;
        if (doc.contains("entities")) {
            for (const auto& [name, body] : doc.at("entities").items()) {
                EntityKeywords ek;
                ek.entity = name;
                ek.keywords = body.value("keywords", std::set<std::string>{});
                ek.scores = body.value("scores", std::map<std::string, double>{});
                entities.emplace(name, std::move(ek));
            }
        }
        return DomainLexicon(doc.at("domain_id").get<std::string>(),
                             doc.value("words", std::set<std::string>{}), std::move(entities));
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("lexicon: ") + e.what());
    }
}

void DomainLexicon::save(const std::filesystem::path& path) const {
    write_json_file(path, to_json());
}

DomainLexicon DomainLexicon::load(const std::filesystem::path& path) {
    return from_json(read_json_file(path));
}

std::set<std::string> match(const DomainLexicon& lexicon, std::string_view text) {
    std::set<std::string> out;
    for (auto& m : lexicon.find(text)) out.insert(std::move(m.phrase));
    return out;
}

std::size_t matched_token_count(const DomainLexicon& lexicon, std::string_view text) {
    std::size_t n = 0;
    for (const auto& m : lexicon.find(text)) n += m.length;
    return n;
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a",     "about", "after", "again", "all",   "also",  "am",    "an",    "and",   "any",
        "are",   "as",    "at",    "be",    "been",  "but",   "by",    "can",   "could", "did",
        "do",    "does",  "for",   "from",  "had",   "has",   "have",  "he",    "her",   "him",
        "his",   "how",   "i",     "i'm",   "if",    "in",    "into",  "is",    "it",    "it's",
        "its",   "just",  "me",    "more",  "my",    "no",    "not",   "now",   "of",    "on",
        "one",   "or",    "our",   "out",   "really", "she",  "so",    "some",  "than",  "that",
        "the",   "their", "them",  "then",  "there", "these", "they",  "this",  "those", "to",
        "too",   "up",    "very",  "was",   "we",    "were",  "what",  "when",  "which", "who",
        "why",   "will",  "with",  "would", "you",   "your",
    };
    return words;
}

MineResult mine(const std::string& domain_id, const std::vector<EntityDoc>& docs,
                const MineOptions& options, const std::vector<std::string>& expected_entities) {
    if (docs.empty()) throw InvalidArgument("mine: no documents");
    if (!(options.min_distinct > 0.0 && options.min_distinct <= 1.0)) {
        throw InvalidArgument("mine: min_distinct must be in (0, 1]");
    }

    MineResult result;
    std::map<std::string, std::map<std::string, long>> per_entity;
    std::map<std::string, long> total;
    for (const auto& doc : docs) {
        auto& counts = per_entity[doc.entity];
        for (const auto& tok : tokenize(doc.text)) {
            if (options.stopwords.count(tok)) continue;
            ++counts[tok];
            ++total[tok];
        }
    }
    for (const auto& name : expected_entities) {
        if (!per_entity.count(name)) {
            result.warnings.push_back("entity '" + name + "' has no documents; omitted");
        }
    }

    std::set<std::string> words;
    std::map<std::string, EntityKeywords> entities;
    for (const auto& [name, counts] : per_entity) {
        const std::string name_phrase = normalize_phrase(name);
        if (name_phrase.empty()) {
            result.warnings.push_back("entity with empty name; omitted");
            continue;
        }
        EntityKeywords ek;
        ek.entity = name;
        ek.keywords.insert(name_phrase);
        ek.scores[name_phrase] = 1.0;
        words.insert(name_phrase);
        for (const auto& tok : tokenize(name)) {
            if (!options.stopwords.count(tok)) words.insert(tok);
        }
        for (const auto& [tok, n] : counts) {
            if (n < options.min_freq) continue;
            const double share = static_cast<double>(n) / static_cast<double>(total.at(tok));
            if (share < options.min_distinct) continue;
            ek.keywords.insert(tok);
            ek.scores.emplace(tok, share);
        }
        entities.emplace(name, std::move(ek));
    }
    result.lexicon = DomainLexicon(domain_id, std::move(words), std::move(entities));
    return result;
}

std::vector<EntityDoc> load_entity_docs(const std::filesystem::path& path) {
    std::vector<EntityDoc> docs;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const Json rec = Json::parse(line);
            docs.push_back({rec.at("entity").get<std::string>(), rec.at("text").get<std::string>()});
        } catch (const Json::exception& e) {
            throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return docs;
}

std::vector<DomainLexicon> load_lexicon_dir(const std::filesystem::path& dir) {
    std::vector<DomainLexicon> out;
    if (!std::filesystem::is_directory(dir)) throw InvalidArgument("not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") out.push_back(DomainLexicon::load(entry.path()));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.domain_id() < b.domain_id(); });
    return out;
}

} // namespace casper
