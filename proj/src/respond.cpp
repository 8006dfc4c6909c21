#include "casper/respond.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "casper/error.h"

namespace casper {

namespace {

constexpr int kSnapshotVersion = 1;

std::span<const std::string> last_turns(std::span<const std::string> turns, std::size_t window) {
    if (turns.size() <= window) return turns;
    return turns.subspan(turns.size() - window);
}

} // namespace

ResponderIndex ResponderIndex::build(const std::vector<ContextReplyPair>& pairs, std::string model_id,
                                     std::size_t window) {
    std::vector<IndexEntry> entries;
    entries.reserve(pairs.size());
    for (const auto& p : pairs) entries.push_back({p.id, p.context, p.reply, {}});
    return build(std::move(entries), std::move(model_id), window);
}

ResponderIndex ResponderIndex::build(std::vector<IndexEntry> entries, std::string model_id,
                                     std::size_t window) {
    if (entries.empty()) throw Untrained("untrained responder: " + model_id);
    if (window < 1) throw InvalidArgument("responder window must be >= 1");

    ResponderIndex index;
    index.model_id_ = std::move(model_id);
    index.window_ = window;
    index.entries_ = std::move(entries);

    // term frequencies per entry, term ids in first-seen order
    std::vector<std::map<std::size_t, double>> tfs(index.entries_.size());
    std::vector<double> df;
    for (std::size_t e = 0; e < index.entries_.size(); ++e) {
        for (const auto& turn : last_turns(index.entries_[e].context, window)) {
            for (auto& tok : tokenize(turn)) {
                auto [it, inserted] = index.term_ids_.try_emplace(std::move(tok), index.term_ids_.size());
                if (inserted) df.push_back(0.0);
                tfs[e][it->second] += 1.0;
            }
        }
        for (const auto& [term, _] : tfs[e]) df[term] += 1.0;
    }

    const double n = static_cast<double>(index.entries_.size());
    index.idf_.resize(df.size());
    for (std::size_t t = 0; t < df.size(); ++t) index.idf_[t] = std::log((1.0 + n) / (1.0 + df[t])) + 1.0;

    index.postings_.assign(df.size(), {});
    index.vectors_.resize(index.entries_.size());
    for (std::size_t e = 0; e < index.entries_.size(); ++e) {
        SparseVector v;
        double norm = 0.0;
        for (const auto& [term, tf] : tfs[e]) {
            const double w = tf * index.idf_[term];
            v.emplace_back(term, w);
            norm += w * w;
        }
        norm = std::sqrt(norm);
        for (auto& [term, w] : v) {
            w /= norm;
            index.postings_[term].emplace_back(e, w);
        }
        index.vectors_[e] = std::move(v);
    }

    std::map<std::string, std::size_t> reply_counts;
    std::size_t best = 0;
    for (std::size_t e = 0; e < index.entries_.size(); ++e) {
        const std::size_t c = ++reply_counts[index.entries_[e].reply];
        if (c > reply_counts[index.entries_[best].reply]) best = e;
    }
    // `best` may point at a later duplicate; report the first occurrence
    for (std::size_t e = 0; e < index.entries_.size(); ++e) {
        if (index.entries_[e].reply == index.entries_[best].reply) {
            index.fallback_ = e;
            break;
        }
    }
    return index;
}

SparseVector ResponderIndex::vectorize(std::span<const std::string> turns) const {
    std::map<std::size_t, double> tf;
    for (const auto& turn : last_turns(turns, window_)) {
        for (const auto& tok : tokenize(turn)) {
            const auto it = term_ids_.find(tok);
            if (it != term_ids_.end()) tf[it->second] += 1.0;
        }
    }
    SparseVector v;
    double norm = 0.0;
    for (const auto& [term, c] : tf) {
        const double w = c * idf_[term];
        v.emplace_back(term, w);
        norm += w * w;
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [_, w] : v) w /= norm;
    }
    return v;
}

Response ResponderIndex::respond(std::span<const std::string> history) const {
    if (!trained()) throw Untrained("untrained responder: " + model_id_);
    const SparseVector query = vectorize(history);

    auto make = [&](std::size_t e, double score) {
        return Response{entries_[e].reply, score, e, entries_[e].entity};
    };
    if (query.empty()) return make(fallback_, 0.0);

    std::vector<double> scores(entries_.size(), 0.0);
    for (const auto& [term, qw] : query) {
        for (const auto& [e, w] : postings_[term]) scores[e] += qw * w;
    }
    // scores within rounding of each other count as a tie; the earlier entry keeps it
    std::size_t best = 0;
    for (std::size_t e = 1; e < scores.size(); ++e) {
        if (scores[e] > scores[best] + 1e-12) best = e;
    }
    if (scores[best] <= 0.0) return make(fallback_, 0.0);
    return make(best, std::clamp(scores[best], 0.0, 1.0));
}

Json ResponderIndex::to_json() const {
    Json entries = Json::array();
    for (const auto& e : entries_) {
        Json rec = {{"id", e.pair_id}, {"context", e.context}, {"reply", e.reply}};
        if (!e.entity.empty()) rec["entity"] = e.entity;
        entries.push_back(std::move(rec));
    }
    return {{"format", "casper-index"},
            {"version", kSnapshotVersion},
            {"model_id", model_id_},
            {"window", window_},
            {"entries", std::move(entries)}};
}

ResponderIndex ResponderIndex::from_json(const Json& doc) {
    try {
        if (doc.value("format", std::string{}) != "casper-index") {
            throw InvalidArgument("not a responder index snapshot");
        }
        const int version = doc.at("version").get<int>();
        if (version != kSnapshotVersion) {
            throw InvalidArgument("unsupported index snapshot version " + std::to_string(version));
        }
        std::vector<IndexEntry> entries;
        for (const auto& rec : doc.at("entries")) {
            entries.push_back({rec.value("id", std::string{}), rec.at("context").get<std::vector<std::string>>(),
                               rec.at("reply").get<std::string>(), rec.value("entity", std::string{})});
        }
        return build(std::move(entries), doc.at("model_id").get<std::string>(),
                     doc.at("window").get<std::size_t>());
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("index snapshot: ") + e.what());
    }
}

void ResponderIndex::save(const std::filesystem::path& path) const {
    write_json_file(path, to_json());
}

ResponderIndex ResponderIndex::load(const std::filesystem::path& path) {
    return from_json(read_json_file(path));
}

} // namespace casper
