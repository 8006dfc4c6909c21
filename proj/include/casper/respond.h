#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "casper/corpus.h"

namespace casper {

struct IndexEntry {
    std::string pair_id;
    std::vector<std::string> context;
    std::string reply;
    std::string entity;  // set on recommendation entries
};

struct Response {
    std::string reply;
    double score = 0.0;  // cosine in [0, 1]
    std::size_t entry = 0;
    std::string entity;
};

using SparseVector = std::vector<std::pair<std::size_t, double>>;  // (term id, weight), sorted

/// Retrieval responder: returns the reply whose stored context is closest to
/// the query history under tf-idf cosine similarity.
///
/// Term weights are raw term frequency times smoothed idf,
/// ln((1 + N) / (1 + df)) + 1, computed over this index's contexts only, and
/// every context vector is L2-normalized. Immutable after build.
class ResponderIndex {
public:
    ResponderIndex() = default;

    static ResponderIndex build(const std::vector<ContextReplyPair>& pairs, std::string model_id,
                                std::size_t window = kDefaultWindow);
    static ResponderIndex build(std::vector<IndexEntry> entries, std::string model_id,
                                std::size_t window = kDefaultWindow);

    /// Best reply for the last `window` turns of `history`. Ties go to the
    /// lowest entry id. A query with no known tokens gets the index's most
    /// frequent reply with score 0.
    Response respond(std::span<const std::string> history) const;

    const std::string& model_id() const { return model_id_; }
    const std::vector<IndexEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t window() const { return window_; }
    bool trained() const { return !entries_.empty(); }

    SparseVector vectorize(std::span<const std::string> turns) const;
    const SparseVector& entry_vector(std::size_t entry) const { return vectors_.at(entry); }

    Json to_json() const;
    static ResponderIndex from_json(const Json& doc);
    void save(const std::filesystem::path& path) const;
    static ResponderIndex load(const std::filesystem::path& path);

private:
    std::string model_id_;
    std::size_t window_ = kDefaultWindow;
    std::vector<IndexEntry> entries_;
    std::unordered_map<std::string, std::size_t> term_ids_;
    std::vector<double> idf_;
    std::vector<SparseVector> vectors_;
    std::vector<std::vector<std::pair<std::size_t, double>>> postings_;  // term -> (entry, weight)
    std::size_t fallback_ = 0;
};

} // namespace casper
