#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "casper/corpus.h"

namespace casper {

struct NGramOptions {
    std::size_t order = 2;
    double k = 0.1;
    /// Reserve one extra outcome for unseen tokens. When false, scoring an
    /// out-of-vocabulary token throws.
    bool unk_slot = true;
};

/// Additive-k smoothed n-gram model over reply tokens.
///
///   p(w | h) = (c(h, w) + k) / (c(h) + k * S)
///
/// where h is the previous order-1 tokens (padded with begin markers) and S
/// is the support size: |vocab|, plus one when the unk slot is on.
class NGramModel {
public:
    static constexpr const char* kBegin = "<s>";

    NGramModel() = default;
    static NGramModel train(const std::vector<std::string>& texts, const NGramOptions& options = {});

    double prob(std::span<const std::string> history, const std::string& token) const;

    /// Sum of -ln p over every token of `text`, context seeded with begin
    /// markers. `tokens` receives the token count.
    double negative_log_likelihood(const std::string& text, std::size_t& tokens) const;

    std::size_t order() const { return options_.order; }
    double k() const { return options_.k; }
    bool unk_slot() const { return options_.unk_slot; }
    const std::set<std::string>& vocab() const { return vocab_; }
    std::size_t support_size() const { return vocab_.size() + (options_.unk_slot ? 1 : 0); }

private:
    static std::string key(std::span<const std::string> history);

    NGramOptions options_;
    std::set<std::string> vocab_;
    std::unordered_map<std::string, std::unordered_map<std::string, double>> counts_;
    std::unordered_map<std::string, double> context_totals_;
};

/// Trains on the replies of `pairs`.
NGramModel train_lm(const std::vector<ContextReplyPair>& pairs, std::size_t order = 2, double k = 0.1,
                    bool unk_slot = true);

/// exp(mean per-token negative log-probability) over the held-out replies.
/// Throws if there is nothing to score.
double perplexity(const NGramModel& model, const std::vector<ContextReplyPair>& heldout);
double perplexity(const NGramModel& model, const std::vector<std::string>& texts);

} // namespace casper
