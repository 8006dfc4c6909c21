#pragma once

// Reference computations written independently of the library code paths
// they check. Slow and obvious on purpose.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "casper/corpus.h"
#include "casper/harness.h"
#include "casper/text.h"

namespace casper::oracle {

inline std::vector<std::string> tail(const std::vector<std::string>& turns, std::size_t window) {
    if (turns.size() <= window) return turns;
    return {turns.end() - static_cast<long>(window), turns.end()};
}

/// Naive Bayes posterior from raw counts, in long double.
inline std::vector<double> nb_posterior(const std::vector<SelectorExample>& examples, std::size_t classes, double k,
                                        std::size_t window, const std::vector<std::string>& history) {
    std::vector<long double> n(classes, 0), tokens(classes, 0);
    std::map<std::string, std::vector<long double>> counts;
    for (const auto& ex : examples) {
        n[ex.label] += 1;
        for (const auto& turn : tail(ex.history, window)) {
            for (const auto& w : tokenize(turn)) {
                auto& row = counts[w];
                row.resize(classes, 0);
                row[ex.label] += 1;
                tokens[ex.label] += 1;
            }
        }
    }
    long double total = 0;
    for (auto c : n) total += c;
    const long double v = static_cast<long double>(counts.size());
    std::vector<long double> logp(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        logp[c] = std::log((n[c] + k) / (total + k * classes));
        for (const auto& turn : tail(history, window)) {
            for (const auto& w : tokenize(turn)) {
                const auto it = counts.find(w);
                if (it == counts.end()) continue;
                logp[c] += std::log((it->second[c] + k) / (tokens[c] + k * v));
            }
        }
    }
    const long double m = *std::max_element(logp.begin(), logp.end());
    long double z = 0;
    for (auto l : logp) z += std::exp(l - m);
    std::vector<double> out(classes);
    for (std::size_t c = 0; c < classes; ++c) out[c] = static_cast<double>(std::exp(logp[c] - m) / z);
    return out;
}

/// Does `phrase` (space-joined tokens) occur as a contiguous token run in `text`?
inline bool contains_phrase(const std::string& text, const std::string& phrase) {
    const auto t = tokenize(text);
    const auto p = tokenize(phrase);
    if (p.empty() || p.size() > t.size()) return false;
    for (std::size_t i = 0; i + p.size() <= t.size(); ++i) {
        if (std::equal(p.begin(), p.end(), t.begin() + static_cast<long>(i))) return true;
    }
    return false;
}

inline bool hits(const std::set<std::string>& words, const std::string& text) {
    return std::any_of(words.begin(), words.end(), [&](const auto& w) { return contains_phrase(text, w); });
}

/// Longest-first, non-overlapping left-to-right scan by brute force.
inline std::vector<std::string> greedy_matches(const std::set<std::string>& words, const std::string& text) {
    const auto t = tokenize(text);
    std::vector<Tokens> phrases;
    for (const auto& w : words) phrases.push_back(tokenize(w));
    std::sort(phrases.begin(), phrases.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < t.size()) {
        bool found = false;
        for (const auto& p : phrases) {
            if (!p.empty() && i + p.size() <= t.size() &&
                std::equal(p.begin(), p.end(), t.begin() + static_cast<long>(i))) {
                out.push_back(join(p, " "));
                i += p.size();
                found = true;
                break;
            }
        }
        if (!found) ++i;
    }
    return out;
}

/// Total log-probability of `texts` under an add-k bigram model trained on
/// `train`, counted from scratch. Returns {sum of log p, token count}.
inline std::pair<long double, std::size_t> bigram_logprob(const std::vector<std::string>& train,
                                                          const std::vector<std::string>& texts, double k,
                                                          bool unk_slot) {
    std::map<std::pair<std::string, std::string>, long double> pair_counts;
    std::map<std::string, long double> hist_counts;
    std::set<std::string> vocab;
    for (const auto& text : train) {
        std::string prev = "<s>";
        for (const auto& w : tokenize(text)) {
            pair_counts[{prev, w}] += 1;
            hist_counts[prev] += 1;
            vocab.insert(w);
            prev = w;
        }
    }
    const long double s = static_cast<long double>(vocab.size() + (unk_slot ? 1 : 0));
    long double total = 0;
    std::size_t n = 0;
    for (const auto& text : texts) {
        std::string prev = "<s>";
        for (const auto& w : tokenize(text)) {
            const long double c = pair_counts.count({prev, w}) ? pair_counts[{prev, w}] : 0;
            const long double h = hist_counts.count(prev) ? hist_counts[prev] : 0;
            total += std::log((c + k) / (h + k * s));
            ++n;
            prev = w;
        }
    }
    return {total, n};
}

/// Token counts per entity for mining checks.
inline std::map<std::string, std::map<std::string, int>> doc_counts(const std::vector<EntityDoc>& docs) {
    std::map<std::string, std::map<std::string, int>> out;
    for (const auto& d : docs) {
        for (const auto& w : tokenize(d.text)) out[d.entity][w] += 1;
    }
    return out;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

} // namespace casper::oracle
