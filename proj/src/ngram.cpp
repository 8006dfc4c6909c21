#include "casper/ngram.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "casper/error.h"

namespace casper {

std::string NGramModel::key(std::span<const std::string> history) {
    std::string k;
    for (const auto& tok : history) {
        k.append(tok);
        k.push_back('\x1f');
    }
    return k;
}

NGramModel NGramModel::train(const std::vector<std::string>& texts, const NGramOptions& options) {
    if (options.order < 1) throw InvalidArgument("n-gram order must be >= 1");
    if (!(options.k > 0.0)) throw InvalidArgument("n-gram smoothing k must be > 0");

    NGramModel model;
    model.options_ = options;
    const std::size_t ctx = options.order - 1;
    for (const auto& text : texts) {
        Tokens toks(ctx, kBegin);
        for (auto& t : tokenize(text)) toks.push_back(std::move(t));
        for (std::size_t i = ctx; i < toks.size(); ++i) {
            const std::string h = key(std::span<const std::string>(toks).subspan(i - ctx, ctx));
            model.counts_[h][toks[i]] += 1.0;
            model.context_totals_[h] += 1.0;
            model.vocab_.insert(toks[i]);
        }
    }
    return model;
}

double NGramModel::prob(std::span<const std::string> history, const std::string& token) const {
    const std::size_t ctx = options_.order - 1;
    Tokens h;
    for (std::size_t i = history.size(); i < ctx; ++i) h.push_back(kBegin);
    const std::size_t from = history.size() > ctx ? history.size() - ctx : 0;
    for (std::size_t i = from; i < history.size(); ++i) h.push_back(history[i]);

    const bool known = vocab_.count(token) > 0;
    if (!known && !options_.unk_slot) {
        throw InvalidArgument("out-of-vocabulary token '" + token + "' with no unk slot");
    }
    const std::string hk = key(h);
    double c_hw = 0.0;
    double c_h = 0.0;
    if (const auto it = context_totals_.find(hk); it != context_totals_.end()) {
        c_h = it->second;
        if (known) {
            const auto& next = counts_.at(hk);
            if (const auto jt = next.find(token); jt != next.end()) c_hw = jt->second;
        }
    }
    const double support = static_cast<double>(support_size());
    return (c_hw + options_.k) / (c_h + options_.k * support);
}

double NGramModel::negative_log_likelihood(const std::string& text, std::size_t& tokens) const {
    const Tokens toks = tokenize(text);
    tokens = toks.size();
    double nll = 0.0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        nll -= std::log(prob(std::span<const std::string>(toks).first(i), toks[i]));
    }
    return nll;
}

NGramModel train_lm(const std::vector<ContextReplyPair>& pairs, std::size_t order, double k, bool unk_slot) {
    std::vector<std::string> texts;
    texts.reserve(pairs.size());
    for (const auto& p : pairs) texts.push_back(p.reply);
    return NGramModel::train(texts, {order, k, unk_slot});
}

double perplexity(const NGramModel& model, const std::vector<std::string>& texts) {
    std::vector<double> per_text;
    per_text.reserve(texts.size());
    std::size_t n = 0;
    for (const auto& text : texts) {
        std::size_t toks = 0;
        per_text.push_back(model.negative_log_likelihood(text, toks));
        n += toks;
    }
    if (n == 0) throw InvalidArgument("perplexity: empty held-out set");
    // summed in sorted order so the result does not depend on input order
    std::sort(per_text.begin(), per_text.end());
    const double nll = std::accumulate(per_text.begin(), per_text.end(), 0.0);
    return std::exp(nll / static_cast<double>(n));
}

double perplexity(const NGramModel& model, const std::vector<ContextReplyPair>& heldout) {
    std::vector<std::string> texts;
    texts.reserve(heldout.size());
    for (const auto& p : heldout) texts.push_back(p.reply);
    return perplexity(model, texts);
}

} // namespace casper
