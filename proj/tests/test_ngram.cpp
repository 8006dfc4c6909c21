#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "casper/error.h"
#include "casper/ngram.h"
#include "oracles.h"

using namespace casper;

namespace {

std::vector<std::string> generated_corpus(std::uint64_t seed, std::size_t n) {
    // strongly ordered bigram structure: each word usually follows its predecessor
    const std::vector<std::string> chain{"alpha", "beta", "gamma", "delta", "eps", "zeta"};
    std::mt19937_64 rng(seed);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t w = rng() % chain.size();
        std::string s;
        for (std::size_t j = 0, len = 3 + rng() % 6; j < len; ++j) {
            s += chain[w] + " ";
            w = (rng() % 10 < 8) ? (w + 1) % chain.size() : rng() % chain.size();
        }
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("uniform unigram: perplexity V without the unk slot, slightly above with it") {
    const std::vector<std::string> train{"a b c d", "d c b a"};
    const auto with_unk = NGramModel::train(train, {1, 0.5, true});
    CHECK(with_unk.support_size() == 5);
    // each known token: (2 + k) / (8 + k * 5); the unk slot holds the rest
    CHECK(perplexity(with_unk, std::vector<std::string>{"a", "c d b"}) == doctest::Approx(10.5 / 2.5).epsilon(1e-12));
    const auto no_unk = NGramModel::train(train, {1, 0.5, false});
    CHECK(perplexity(no_unk, std::vector<std::string>{"a", "c d b"}) == doctest::Approx(4.0));
}

TEST_CASE("degenerate unigram approaches 1 as k shrinks") {
    double prev = 1e9;
    for (double k : {1.0, 0.1, 0.01, 1e-4, 1e-6}) {
        const auto m = NGramModel::train({"a a a"}, {1, k, false});
        const double ppl = perplexity(m, std::vector<std::string>{"a a a"});
        CHECK(ppl >= 1.0);
        CHECK(ppl <= prev);
        prev = ppl;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-5));
    const auto with_unk = NGramModel::train({"a a a"}, {1, 1e-9, true});
    CHECK(perplexity(with_unk, std::vector<std::string>{"a a a"}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("bigram log-probability matches an independent count") {
    const auto train = generated_corpus(1, 200);
    const auto eval = generated_corpus(2, 50);
    for (bool unk : {true, false}) {
        for (double k : {0.1, 1.0}) {
            const auto m = NGramModel::train(train, {2, k, unk});
            const auto [logp, n] = oracle::bigram_logprob(train, eval, k, unk);
            CHECK(perplexity(m, eval) == doctest::Approx(std::exp(static_cast<double>(-logp / n))).epsilon(1e-10));
        }
    }
}

TEST_CASE("probabilities sum to 1 over the support") {
    const auto m = NGramModel::train(generated_corpus(3, 40), {2, 0.1, true});
    for (const std::vector<std::string>& h : {std::vector<std::string>{}, {"alpha"}, {"beta", "gamma"}, {"unseen"}}) {
        double total = m.prob(h, "<never-seen>");
        for (const auto& w : m.vocab()) {
            const double p = m.prob(h, w);
            CHECK(p > 0.0);
            CHECK(p < 1.0);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("no unk slot: out-of-vocabulary tokens throw") {
    const auto m = NGramModel::train({"a b"}, {2, 0.1, false});
    CHECK_THROWS_AS(perplexity(m, std::vector<std::string>{"a z"}), InvalidArgument);
    CHECK_NOTHROW(perplexity(NGramModel::train({"a b"}, {2, 0.1, true}), std::vector<std::string>{"a z"}));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(NGramModel::train({"a"}, {0, 0.1, true}), InvalidArgument);
    CHECK_THROWS_AS(NGramModel::train({"a"}, {2, 0.0, true}), InvalidArgument);
    const auto m = NGramModel::train({"a"});
    CHECK_THROWS_AS(perplexity(m, std::vector<std::string>{}), InvalidArgument);
    CHECK_THROWS_AS(perplexity(m, std::vector<ContextReplyPair>{}), InvalidArgument);
}

TEST_CASE("perplexity is invariant to pair ordering") {
    std::vector<ContextReplyPair> pairs;
    for (const auto& s : generated_corpus(4, 60)) {
        ContextReplyPair p;
        p.id = "p" + std::to_string(pairs.size());
        p.context = {"ctx"};
        p.reply = s;
        pairs.push_back(p);
    }
    const auto heldout = std::vector<ContextReplyPair>(pairs.begin() + 40, pairs.end());
    auto train = std::vector<ContextReplyPair>(pairs.begin(), pairs.begin() + 40);
    const double base = perplexity(train_lm(train), heldout);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(train.begin(), train.end(), rng);
        auto h = heldout;
        std::shuffle(h.begin(), h.end(), rng);
        CHECK(perplexity(train_lm(train), h) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("training replies fit better than their shuffled tokens") {
    for (std::uint64_t seed : {5, 6, 7}) {
        const auto replies = generated_corpus(seed, 120);
        const auto m = NGramModel::train(replies);
        std::mt19937_64 rng(seed);
        std::vector<std::string> shuffled;
        for (const auto& r : replies) {
            auto toks = tokenize(r);
            std::shuffle(toks.begin(), toks.end(), rng);
            shuffled.push_back(join(toks, " "));
        }
        const auto [lp_train, n1] = oracle::bigram_logprob(replies, replies, 0.1, true);
        const auto [lp_shuf, n2] = oracle::bigram_logprob(replies, shuffled, 0.1, true);
        REQUIRE(n1 == n2);
        CHECK(lp_train > lp_shuf);
        CHECK(perplexity(m, replies) <= perplexity(m, shuffled));
    }
}
