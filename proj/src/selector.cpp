#include "casper/selector.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "casper/error.h"

namespace casper {

namespace {

std::span<const std::string> last_turns(std::span<const std::string> turns, std::size_t window) {
    if (turns.size() <= window) return turns;
    return turns.subspan(turns.size() - window);
}

} // namespace

DomainClassifier DomainClassifier::train(const std::vector<SelectorExample>& examples, std::size_t class_count,
                                         double k, std::size_t window, std::vector<std::string>* warnings) {
    if (examples.empty()) throw Untrained("selector: no training examples");
    if (class_count < 1) throw InvalidArgument("selector: class_count must be >= 1");
    if (!(k > 0.0)) throw InvalidArgument("selector: smoothing must be > 0");
    if (window < 1) throw InvalidArgument("selector: window must be >= 1");

    DomainClassifier clf;
    clf.k_ = k;
    clf.window_ = window;
    clf.class_counts_.assign(class_count, 0.0);
    clf.class_tokens_.assign(class_count, 0.0);
    for (const auto& ex : examples) {
        if (ex.label >= class_count) {
            throw InvalidArgument("selector: label " + std::to_string(ex.label) + " out of range");
        }
        clf.class_counts_[ex.label] += 1.0;
        for (const auto& turn : last_turns(ex.history, window)) {
            for (const auto& tok : tokenize(turn)) {
                auto [it, _] = clf.token_counts_.try_emplace(tok, std::vector<double>(class_count, 0.0));
                it->second[ex.label] += 1.0;
                clf.class_tokens_[ex.label] += 1.0;
            }
        }
    }
    if (warnings) {
        for (std::size_t c = 0; c < class_count; ++c) {
            if (clf.class_counts_[c] == 0.0) {
                warnings->push_back("selector: class " + std::to_string(c) + " has no examples");
            }
        }
    }
    clf.finalize();
    return clf;
}

void DomainClassifier::finalize() {
    const std::size_t c_count = class_counts_.size();
    double n = 0.0;
    for (double c : class_counts_) n += c;
    log_priors_.resize(c_count);
    for (std::size_t c = 0; c < c_count; ++c) {
        log_priors_[c] = std::log((class_counts_[c] + k_) / (n + k_ * static_cast<double>(c_count)));
    }
    const double v = static_cast<double>(token_counts_.size());
    log_likelihoods_.clear();
    for (const auto& [tok, counts] : token_counts_) {
        std::vector<double> ll(c_count);
        for (std::size_t c = 0; c < c_count; ++c) {
            ll[c] = std::log((counts[c] + k_) / (class_tokens_[c] + k_ * v));
        }
        log_likelihoods_.emplace(tok, std::move(ll));
    }
}

DomainConfidence DomainClassifier::classify(std::span<const std::string> history) const {
    if (class_counts_.empty()) throw Untrained("selector: classifier not trained");
    std::vector<double> scores = log_priors_;
    for (const auto& turn : last_turns(history, window_)) {
        for (const auto& tok : tokenize(turn)) {
            const auto it = log_likelihoods_.find(tok);
            if (it == log_likelihoods_.end()) continue;
            for (std::size_t c = 0; c < scores.size(); ++c) scores[c] += it->second[c];
        }
    }
    const double m = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (auto& s : scores) {
        s = std::exp(s - m);
        z += s;
    }
    for (auto& s : scores) s /= z;
    return {std::move(scores)};
}

std::vector<double> DomainClassifier::priors() const {
    std::vector<double> out(log_priors_.size());
    std::transform(log_priors_.begin(), log_priors_.end(), out.begin(), [](double l) { return std::exp(l); });
    return out;
}

std::optional<double> DomainClassifier::log_likelihood(const std::string& token, std::size_t cls) const {
    const auto it = log_likelihoods_.find(token);
    if (it == log_likelihoods_.end()) return std::nullopt;
    return it->second.at(cls);
}

Json DomainClassifier::to_json() const {
    // sorted for a stable snapshot
    std::map<std::string, std::vector<double>> tokens(token_counts_.begin(), token_counts_.end());
    return {{"format", "casper-selector"}, {"version", 1},         {"smoothing", k_},
            {"window", window_},           {"class_counts", class_counts_},
            {"class_tokens", class_tokens_}, {"token_counts", tokens}};
}

DomainClassifier DomainClassifier::from_json(const Json& doc) {
    try {
        if (doc.value("format", std::string{}) != "casper-selector" || doc.at("version").get<int>() != 1) {
            throw InvalidArgument("not a selector snapshot");
        }
        DomainClassifier clf;
        clf.k_ = doc.at("smoothing").get<double>();
        clf.window_ = doc.at("window").get<std::size_t>();
        clf.class_counts_ = doc.at("class_counts").get<std::vector<double>>();
        clf.class_tokens_ = doc.at("class_tokens").get<std::vector<double>>();
        for (const auto& [tok, counts] : doc.at("token_counts").items()) {
            auto v = counts.get<std::vector<double>>();
            if (v.size() != clf.class_counts_.size()) throw InvalidArgument("selector snapshot: bad token row");
            clf.token_counts_.emplace(tok, std::move(v));
        }
        if (clf.class_counts_.empty() || clf.class_tokens_.size() != clf.class_counts_.size() ||
            !(clf.k_ > 0.0)) {
            throw InvalidArgument("selector snapshot: inconsistent shape");
        }
        clf.finalize();
        return clf;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("selector snapshot: ") + e.what());
    }
}

void DomainClassifier::save(const std::filesystem::path& path) const {
    write_json_file(path, to_json());
}

DomainClassifier DomainClassifier::load(const std::filesystem::path& path) {
    return from_json(read_json_file(path));
}

AlphaSchedule AlphaSchedule::uniform(std::size_t class_count, double alpha0, double decay, double floor) {
    AlphaSchedule s;
    s.base.assign(class_count, alpha0);
    if (!s.base.empty()) s.base[0] = 1.0;
    s.decay = decay;
    s.floor = floor;
    return s;
}

void AlphaSchedule::validate() const {
    if (base.empty()) throw InvalidArgument("alpha schedule: no classes");
    for (std::size_t i = 1; i < base.size(); ++i) {
        if (!(base[i] > 0.0)) throw InvalidArgument("alpha schedule: base alpha must be > 0");
    }
    if (!(decay > 0.0 && decay <= 1.0)) throw InvalidArgument("alpha schedule: decay must be in (0, 1]");
    if (!(floor > 0.0)) throw InvalidArgument("alpha schedule: floor must be > 0");
}

double AlphaSchedule::alpha(std::size_t cls, std::size_t t) const {
    if (cls == 0) return 1.0;
    return std::max(floor, base.at(cls) * std::pow(decay, static_cast<double>(t)));
}

std::vector<double> AlphaSchedule::alphas(std::size_t t) const {
    std::vector<double> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = alpha(i, t);
    return out;
}

std::size_t select(const DomainConfidence& conf, std::span<const double> alphas) {
    if (conf.probs.empty() || conf.probs.size() != alphas.size()) {
        throw InvalidArgument("select: confidence and alpha sizes differ");
    }
    std::vector<double> scores(conf.probs.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!(alphas[i] > 0.0)) throw InvalidArgument("select: alpha must be > 0");
        scores[i] = conf.probs[i] / alphas[i];
    }
    const double best = *std::max_element(scores.begin(), scores.end());
    const double cutoff = best - kSelectTieTolerance * std::abs(best);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] >= cutoff) return i;
    }
    return 0;
}

std::size_t select(const DomainConfidence& conf, const AlphaSchedule& schedule, std::size_t t) {
    const auto a = schedule.alphas(t);
    return select(conf, a);
}

std::optional<std::size_t> first_shift_step(const DomainConfidence& conf, const AlphaSchedule& schedule,
                                            std::size_t horizon) {
    for (std::size_t t = 0; t < horizon; ++t) {
        if (select(conf, schedule, t) != 0) return t;
    }
    return std::nullopt;
}

} // namespace casper
