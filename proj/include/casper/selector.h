#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "casper/corpus.h"

namespace casper {

/// Posterior over the C response domains; index 0 is the open domain.
struct DomainConfidence {
    std::vector<double> probs;
};

inline constexpr double kDefaultClassifierSmoothing = 1.0;

/// Multinomial bag-of-tokens classifier predicting the domain of the next
/// reply from the dialog history.
///
///   prior(c)    = (n_c + k) / (N + k * C)
///   p(w | c)    = (count(w, c) + k) / (tokens(c) + k * |V|)
///   posterior   = softmax_c(log prior(c) + sum_w log p(w | c))
///
/// Tokens outside the training vocabulary are ignored. Only the last
/// `window` turns of a history are read, both in training and at query time.
class DomainClassifier {
public:
    DomainClassifier() = default;

    /// Throws Untrained on an empty example list. Classes without examples
    /// keep prior-only mass and produce a warning.
    static DomainClassifier train(const std::vector<SelectorExample>& examples, std::size_t class_count,
                                  double k = kDefaultClassifierSmoothing, std::size_t window = kDefaultWindow,
                                  std::vector<std::string>* warnings = nullptr);

    DomainConfidence classify(std::span<const std::string> history) const;

    std::size_t class_count() const { return class_counts_.size(); }
    double smoothing() const { return k_; }
    std::size_t window() const { return window_; }
    std::size_t vocab_size() const { return token_counts_.size(); }
    std::vector<double> priors() const;
    /// log p(w | c); nullopt for tokens outside the vocabulary.
    std::optional<double> log_likelihood(const std::string& token, std::size_t cls) const;

    Json to_json() const;
    static DomainClassifier from_json(const Json& doc);
    void save(const std::filesystem::path& path) const;
    static DomainClassifier load(const std::filesystem::path& path);

private:
    void finalize();

    double k_ = kDefaultClassifierSmoothing;
    std::size_t window_ = kDefaultWindow;
    std::vector<double> class_counts_;   // examples per class
    std::vector<double> class_tokens_;   // tokens per class
    std::unordered_map<std::string, std::vector<double>> token_counts_;
    std::vector<double> log_priors_;
    std::unordered_map<std::string, std::vector<double>> log_likelihoods_;
};

inline constexpr double kDefaultAlpha0 = 4.0;
inline constexpr double kDefaultAlphaDecay = 0.85;
inline constexpr double kDefaultAlphaFloor = 0.5;

/// alpha_i(t) = max(floor, base_i * decay^t) for shifter classes; the open
/// domain (class 0) is pinned to 1.
struct AlphaSchedule {
    std::vector<double> base;  // per class; base[0] is ignored
    double decay = kDefaultAlphaDecay;
    double floor = kDefaultAlphaFloor;

    static AlphaSchedule uniform(std::size_t class_count, double alpha0 = kDefaultAlpha0,
                                 double decay = kDefaultAlphaDecay, double floor = kDefaultAlphaFloor);

    /// Throws InvalidArgument unless every base > 0, decay in (0, 1] and
    /// floor > 0.
    void validate() const;
    double alpha(std::size_t cls, std::size_t t) const;
    std::vector<double> alphas(std::size_t t) const;
};

/// Relative tolerance under which two weighted scores count as tied.
inline constexpr double kSelectTieTolerance = 1e-12;

/// argmax_i probs_i / alphas_i. Scores within kSelectTieTolerance of the
/// maximum are ties and go to the lowest index, so the open domain wins
/// ties.
std::size_t select(const DomainConfidence& conf, std::span<const double> alphas);
std::size_t select(const DomainConfidence& conf, const AlphaSchedule& schedule, std::size_t t);

/// First timestep in [0, horizon) at which a non-open class is selected for a
/// fixed confidence vector.
std::optional<std::size_t> first_shift_step(const DomainConfidence& conf, const AlphaSchedule& schedule,
                                            std::size_t horizon);

} // namespace casper
