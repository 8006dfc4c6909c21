#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "casper/lexicon.h"

namespace casper {

enum class Resolution { direct, coreference, none };

std::string to_string(Resolution r);

struct PerformerDecision {
    bool can_respond = false;
    std::optional<std::string> entity;
    std::set<std::string> matched;
    Resolution resolved_via = Resolution::none;
    double score = 0.0;
};

struct Recommendation {
    std::string text;
    std::string entity;
    bool recommendation = true;
};

/// Third-person pronouns and demonstratives used for co-reference.
const std::set<std::string>& default_pronouns();

inline constexpr double kDefaultTriggerThreshold = 1.0;

/// Single-turn rule-based recommender for one domain.
class PerformerRule {
public:
    PerformerRule() = default;
    PerformerRule(const DomainLexicon& lexicon, std::vector<std::string> templates,
                  double threshold = kDefaultTriggerThreshold, std::set<std::string> pronouns = default_pronouns());

    const std::string& domain_id() const { return domain_id_; }
    const std::vector<std::string>& templates() const { return templates_; }
    double threshold() const { return threshold_; }
    const std::set<std::string>& pronouns() const { return pronouns_; }
    const std::vector<std::string>& entities() const { return entities_; }

    /// Summed keyword scores per entity found in `text`. Matched phrases are
    /// added to `matched` when given.
    std::map<std::string, double> entity_scores(std::string_view text,
                                                std::set<std::string>* matched = nullptr) const;

    bool has_pronoun(std::string_view text) const;

    /// Rules file body: {domain_id, threshold, templates}.
    Json to_json() const;
    static PerformerRule from_json(const Json& doc, const DomainLexicon& lexicon,
                                   std::set<std::string> pronouns = default_pronouns());
    static PerformerRule load(const std::filesystem::path& path, const DomainLexicon& lexicon,
                              std::set<std::string> pronouns = default_pronouns());
    void save(const std::filesystem::path& path) const;

private:
    std::string domain_id_;
    std::vector<std::string> templates_;
    double threshold_ = kDefaultTriggerThreshold;
    std::set<std::string> pronouns_;
    std::vector<std::string> entities_;
    PhraseMatcher matcher_;
    std::unordered_map<std::string, std::vector<std::pair<std::string, double>>> owners_;
};

/// Decides whether the performer can answer the latest utterance of
/// `history`.
///
/// Direct: some entity's summed keyword score in the latest utterance
/// reaches the threshold (highest score wins, ties to the lower name).
/// Co-reference: otherwise, if the latest utterance contains a pronoun, the
/// entity mentioned most recently in earlier turns is taken.
PerformerDecision probe(const PerformerRule& rule, std::span<const std::string> history);

/// Fills template[rotation % n] with the decided entity. Throws
/// InvalidArgument when the decision cannot respond.
Recommendation perform(const PerformerRule& rule, const PerformerDecision& decision, std::size_t rotation = 0);

} // namespace casper
