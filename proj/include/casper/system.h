#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "casper/config.h"
#include "casper/corpus.h"
#include "casper/lexicon.h"
#include "casper/performer.h"
#include "casper/respond.h"
#include "casper/selector.h"

namespace casper {

/// Every trained model the orchestrator dispatches to. Read-only once
/// built; safe to share across sessions and threads.
struct TrainedSystem {
    Config config;
    std::vector<std::string> domains;
    std::vector<DomainLexicon> lexicons;    // aligned with domains
    std::vector<PerformerRule> performers;  // aligned with domains
    ResponderIndex chatter;
    std::vector<ResponderIndex> shifters;   // aligned with domains
    ResponderIndex unified_shifter;
    ResponderIndex baseline;
    DomainClassifier selector;              // classes: open + domains
    DomainClassifier unified_selector;      // classes: open, any shifter
    AlphaSchedule schedule;
    AlphaSchedule unified_schedule;

    std::size_t domain_index(const std::string& domain) const;
};

/// Reorders `lexicons` to match `order` (or sorts by id when `order` is
/// empty). Throws if a listed domain has no lexicon.
std::vector<DomainLexicon> order_lexicons(std::vector<DomainLexicon> lexicons,
                                          const std::vector<std::string>& order);

/// Recommendation entries for the single-model baseline: for every selector
/// history on which some performer fires, the performer's utterance.
std::vector<IndexEntry> recommendation_entries(const DatasetBundle& bundle,
                                               const std::vector<PerformerRule>& performers);

/// Single merged index: chatter, shifter and recommendation entries in
/// corpus order. A recommendation precedes the corpus reply to the same
/// history, so it wins the tie.
ResponderIndex build_baseline(const DatasetBundle& bundle, const std::vector<PerformerRule>& performers,
                              std::size_t window);

/// One shifter index over the union of all shifter splits.
ResponderIndex build_unified_shifter(const DatasetBundle& bundle, std::size_t window);

/// Selector examples relabelled to {0: open, 1: any domain}.
std::vector<SelectorExample> unified_examples(const std::vector<SelectorExample>& examples);

/// Trains every responder and both classifiers from one dataset bundle.
/// Throws Untrained when the chatter split or any shifter split is empty.
TrainedSystem train_system(const DatasetBundle& bundle, const std::vector<DomainLexicon>& lexicons,
                           const std::vector<PerformerRule>& performers, const Config& config);

void save_system(const std::filesystem::path& dir, const TrainedSystem& system);
TrainedSystem load_system(const std::filesystem::path& dir);

} // namespace casper
