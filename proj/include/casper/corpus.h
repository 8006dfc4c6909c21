#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "casper/lexicon.h"

namespace casper {

enum class Speaker { user, system, unknown };

std::string to_string(Speaker speaker);
Speaker speaker_from_string(const std::string& s);

struct Utterance {
    Speaker speaker = Speaker::unknown;
    std::string text;
};

struct RawDialog {
    std::string id;
    std::vector<Utterance> turns;
};

enum class InputFormat { jsonl_dialogs };

struct IngestResult {
    std::vector<RawDialog> dialogs;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Reads one {id, turns:[{speaker, text}]} record per line. Malformed
/// records (bad JSON, missing fields, empty turn list, blank turn text,
/// duplicate id) are skipped and counted. Blank lines are ignored.
IngestResult ingest(const std::filesystem::path& path, InputFormat format = InputFormat::jsonl_dialogs);
IngestResult ingest_lines(const std::vector<std::string>& lines);

inline constexpr std::size_t kDefaultWindow = 4;
inline constexpr std::size_t kOpenDomain = 0;
inline const std::string kOpenDomainId = "open";

struct ContextReplyPair {
    std::string id;                    // "<dialog id>#<reply turn index>"
    std::vector<std::string> context;  // most recent last
    std::string reply;
    std::set<std::string> context_domains;
    std::set<std::string> reply_domains;
    std::map<std::string, std::size_t> reply_hits;  // domain -> matched token count
};

/// Recomputes the domain annotations of `pair` against `lexicons`. Context
/// utterances are matched one by one, so a phrase split across turns never
/// matches.
void annotate(ContextReplyPair& pair, std::span<const DomainLexicon> lexicons);

/// One pair per turn t >= 1: context is the last min(t, window) turns
/// before t, reply is turn t.
std::vector<ContextReplyPair> pair(const RawDialog& dialog, std::size_t window,
                                   std::span<const DomainLexicon> lexicons);

std::vector<ContextReplyPair> pair_all(const std::vector<RawDialog>& dialogs, std::size_t window,
                                       std::span<const DomainLexicon> lexicons);

struct SelectorExample {
    std::string id;
    std::vector<std::string> history;
    std::size_t label = kOpenDomain;  // 0 = open domain, i + 1 = domains[i]
};

struct SplitStats {
    std::size_t pairs = 0;
    std::size_t chatter = 0;
    std::map<std::string, std::size_t> shifter;
    std::size_t multi_domain = 0;  // replies hitting several domains
    std::size_t continuation = 0;  // single-domain replies whose context already had the domain
    std::vector<std::size_t> label_counts;
};

struct DatasetBundle {
    std::vector<std::string> domains;
    std::vector<ContextReplyPair> chatter_pairs;
    std::map<std::string, std::vector<ContextReplyPair>> shifter_pairs;
    std::vector<SelectorExample> selector_examples;
    SplitStats stats;
};

/// Selector label of a pair: 0 when no listed domain is hit, otherwise the
/// index + 1 of the domain with the most matched reply tokens (ties go to
/// the lowest index).
std::size_t selector_label(const ContextReplyPair& pair, const std::vector<std::string>& domains);

/// Builds the chatter, per-domain shifter and selector training sets.
///
/// A pair enters shifter_pairs[d] iff d is the only listed domain in its
/// reply and d does not occur in its context. chatter_pairs holds pairs
/// whose reply hits no listed domain. Every pair yields one selector
/// example labelled by selector_label.
DatasetBundle split(const std::vector<ContextReplyPair>& pairs, const std::vector<std::string>& domains);

/// Deterministic 90/10 assignment by FNV-1a hash of the pair id.
bool is_heldout(const std::string& pair_id);

struct HoldoutSplit {
    std::vector<ContextReplyPair> train;
    std::vector<ContextReplyPair> heldout;
};

HoldoutSplit holdout(const std::vector<ContextReplyPair>& pairs);

/// Writes chatter.jsonl, shifter_<d>.jsonl, selector.jsonl and stats.json
/// into `dir`.
void write_bundle(const std::filesystem::path& dir, const DatasetBundle& bundle);
DatasetBundle read_bundle(const std::filesystem::path& dir);

Json stats_to_json(const DatasetBundle& bundle);

} // namespace casper
