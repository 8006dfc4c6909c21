#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "casper/config.h"
#include "casper/corpus.h"
#include "casper/harness.h"
#include "casper/lexicon.h"
#include "casper/system.h"

namespace casper {

struct SynthOptions {
    std::uint64_t seed = 1;
    std::size_t dialogs = 800;
    std::size_t docs_per_entity = 12;
    std::size_t max_exchanges = 8;  // small-talk exchanges before the dialog ends or shifts
    double shift_prob = 0.2;        // chance a hobby statement is answered with a topic shift
    double bridge_prob = 0.5;       // chance an "i am bored" style opener gets a title right away
};

/// A small three-domain conversational world (tv, music, game) used for the
/// demo pipeline, the simulation tests and the acceptance suite.
struct SynthWorld {
    std::vector<std::string> domains;
    std::vector<RawDialog> dialogs;
    std::map<std::string, std::vector<EntityDoc>> entity_docs;    // per domain
    std::map<std::string, std::vector<std::string>> templates;    // performer templates per domain
    PersonaScript persona;                                        // follows topic bait, never opens one
};

SynthWorld make_world(const SynthOptions& options = {});

/// Writes dialogs.jsonl, entity_docs/<d>.jsonl, rules/<d>.json,
/// persona.json and config.json.
void write_world(const std::filesystem::path& dir, const SynthWorld& world, const Config& config = {});

/// Full pipeline over a world: mine lexicons, pair, split, train.
TrainedSystem build_system(const SynthWorld& world, const Config& config = {});

std::vector<DomainLexicon> mine_world_lexicons(const SynthWorld& world, const Config& config = {});

} // namespace casper
