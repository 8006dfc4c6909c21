#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "casper/corpus.h"
#include "casper/system.h"

namespace casper {

enum class Mode { casper, casper_us, casper_wo_shifter, baseline };

std::string to_string(Mode mode);
/// Throws InvalidArgument for unknown names.
Mode mode_from_string(std::string_view name);

enum class Status { active, task_success, timeout };

std::string to_string(Status status);

/// Exchanges allowed per session before it times out.
inline constexpr std::size_t kMaxTimesteps = 40;

struct Turn {
    Speaker speaker = Speaker::user;
    std::string text;
    std::string model;  // attribution; empty for user turns
    bool recommendation = false;
    std::string entity;
    std::size_t timestep = 0;  // 1-based exchange number
};

struct SessionState {
    std::string session_id;
    Mode mode = Mode::casper;
    std::vector<Turn> history;
    std::size_t t = 0;  // completed exchanges
    Status status = Status::active;
    std::string accepted_entity;
    std::optional<std::size_t> first_recommendation;  // exchange number

    std::vector<std::string> utterances() const;
    const Turn* last_system_turn() const;
};

/// The per-turn dialog loop.
///
/// A step appends the user turn and then:
///   1. asks every performer (in domain order) whether it can answer; the
///      first that can, answers with a recommendation (not in baseline mode);
///   2. otherwise dispatches by mode: casper classifies the history and picks
///      chatter or one shifter by alpha-weighted argmax; casper_us does the
///      same over {chatter, unified shifter}; casper_wo_shifter always uses
///      chatter; baseline always uses the merged single index.
/// The session times out once kMaxTimesteps exchanges have completed.
class Orchestrator {
public:
    explicit Orchestrator(std::shared_ptr<const TrainedSystem> system);

    SessionState start(std::string session_id, Mode mode) const;

    /// Throws SessionClosed when the session is not active and
    /// InvalidArgument for a blank utterance.
    Turn step(SessionState& state, std::string_view user_utterance) const;

    /// Records task success for the pending recommendation. Throws
    /// SessionClosed or NoPendingRecommendation.
    void accept(SessionState& state, const std::string& entity) const;

    const TrainedSystem& system() const { return *system_; }

private:
    Turn respond(const SessionState& state, const std::vector<std::string>& history) const;

    std::shared_ptr<const TrainedSystem> system_;
};

Json to_json(const Turn& turn);
Json to_json(const SessionState& state);

/// One JSON record per turn.
void export_transcript(std::ostream& out, const SessionState& state);

} // namespace casper
