#include "casper/orchestrator.h"

#include "casper/error.h"

namespace casper {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::casper: return "casper";
        case Mode::casper_us: return "casper_us";
        case Mode::casper_wo_shifter: return "casper_wo_shifter";
        case Mode::baseline: return "baseline";
    }
    return "casper";
}

Mode mode_from_string(std::string_view name) {
    if (name == "casper") return Mode::casper;
    if (name == "casper_us") return Mode::casper_us;
    if (name == "casper_wo_shifter") return Mode::casper_wo_shifter;
    if (name == "baseline") return Mode::baseline;
    throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

std::string to_string(Status status) {
    switch (status) {
        case Status::active: return "active";
        case Status::task_success: return "task_success";
        case Status::timeout: return "timeout";
    }
    return "active";
}

std::vector<std::string> SessionState::utterances() const {
    std::vector<std::string> out;
    out.reserve(history.size());
    for (const auto& turn : history) out.push_back(turn.text);
    return out;
}

const Turn* SessionState::last_system_turn() const {
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->speaker == Speaker::system) return &*it;
    }
    return nullptr;
}

Orchestrator::Orchestrator(std::shared_ptr<const TrainedSystem> system) : system_(std::move(system)) {
    if (!system_) throw InvalidArgument("orchestrator: no trained system");
}

SessionState Orchestrator::start(std::string session_id, Mode mode) const {
    SessionState s;
    s.session_id = std::move(session_id);
    s.mode = mode;
    return s;
}

Turn Orchestrator::respond(const SessionState& state, const std::vector<std::string>& history) const {
    const TrainedSystem& sys = *system_;
    Turn turn;
    turn.speaker = Speaker::system;

    if (state.mode == Mode::baseline) {
        auto r = sys.baseline.respond(history);
        turn.text = std::move(r.reply);
        turn.model = sys.baseline.model_id();
        turn.recommendation = !r.entity.empty();
        turn.entity = std::move(r.entity);
        return turn;
    }

    for (std::size_t i = 0; i < sys.performers.size(); ++i) {
        const auto decision = probe(sys.performers[i], history);
        if (!decision.can_respond) continue;
        auto rec = perform(sys.performers[i], decision);
        turn.text = std::move(rec.text);
        turn.model = "performer:" + sys.domains[i];
        turn.recommendation = true;
        turn.entity = std::move(rec.entity);
        return turn;
    }

    const ResponderIndex* responder = &sys.chatter;
    if (state.mode == Mode::casper) {
        const std::size_t pick = select(sys.selector.classify(history), sys.schedule, state.t);
        if (pick != kOpenDomain) responder = &sys.shifters.at(pick - 1);
    } else if (state.mode == Mode::casper_us) {
        const std::size_t pick = select(sys.unified_selector.classify(history), sys.unified_schedule, state.t);
        if (pick != kOpenDomain) responder = &sys.unified_shifter;
    }
    auto r = responder->respond(history);
    turn.text = std::move(r.reply);
    turn.model = responder->model_id();
    return turn;
}

Turn Orchestrator::step(SessionState& state, std::string_view user_utterance) const {
    if (state.status != Status::active) throw SessionClosed();
    if (trim(user_utterance).empty()) throw InvalidArgument("empty utterance");

    const std::size_t exchange = state.t + 1;
    Turn user;
    user.speaker = Speaker::user;
    user.text = std::string(user_utterance);
    user.timestep = exchange;

    std::vector<std::string> history = state.utterances();
    history.push_back(user.text);
    Turn reply = respond(state, history);
    reply.timestep = exchange;

    state.history.push_back(std::move(user));
    state.history.push_back(reply);
    state.t = exchange;
    if (reply.recommendation && !state.first_recommendation) state.first_recommendation = exchange;
    if (state.t >= kMaxTimesteps) state.status = Status::timeout;
    return reply;
}

void Orchestrator::accept(SessionState& state, const std::string& entity) const {
    if (state.status != Status::active) throw SessionClosed();
    const Turn* last = state.last_system_turn();
    if (!last || !last->recommendation) throw NoPendingRecommendation();
    if (normalize_phrase(last->entity) != normalize_phrase(entity)) {
        throw NoPendingRecommendation("pending recommendation is '" + last->entity + "', not '" + entity + "'");
    }
    state.status = Status::task_success;
    state.accepted_entity = last->entity;
}

Json to_json(const Turn& turn) {
    Json j = {{"speaker", to_string(turn.speaker)}, {"text", turn.text}, {"timestep", turn.timestep}};
    if (turn.speaker == Speaker::system) {
        j["model"] = turn.model;
        j["recommendation"] = turn.recommendation;
        if (!turn.entity.empty()) j["entity"] = turn.entity;
    }
    return j;
}

Json to_json(const SessionState& state) {
    Json turns = Json::array();
    for (const auto& t : state.history) turns.push_back(to_json(t));
    Json j = {{"session_id", state.session_id},
              {"mode", to_string(state.mode)},
              {"timestep", state.t},
              {"status", to_string(state.status)},
              {"turns", std::move(turns)}};
    if (state.status == Status::task_success) j["entity"] = state.accepted_entity;
    if (state.first_recommendation) j["first_recommendation"] = *state.first_recommendation;
    return j;
}

void export_transcript(std::ostream& out, const SessionState& state) {
    for (const auto& t : state.history) out << to_json(t).dump() << '\n';
}

} // namespace casper
