#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "casper/orchestrator.h"

namespace casper {

/// Scripted user. Each turn the user says something from the pool of the
/// domain the system's last reply touched (with probability follow_prob),
/// otherwise something from the "open" pool. A recommendation is accepted
/// with probability accept_prob.
struct PersonaScript {
    std::string id = "persona";
    std::map<std::string, std::vector<std::string>> pools;  // "open" plus domain ids
    double follow_prob = 0.0;
    double accept_prob = 0.0;

    /// Throws InvalidArgument unless the open pool exists, every pool is
    /// non-empty and both probabilities are in [0, 1].
    void validate() const;

    Json to_json() const;
    static PersonaScript from_json(const Json& doc);
    static PersonaScript load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

struct SessionRow {
    std::size_t session = 0;
    Mode mode = Mode::casper;
    std::optional<std::size_t> first_recommendation;
    bool success = false;
    std::size_t length = 0;  // exchanges
    std::string entity;      // accepted entity
};

/// first-recommendation statistics are over sessions that had one.
struct Aggregates {
    std::size_t sessions = 0;
    std::size_t with_recommendation = 0;
    std::optional<double> median_first_recommendation;
    std::optional<double> mean_first_recommendation;
    double elicitation_rate = 0.0;  // successes / sessions
    double mean_length = 0.0;
};

struct RunReport {
    Mode mode = Mode::casper;
    std::uint64_t seed = 0;
    std::string persona_id;
    std::vector<SessionRow> rows;
    Aggregates aggregates;
};

Aggregates aggregate(const std::vector<SessionRow>& rows);

/// Drives one full session. The RNG stream is derived from (seed, index).
SessionState run_session(const Orchestrator& orchestrator, Mode mode, const PersonaScript& persona,
                         std::uint64_t seed, std::size_t index);

/// Runs `sessions` independent sessions, in parallel when `threads` != 1
/// (0 = hardware concurrency). Rows come back in session order and the
/// report is identical for identical inputs.
RunReport simulate(const Orchestrator& orchestrator, Mode mode, const PersonaScript& persona, std::size_t sessions,
                   std::uint64_t seed, std::size_t threads = 0, std::vector<SessionState>* transcripts = nullptr);

/// Human-readable metrics table followed by one line per session.
std::string format_report(const RunReport& report);

/// CSV with header: session,mode,first_recommendation,success,length,entity.
void write_report_rows(const std::filesystem::path& path, const RunReport& report);
std::string report_rows_csv(const RunReport& report);
/// Reads rows written by write_report_rows and recomputes the aggregates.
RunReport read_report_rows(const std::filesystem::path& path);

} // namespace casper
