#include "casper/harness.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "casper/error.h"

namespace casper {

void PersonaScript::validate() const {
    if (!pools.count(kOpenDomainId)) throw InvalidArgument("persona " + id + ": no open pool");
    for (const auto& [name, pool] : pools) {
        if (pool.empty()) throw InvalidArgument("persona " + id + ": empty pool " + name);
    }
    if (!(follow_prob >= 0.0 && follow_prob <= 1.0)) throw InvalidArgument("persona: follow_prob out of [0, 1]");
    if (!(accept_prob >= 0.0 && accept_prob <= 1.0)) throw InvalidArgument("persona: accept_prob out of [0, 1]");
}

Json PersonaScript::to_json() const {
    return {{"id", id}, {"pools", pools}, {"follow_prob", follow_prob}, {"accept_prob", accept_prob}};
}

PersonaScript PersonaScript::from_json(const Json& doc) {
    PersonaScript p;
    try {
        p.id = doc.value("id", p.id);
        p.pools = doc.at("pools").get<std::map<std::string, std::vector<std::string>>>();
        p.follow_prob = doc.value("follow_prob", 0.0);
        p.accept_prob = doc.value("accept_prob", 0.0);
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("persona: ") + e.what());
    }
    p.validate();
    return p;
}

PersonaScript PersonaScript::load(const std::filesystem::path& path) {
    return from_json(read_json_file(path));
}

void PersonaScript::save(const std::filesystem::path& path) const {
    write_json_file(path, to_json());
}

Aggregates aggregate(const std::vector<SessionRow>& rows) {
    Aggregates a;
    a.sessions = rows.size();
    std::vector<double> firsts;
    std::size_t successes = 0;
    double length = 0.0;
    for (const auto& r : rows) {
        if (r.first_recommendation) firsts.push_back(static_cast<double>(*r.first_recommendation));
        if (r.success) ++successes;
        length += static_cast<double>(r.length);
    }
    a.with_recommendation = firsts.size();
    if (!firsts.empty()) {
        std::sort(firsts.begin(), firsts.end());
        const std::size_t n = firsts.size();
        a.median_first_recommendation = n % 2 ? firsts[n / 2] : (firsts[n / 2 - 1] + firsts[n / 2]) / 2.0;
        double sum = 0.0;
        for (double f : firsts) sum += f;
        a.mean_first_recommendation = sum / static_cast<double>(n);
    }
    if (!rows.empty()) {
        a.elicitation_rate = static_cast<double>(successes) / static_cast<double>(rows.size());
        a.mean_length = length / static_cast<double>(rows.size());
    }
    return a;
}

SessionState run_session(const Orchestrator& orchestrator, Mode mode, const PersonaScript& persona,
                         std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const auto pick = [&](const std::vector<std::string>& pool) -> const std::string& {
        return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    };

    const TrainedSystem& sys = orchestrator.system();
    SessionState state = orchestrator.start("sim-" + std::to_string(index), mode);
    std::optional<std::string> last_domain;
    while (state.status == Status::active) {
        const std::vector<std::string>* pool = &persona.pools.at(kOpenDomainId);
        const bool follow = coin(rng) < persona.follow_prob;
        if (last_domain && follow) {
            if (const auto it = persona.pools.find(*last_domain); it != persona.pools.end()) pool = &it->second;
        }
        const Turn reply = orchestrator.step(state, pick(*pool));
        const bool accept = coin(rng) < persona.accept_prob;
        if (reply.recommendation && state.status == Status::active && accept) {
            orchestrator.accept(state, reply.entity);
        }
        last_domain.reset();
        for (std::size_t i = 0; i < sys.lexicons.size(); ++i) {
            if (!sys.lexicons[i].find(reply.text).empty()) {
                last_domain = sys.domains[i];
                break;
            }
        }
    }
    return state;
}

RunReport simulate(const Orchestrator& orchestrator, Mode mode, const PersonaScript& persona, std::size_t sessions,
                   std::uint64_t seed, std::size_t threads, std::vector<SessionState>* transcripts) {
    if (sessions < 1) throw InvalidArgument("simulate: need at least one session");
    persona.validate();
    const TrainedSystem& sys = orchestrator.system();
    if (!sys.chatter.trained() || !sys.baseline.trained()) throw Untrained("simulate: system not trained");

    std::vector<SessionState> states(sessions);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < sessions; i = next++) {
            states[i] = run_session(orchestrator, mode, persona, seed, i);
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, sessions);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    RunReport report;
    report.mode = mode;
    report.seed = seed;
    report.persona_id = persona.id;
    for (std::size_t i = 0; i < sessions; ++i) {
        const auto& s = states[i];
        report.rows.push_back({i, mode, s.first_recommendation, s.status == Status::task_success, s.t,
                               s.accepted_entity});
    }
    report.aggregates = aggregate(report.rows);
    if (transcripts) *transcripts = std::move(states);
    return report;
}

namespace {

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << *v;
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

constexpr const char* kCsvHeader = "session,mode,first_recommendation,success,length,entity";

} // namespace

std::string format_report(const RunReport& report) {
    const Aggregates& a = report.aggregates;
    std::ostringstream os;
    os << "mode: " << to_string(report.mode);
    // rows files carry neither seed nor persona
    if (!report.persona_id.empty()) os << "  seed: " << report.seed << "  persona: " << report.persona_id;
    os << '\n';
    os << std::left << std::setw(28) << "sessions" << a.sessions << '\n';
    os << std::setw(28) << "with recommendation" << a.with_recommendation << '\n';
    os << std::setw(28) << "median first rec (step)" << fmt_opt(a.median_first_recommendation) << '\n';
    os << std::setw(28) << "mean first rec (step)" << fmt_opt(a.mean_first_recommendation) << '\n';
    os << std::setw(28) << "task-elicitation rate" << std::fixed << std::setprecision(3) << a.elicitation_rate
       << '\n';
    os << std::setw(28) << "mean length (steps)" << std::setprecision(2) << a.mean_length << '\n';
    os << '\n' << std::setw(8) << "session" << std::setw(12) << "first_rec" << std::setw(9) << "success"
       << std::setw(8) << "length" << "entity\n";
    for (const auto& r : report.rows) {
        os << std::setw(8) << r.session << std::setw(12)
           << (r.first_recommendation ? std::to_string(*r.first_recommendation) : "-") << std::setw(9)
           << (r.success ? "yes" : "no") << std::setw(8) << r.length << r.entity << '\n';
    }
    return os.str();
}

std::string report_rows_csv(const RunReport& report) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        os << r.session << ',' << to_string(r.mode) << ','
           << (r.first_recommendation ? std::to_string(*r.first_recommendation) : "") << ','
           << (r.success ? 1 : 0) << ',' << r.length << ',' << csv_field(r.entity) << '\n';
    }
    return os.str();
}

void write_report_rows(const std::filesystem::path& path, const RunReport& report) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << report_rows_csv(report);
}

RunReport read_report_rows(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines.front() != kCsvHeader) throw InvalidArgument(path.string() + ": not a report file");
    RunReport report;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = parse_csv_line(lines[i]);
        if (f.size() != 6) throw InvalidArgument(path.string() + ": bad row " + std::to_string(i + 1));
        try {
            SessionRow r;
            r.session = std::stoul(f[0]);
            r.mode = mode_from_string(f[1]);
            if (!f[2].empty()) r.first_recommendation = std::stoul(f[2]);
            r.success = f[3] == "1";
            r.length = std::stoul(f[4]);
            r.entity = f[5];
            report.rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw InvalidArgument(path.string() + ": bad row " + std::to_string(i + 1));
        }
    }
    if (!report.rows.empty()) report.mode = report.rows.front().mode;
    report.aggregates = aggregate(report.rows);
    return report;
}

} // namespace casper
