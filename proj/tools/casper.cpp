// casper: command-line front end for the dialog pipeline.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>

#include "casper/config.h"
#include "casper/corpus.h"
#include "casper/error.h"
#include "casper/harness.h"
#include "casper/lexicon.h"
#include "casper/ngram.h"
#include "casper/orchestrator.h"
#include "casper/performer.h"
#include "casper/selector.h"
#include "casper/service.h"
#include "casper/synth.h"
#include "casper/system.h"

namespace fs = std::filesystem;
using namespace casper;

namespace {

Config load_config(const std::string& path) {
    return path.empty() ? Config{} : Config::load(path);
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<PerformerRule> load_rules(const fs::path& dir, const std::vector<DomainLexicon>& lexicons,
                                      const Config& config) {
    std::vector<PerformerRule> rules;
    for (const auto& lex : lexicons) {
        const fs::path file = dir / (lex.domain_id() + ".json");
        if (!dir.empty() && fs::exists(file)) {
            rules.push_back(PerformerRule::load(file, lex, config.effective_pronouns()));
        } else {
            std::cerr << "note: no rules for " << lex.domain_id() << ", using default templates\n";
            rules.emplace_back(lex, config.default_templates, config.trigger_threshold, config.effective_pronouns());
        }
    }
    return rules;
}

std::shared_ptr<const TrainedSystem> load_shared(const std::string& dir) {
    return std::make_shared<const TrainedSystem>(load_system(dir));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"casper dialog orchestration toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "config file (JSON)");

    // synth
    auto* synth = app.add_subcommand("synth", "write a synthetic three-domain world");
    std::string synth_out;
    SynthOptions synth_opts;
    synth->add_option("--out", synth_out)->required();
    synth->add_option("--seed", synth_opts.seed);
    synth->add_option("--dialogs", synth_opts.dialogs);
    synth->add_option("--shift-prob", synth_opts.shift_prob);
    synth->add_option("--max-exchanges", synth_opts.max_exchanges);
    synth->add_option("--bridge-prob", synth_opts.bridge_prob);

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "validate a dialog file and report counts");
    std::string ingest_in;
    ingest_cmd->add_option("--input", ingest_in)->required();

    // build-lexicon
    auto* lexicon_cmd = app.add_subcommand("build-lexicon", "mine a domain lexicon from entity documents");
    std::string lex_docs, lex_domain, lex_out;
    lexicon_cmd->add_option("--docs", lex_docs)->required();
    lexicon_cmd->add_option("--domain", lex_domain)->required();
    lexicon_cmd->add_option("--out", lex_out)->required();

    // split
    auto* split_cmd = app.add_subcommand("split", "pair dialogs and write chatter/shifter/selector splits");
    std::string split_in, split_lex, split_out;
    split_cmd->add_option("--dialogs", split_in)->required();
    split_cmd->add_option("--lexicons", split_lex)->required();
    split_cmd->add_option("--out", split_out)->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train every model from a split directory");
    std::string train_data, train_lex, train_rules, train_out;
    train_cmd->add_option("--data", train_data)->required();
    train_cmd->add_option("--lexicons", train_lex)->required();
    train_cmd->add_option("--rules", train_rules);
    train_cmd->add_option("--out", train_out)->required();

    // train-selector
    auto* sel_cmd = app.add_subcommand("train-selector", "train the domain classifier and report held-out accuracy");
    std::string sel_data, sel_out;
    sel_cmd->add_option("--data", sel_data)->required();
    sel_cmd->add_option("--out", sel_out);

    // eval-ppl
    auto* ppl_cmd = app.add_subcommand("eval-ppl", "held-out n-gram perplexity of each split");
    std::string ppl_data;
    ppl_cmd->add_option("--data", ppl_data)->required();

    // chat
    auto* chat_cmd = app.add_subcommand("chat", "interactive terminal session");
    std::string chat_sys, chat_mode = "casper";
    chat_cmd->add_option("--system", chat_sys)->required();
    chat_cmd->add_option("--mode", chat_mode);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "run scripted persona sessions");
    std::string sim_sys, sim_mode = "casper", sim_persona, sim_out;
    std::size_t sim_sessions = 200, sim_threads = 0;
    std::uint64_t sim_seed = 1;
    sim_cmd->add_option("--system", sim_sys)->required();
    sim_cmd->add_option("--mode", sim_mode);
    sim_cmd->add_option("--sessions", sim_sessions);
    sim_cmd->add_option("--seed", sim_seed);
    sim_cmd->add_option("--persona", sim_persona)->required();
    sim_cmd->add_option("--out", sim_out, "CSV rows");
    sim_cmd->add_option("--threads", sim_threads);

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "HTTP chat service (port from CASPER_PORT or config)");
    std::string serve_sys, serve_host = "0.0.0.0";
    int serve_port = 0;
    serve_cmd->add_option("--system", serve_sys)->required();
    serve_cmd->add_option("--host", serve_host);
    serve_cmd->add_option("--port", serve_port);

    // report
    auto* report_cmd = app.add_subcommand("report", "format a rows file written by simulate");
    std::string report_in;
    report_cmd->add_option("rows", report_in)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        Config config = load_config(config_path);

        if (*synth) {
            const SynthWorld world = make_world(synth_opts);
            write_world(synth_out, world, config);
            std::cout << "wrote " << world.dialogs.size() << " dialogs to " << synth_out << '\n';
        } else if (*ingest_cmd) {
            const auto r = ingest(ingest_in);
            print_warnings(r.warnings);
            std::size_t turns = 0;
            for (const auto& d : r.dialogs) turns += d.turns.size();
            std::cout << "dialogs: " << r.dialogs.size() << "\nturns: " << turns << "\nskipped: " << r.skipped
                      << '\n';
        } else if (*lexicon_cmd) {
            MineOptions opts;
            opts.min_freq = config.min_freq;
            opts.min_distinct = config.min_distinct;
            opts.stopwords = config.effective_stopwords();
            const auto r = mine(lex_domain, load_entity_docs(lex_docs), opts);
            print_warnings(r.warnings);
            r.lexicon.save(lex_out);
            std::cout << lex_domain << ": " << r.lexicon.entities().size() << " entities, "
                      << r.lexicon.words().size() << " words\n";
        } else if (*split_cmd) {
            const auto r = ingest(split_in);
            print_warnings(r.warnings);
            const auto lexicons = order_lexicons(load_lexicon_dir(split_lex), config.domains);
            std::vector<std::string> domains;
            for (const auto& l : lexicons) domains.push_back(l.domain_id());
            const auto bundle = split(pair_all(r.dialogs, config.window, lexicons), domains);
            write_bundle(split_out, bundle);
            std::cout << stats_to_json(bundle).dump(2) << '\n';
        } else if (*train_cmd) {
            const auto bundle = read_bundle(train_data);
            const auto lexicons = order_lexicons(load_lexicon_dir(train_lex), bundle.domains);
            const auto rules = load_rules(train_rules, lexicons, config);
            const auto sys = train_system(bundle, lexicons, rules, config);
            save_system(train_out, sys);
            std::cout << "chatter: " << sys.chatter.size() << " entries\n";
            for (std::size_t i = 0; i < sys.domains.size(); ++i) {
                std::cout << "shifter:" << sys.domains[i] << ": " << sys.shifters[i].size() << " entries\n";
            }
            std::cout << "baseline: " << sys.baseline.size() << " entries\n";
        } else if (*sel_cmd) {
            const auto bundle = read_bundle(sel_data);
            std::vector<SelectorExample> train, held;
            for (const auto& ex : bundle.selector_examples) (is_heldout(ex.id) ? held : train).push_back(ex);
            std::vector<std::string> warnings;
            const auto clf = DomainClassifier::train(train, bundle.domains.size() + 1, config.classifier_smoothing,
                                                     config.window, &warnings);
            print_warnings(warnings);
            std::size_t correct = 0;
            for (const auto& ex : held) {
                const auto conf = clf.classify(ex.history);
                const auto best = std::max_element(conf.probs.begin(), conf.probs.end()) - conf.probs.begin();
                if (static_cast<std::size_t>(best) == ex.label) ++correct;
            }
            std::cout << "train: " << train.size() << "  held-out: " << held.size();
            if (!held.empty()) std::cout << "  accuracy: " << static_cast<double>(correct) / held.size();
            std::cout << '\n';
            if (!sel_out.empty()) clf.save(sel_out);
        } else if (*ppl_cmd) {
            const auto bundle = read_bundle(ppl_data);
            std::vector<std::pair<std::string, std::vector<ContextReplyPair>>> splits{{"chatter", bundle.chatter_pairs}};
            for (const auto& [d, pairs] : bundle.shifter_pairs) splits.emplace_back("shifter:" + d, pairs);
            for (const auto& [name, pairs] : splits) {
                const auto h = holdout(pairs);
                if (h.train.empty() || h.heldout.empty()) {
                    std::cout << name << ": too few pairs\n";
                    continue;
                }
                const auto lm = train_lm(h.train, config.ngram_order, config.ngram_k, config.ngram_unk_slot);
                std::cout << name << ": ppl " << perplexity(lm, h.heldout) << " (" << h.heldout.size()
                          << " held-out)\n";
            }
        } else if (*chat_cmd) {
            const Orchestrator orch(load_shared(chat_sys));
            auto state = orch.start("repl", mode_from_string(chat_mode));
            std::cout << "mode " << chat_mode << "; type /accept to take a recommendation, /quit to leave\n";
            std::string line;
            while (state.status == Status::active && std::cout << "> " && std::getline(std::cin, line)) {
                if (line == "/quit") break;
                if (line == "/accept") {
                    const Turn* last = state.last_system_turn();
                    try {
                        orch.accept(state, last ? last->entity : "");
                        std::cout << "task success: " << state.accepted_entity << '\n';
                    } catch (const NoPendingRecommendation& e) {
                        std::cout << e.what() << '\n';
                    }
                    continue;
                }
                if (trim(line).empty()) continue;
                const Turn t = orch.step(state, line);
                std::cout << '[' << t.model << "] " << t.text << '\n';
            }
            std::cout << "status: " << to_string(state.status) << " after " << state.t << " exchanges\n";
        } else if (*sim_cmd) {
            const Orchestrator orch(load_shared(sim_sys));
            const auto persona = PersonaScript::load(sim_persona);
            const auto started = std::chrono::steady_clock::now();
            const auto report = simulate(orch, mode_from_string(sim_mode), persona, sim_sessions, sim_seed, sim_threads);
            std::cout << format_report(report);
            const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
            std::cerr << "simulated " << sim_sessions << " sessions in " << took.count() << " s\n";
            if (!sim_out.empty()) write_report_rows(sim_out, report);
        } else if (*serve_cmd) {
            SessionManager manager(load_shared(serve_sys),
                                   std::chrono::seconds(static_cast<long>(config.session_ttl_seconds)));
            const int port = serve_port > 0 ? serve_port : port_from_env(config.port);
            std::cerr << "listening on " << serve_host << ':' << port << '\n';
            serve(manager, serve_host, port);
        } else if (*report_cmd) {
            std::cout << format_report(read_report_rows(report_in));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
