#include "casper/system.h"

#include <algorithm>
#include <map>

#include "casper/error.h"

namespace casper {

std::size_t TrainedSystem::domain_index(const std::string& domain) const {
    const auto it = std::find(domains.begin(), domains.end(), domain);
    if (it == domains.end()) throw InvalidArgument("unknown domain " + domain);
    return static_cast<std::size_t>(it - domains.begin());
}

std::vector<DomainLexicon> order_lexicons(std::vector<DomainLexicon> lexicons,
                                          const std::vector<std::string>& order) {
    if (order.empty()) {
        std::sort(lexicons.begin(), lexicons.end(),
                  [](const auto& a, const auto& b) { return a.domain_id() < b.domain_id(); });
        return lexicons;
    }
    std::vector<DomainLexicon> out;
    for (const auto& d : order) {
        const auto it = std::find_if(lexicons.begin(), lexicons.end(),
                                     [&](const auto& l) { return l.domain_id() == d; });
        if (it == lexicons.end()) throw InvalidArgument("no lexicon for domain " + d);
        out.push_back(*it);
    }
    return out;
}

std::vector<IndexEntry> recommendation_entries(const DatasetBundle& bundle,
                                               const std::vector<PerformerRule>& performers) {
    std::vector<IndexEntry> out;
    for (const auto& ex : bundle.selector_examples) {
        for (const auto& rule : performers) {
            const auto decision = probe(rule, ex.history);
            if (!decision.can_respond) continue;
            auto rec = perform(rule, decision);
            out.push_back({ex.id + "+rec", ex.history, std::move(rec.text), std::move(rec.entity)});
            break;
        }
    }
    return out;
}

ResponderIndex build_baseline(const DatasetBundle& bundle, const std::vector<PerformerRule>& performers,
                              std::size_t window) {
    std::map<std::string, const ContextReplyPair*> by_id;
    for (const auto& p : bundle.chatter_pairs) by_id.emplace(p.id, &p);
    for (const auto& [_, pairs] : bundle.shifter_pairs) {
        for (const auto& p : pairs) by_id.emplace(p.id, &p);
    }
    std::map<std::string, IndexEntry> recs;
    for (auto& e : recommendation_entries(bundle, performers)) {
        std::string id = e.pair_id.substr(0, e.pair_id.size() - 4);
        recs.emplace(std::move(id), std::move(e));
    }

    std::vector<IndexEntry> entries;
    for (const auto& ex : bundle.selector_examples) {
        // the recommendation goes first so it wins ties against the corpus reply to the same history
        if (const auto it = recs.find(ex.id); it != recs.end()) entries.push_back(it->second);
        if (const auto it = by_id.find(ex.id); it != by_id.end()) {
            entries.push_back({it->second->id, it->second->context, it->second->reply, {}});
            by_id.erase(it);
        }
    }
    // pairs with no selector example (bundles assembled by hand) go last
    for (const auto& p : bundle.chatter_pairs) {
        if (by_id.count(p.id)) entries.push_back({p.id, p.context, p.reply, {}});
    }
    for (const auto& [_, pairs] : bundle.shifter_pairs) {
        for (const auto& p : pairs) {
            if (by_id.count(p.id)) entries.push_back({p.id, p.context, p.reply, {}});
        }
    }
    return ResponderIndex::build(std::move(entries), "baseline", window);
}

ResponderIndex build_unified_shifter(const DatasetBundle& bundle, std::size_t window) {
    std::vector<ContextReplyPair> all;
    for (const auto& d : bundle.domains) {
        const auto it = bundle.shifter_pairs.find(d);
        if (it != bundle.shifter_pairs.end()) all.insert(all.end(), it->second.begin(), it->second.end());
    }
    return ResponderIndex::build(all, "shifter:unified", window);
}

std::vector<SelectorExample> unified_examples(const std::vector<SelectorExample>& examples) {
    std::vector<SelectorExample> out = examples;
    for (auto& ex : out) ex.label = ex.label == kOpenDomain ? 0 : 1;
    return out;
}

TrainedSystem train_system(const DatasetBundle& bundle, const std::vector<DomainLexicon>& lexicons,
                           const std::vector<PerformerRule>& performers, const Config& config) {
    TrainedSystem sys;
    sys.config = config;
    sys.domains = bundle.domains;
    sys.lexicons = order_lexicons(lexicons, bundle.domains);
    for (const auto& d : bundle.domains) {
        const auto it = std::find_if(performers.begin(), performers.end(),
                                     [&](const auto& r) { return r.domain_id() == d; });
        if (it == performers.end()) throw InvalidArgument("no performer rules for domain " + d);
        sys.performers.push_back(*it);
    }

    sys.chatter = ResponderIndex::build(bundle.chatter_pairs, "chatter", config.window);
    for (const auto& d : bundle.domains) {
        const auto it = bundle.shifter_pairs.find(d);
        if (it == bundle.shifter_pairs.end() || it->second.empty()) {
            throw Untrained("untrained responder: no shifter pairs for domain " + d);
        }
        sys.shifters.push_back(ResponderIndex::build(it->second, "shifter:" + d, config.window));
    }
    sys.unified_shifter = build_unified_shifter(bundle, config.window);
    sys.baseline = build_baseline(bundle, sys.performers, config.window);
    sys.selector = DomainClassifier::train(bundle.selector_examples, bundle.domains.size() + 1,
                                           config.classifier_smoothing, config.window);
    sys.unified_selector =
        DomainClassifier::train(unified_examples(bundle.selector_examples), 2, config.classifier_smoothing,
                                config.window);
    sys.schedule = config.schedule(sys.domains);
    sys.unified_schedule = config.unified_schedule();
    return sys;
}

void save_system(const std::filesystem::path& dir, const TrainedSystem& system) {
    Config cfg = system.config;
    cfg.domains = system.domains;
    cfg.save(dir / "config.json");
    for (std::size_t i = 0; i < system.domains.size(); ++i) {
        const auto& d = system.domains[i];
        system.lexicons[i].save(dir / "lexicons" / (d + ".json"));
        system.performers[i].save(dir / "rules" / (d + ".json"));
        system.shifters[i].save(dir / "indices" / ("shifter_" + d + ".json"));
    }
    system.chatter.save(dir / "indices" / "chatter.json");
    system.unified_shifter.save(dir / "indices" / "shifter_unified.json");
    system.baseline.save(dir / "indices" / "baseline.json");
    system.selector.save(dir / "selector.json");
    system.unified_selector.save(dir / "selector_unified.json");
}

TrainedSystem load_system(const std::filesystem::path& dir) {
    TrainedSystem sys;
    sys.config = Config::load(dir / "config.json");
    sys.domains = sys.config.domains;
    if (sys.domains.empty()) throw InvalidArgument(dir.string() + ": config lists no domains");
    for (const auto& d : sys.domains) {
        sys.lexicons.push_back(DomainLexicon::load(dir / "lexicons" / (d + ".json")));
        sys.performers.push_back(PerformerRule::load(dir / "rules" / (d + ".json"), sys.lexicons.back(),
                                                     sys.config.effective_pronouns()));
        sys.shifters.push_back(ResponderIndex::load(dir / "indices" / ("shifter_" + d + ".json")));
    }
    sys.chatter = ResponderIndex::load(dir / "indices" / "chatter.json");
    sys.unified_shifter = ResponderIndex::load(dir / "indices" / "shifter_unified.json");
    sys.baseline = ResponderIndex::load(dir / "indices" / "baseline.json");
    sys.selector = DomainClassifier::load(dir / "selector.json");
    sys.unified_selector = DomainClassifier::load(dir / "selector_unified.json");
    sys.schedule = sys.config.schedule(sys.domains);
    sys.unified_schedule = sys.config.unified_schedule();
    return sys;
}

} // namespace casper
