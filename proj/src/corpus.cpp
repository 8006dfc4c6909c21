#include "casper/corpus.h"

#include <algorithm>

#include "casper/error.h"

namespace casper {

std::string to_string(Speaker speaker) {
    switch (speaker) {
        case Speaker::user: return "user";
        case Speaker::system: return "system";
        case Speaker::unknown: break;
    }
    return "unknown";
}

Speaker speaker_from_string(const std::string& s) {
    if (s == "user") return Speaker::user;
    if (s == "system") return Speaker::system;
    return Speaker::unknown;
}

IngestResult ingest_lines(const std::vector<std::string>& lines) {
    IngestResult result;
    std::set<std::string> seen;
    std::size_t lineno = 0;
    for (const auto& line : lines) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto skip = [&](const std::string& why) {
            ++result.skipped;
            result.warnings.push_back("line " + std::to_string(lineno) + ": " + why);
        };
        Json rec;
        try {
            rec = Json::parse(line);
        } catch (const Json::exception&) {
            skip("invalid JSON");
            continue;
        }
        if (!rec.is_object() || !rec.contains("id") || !rec.contains("turns") || !rec["turns"].is_array()) {
            skip("missing id or turns");
            continue;
        }
        RawDialog dialog;
        dialog.id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
        bool ok = true;
        for (const auto& t : rec["turns"]) {
            if (!t.is_object() || !t.contains("text") || !t["text"].is_string()) {
                ok = false;
                break;
            }
            std::string text = t["text"].get<std::string>();
            if (trim(text).empty()) {
                ok = false;
                break;
            }
            const Speaker sp = t.contains("speaker") && t["speaker"].is_string()
                                   ? speaker_from_string(t["speaker"].get<std::string>())
                                   : Speaker::unknown;
            dialog.turns.push_back({sp, std::move(text)});
        }
        if (!ok || dialog.turns.empty()) {
            skip("empty dialog or blank turn");
            continue;
        }
        if (!seen.insert(dialog.id).second) {
            skip("duplicate id " + dialog.id);
            continue;
        }
        result.dialogs.push_back(std::move(dialog));
    }
    return result;
}

IngestResult ingest(const std::filesystem::path& path, InputFormat format) {
    switch (format) {
        case InputFormat::jsonl_dialogs: return ingest_lines(read_lines(path));
    }
    throw InvalidArgument("unknown input format");
}

void annotate(ContextReplyPair& pair, std::span<const DomainLexicon> lexicons) {
    pair.context_domains.clear();
    pair.reply_domains.clear();
    pair.reply_hits.clear();
    for (const auto& lex : lexicons) {
        for (const auto& utt : pair.context) {
            if (!lex.find(utt).empty()) {
                pair.context_domains.insert(lex.domain_id());
                break;
            }
        }
        std::size_t hits = 0;
        for (const auto& m : lex.find(pair.reply)) hits += m.length;
        if (hits > 0) {
            pair.reply_domains.insert(lex.domain_id());
            pair.reply_hits[lex.domain_id()] = hits;
        }
    }
}

std::vector<ContextReplyPair> pair(const RawDialog& dialog, std::size_t window,
                                   std::span<const DomainLexicon> lexicons) {
    if (window < 1) throw InvalidArgument("pair: window must be >= 1");
    std::vector<ContextReplyPair> out;
    for (std::size_t t = 1; t < dialog.turns.size(); ++t) {
        ContextReplyPair p;
        p.id = dialog.id + "#" + std::to_string(t);
        const std::size_t begin = t - std::min(t, window);
        for (std::size_t k = begin; k < t; ++k) p.context.push_back(dialog.turns[k].text);
        p.reply = dialog.turns[t].text;
        annotate(p, lexicons);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ContextReplyPair> pair_all(const std::vector<RawDialog>& dialogs, std::size_t window,
                                       std::span<const DomainLexicon> lexicons) {
    std::vector<ContextReplyPair> out;
    for (const auto& d : dialogs) {
        auto ps = pair(d, window, lexicons);
        out.insert(out.end(), std::make_move_iterator(ps.begin()), std::make_move_iterator(ps.end()));
    }
    return out;
}

std::size_t selector_label(const ContextReplyPair& pair, const std::vector<std::string>& domains) {
    std::size_t best = kOpenDomain;
    std::size_t best_hits = 0;
    for (std::size_t i = 0; i < domains.size(); ++i) {
        const auto it = pair.reply_hits.find(domains[i]);
        std::size_t hits = it == pair.reply_hits.end() ? 0 : it->second;
        // reply_domains without a hit count (e.g. read back from a manifest)
        if (hits == 0 && pair.reply_domains.count(domains[i])) hits = 1;
        if (hits > best_hits) {
            best_hits = hits;
            best = i + 1;
        }
    }
    return best;
}

DatasetBundle split(const std::vector<ContextReplyPair>& pairs, const std::vector<std::string>& domains) {
    if (domains.empty()) throw InvalidArgument("split: no domains");
    DatasetBundle bundle;
    bundle.domains = domains;
    bundle.stats.label_counts.assign(domains.size() + 1, 0);
    for (const auto& d : domains) {
        bundle.shifter_pairs[d];
        bundle.stats.shifter[d] = 0;
    }

    for (const auto& p : pairs) {
        std::vector<std::string> hit;
        for (const auto& d : domains) {
            if (p.reply_domains.count(d)) hit.push_back(d);
        }
        if (hit.empty()) {
            bundle.chatter_pairs.push_back(p);
            ++bundle.stats.chatter;
        } else if (hit.size() > 1) {
            ++bundle.stats.multi_domain;
        } else if (!p.context_domains.count(hit.front())) {
            bundle.shifter_pairs[hit.front()].push_back(p);
            ++bundle.stats.shifter[hit.front()];
        } else {
            ++bundle.stats.continuation;
        }
        const std::size_t label = selector_label(p, domains);
        bundle.selector_examples.push_back({p.id, p.context, label});
        ++bundle.stats.label_counts[label];
        ++bundle.stats.pairs;
    }
    return bundle;
}

bool is_heldout(const std::string& pair_id) {
    return fnv1a64(pair_id) % 10 == 0;
}

HoldoutSplit holdout(const std::vector<ContextReplyPair>& pairs) {
    HoldoutSplit out;
    for (const auto& p : pairs) {
        (is_heldout(p.id) ? out.heldout : out.train).push_back(p);
    }
    return out;
}

namespace {

Json pair_record(const ContextReplyPair& p, const std::string& domain) {
    return {{"id", p.id}, {"context", p.context}, {"reply", p.reply}, {"domain", domain}};
}

std::vector<ContextReplyPair> read_pairs(const std::filesystem::path& path) {
    std::vector<ContextReplyPair> out;
    for (const auto& line : read_lines(path)) {
        if (trim(line).empty()) continue;
        const Json rec = Json::parse(line);
        ContextReplyPair p;
        p.id = rec.value("id", std::string{});
        p.context = rec.at("context").get<std::vector<std::string>>();
        p.reply = rec.at("reply").get<std::string>();
        const auto domain = rec.value("domain", kOpenDomainId);
        if (domain != kOpenDomainId) p.reply_domains.insert(domain);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace

Json stats_to_json(const DatasetBundle& bundle) {
    Json labels = Json::object();
    for (std::size_t i = 0; i < bundle.stats.label_counts.size(); ++i) {
        labels[i == 0 ? kOpenDomainId : bundle.domains[i - 1]] = bundle.stats.label_counts[i];
    }
    return {{"domains", bundle.domains},
            {"pairs", bundle.stats.pairs},
            {"chatter", bundle.stats.chatter},
            {"shifter", bundle.stats.shifter},
            {"multi_domain", bundle.stats.multi_domain},
            {"continuation", bundle.stats.continuation},
            {"selector_labels", labels}};
}

void write_bundle(const std::filesystem::path& dir, const DatasetBundle& bundle) {
    std::filesystem::create_directories(dir);
    std::vector<Json> rows;
    for (const auto& p : bundle.chatter_pairs) rows.push_back(pair_record(p, kOpenDomainId));
    write_jsonl(dir / "chatter.jsonl", rows);
    for (const auto& [d, pairs] : bundle.shifter_pairs) {
        rows.clear();
        for (const auto& p : pairs) rows.push_back(pair_record(p, d));
        write_jsonl(dir / ("shifter_" + d + ".jsonl"), rows);
    }
    rows.clear();
    for (const auto& ex : bundle.selector_examples) {
        rows.push_back({{"id", ex.id},
                        {"history", ex.history},
                        {"label", ex.label},
                        {"domain", ex.label == 0 ? kOpenDomainId : bundle.domains[ex.label - 1]}});
    }
    write_jsonl(dir / "selector.jsonl", rows);
    write_json_file(dir / "stats.json", stats_to_json(bundle));
}

DatasetBundle read_bundle(const std::filesystem::path& dir) {
    try {
        const Json stats = read_json_file(dir / "stats.json");
        DatasetBundle bundle;
        bundle.domains = stats.at("domains").get<std::vector<std::string>>();
        bundle.chatter_pairs = read_pairs(dir / "chatter.jsonl");
        bundle.stats.chatter = bundle.chatter_pairs.size();
        for (const auto& d : bundle.domains) {
            bundle.shifter_pairs[d] = read_pairs(dir / ("shifter_" + d + ".jsonl"));
            bundle.stats.shifter[d] = bundle.shifter_pairs[d].size();
        }
        bundle.stats.label_counts.assign(bundle.domains.size() + 1, 0);
        for (const auto& line : read_lines(dir / "selector.jsonl")) {
            if (trim(line).empty()) continue;
            const Json rec = Json::parse(line);
            SelectorExample ex;
            ex.id = rec.value("id", std::string{});
            ex.history = rec.at("history").get<std::vector<std::string>>();
            ex.label = rec.at("label").get<std::size_t>();
            if (ex.label > bundle.domains.size()) throw InvalidArgument("selector label out of range");
            ++bundle.stats.label_counts[ex.label];
            bundle.selector_examples.push_back(std::move(ex));
        }
        bundle.stats.pairs = stats.value("pairs", bundle.selector_examples.size());
        bundle.stats.multi_domain = stats.value("multi_domain", std::size_t{0});
        bundle.stats.continuation = stats.value("continuation", std::size_t{0});
        return bundle;
    } catch (const Json::exception& e) {
        throw InvalidArgument(dir.string() + ": " + e.what());
    }
}

} // namespace casper
