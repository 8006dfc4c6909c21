#include "casper/performer.h"

#include <algorithm>

#include "casper/error.h"

namespace casper {

namespace {

constexpr std::string_view kSlot = "{entity}";

std::set<std::string> keyword_phrases(const DomainLexicon& lexicon) {
    std::set<std::string> out;
    for (const auto& [_, ek] : lexicon.entities()) out.insert(ek.keywords.begin(), ek.keywords.end());
    return out;
}

// Highest-scoring entity; ties go to the lexicographically smaller name.
std::optional<std::pair<std::string, double>> best_entity(const std::map<std::string, double>& scores) {
    std::optional<std::pair<std::string, double>> best;
    for (const auto& [entity, score] : scores) {
        if (!best || score > best->second) best = {entity, score};
    }
    return best;
}

} // namespace

std::string to_string(Resolution r) {
    switch (r) {
        case Resolution::direct: return "direct";
        case Resolution::coreference: return "coreference";
        case Resolution::none: break;
    }
    return "none";
}

const std::set<std::string>& default_pronouns() {
    static const std::set<std::string> words = {"it",   "its",  "it's", "that",  "this",  "these", "those",
                                                "they", "them", "their", "he",   "him",   "his",   "she",
                                                "her"};
    return words;
}

PerformerRule::PerformerRule(const DomainLexicon& lexicon, std::vector<std::string> templates, double threshold,
                             std::set<std::string> pronouns)
    : domain_id_(lexicon.domain_id()),
      templates_(std::move(templates)),
      threshold_(threshold),
      pronouns_(std::move(pronouns)),
      matcher_(keyword_phrases(lexicon)) {
    if (templates_.empty()) throw InvalidArgument("performer " + domain_id_ + ": no templates");
    for (const auto& t : templates_) {
        if (t.find(kSlot) == std::string::npos) {
            throw InvalidArgument("performer " + domain_id_ + ": template without {entity}: " + t);
        }
    }
    if (!(threshold_ > 0.0)) throw InvalidArgument("performer " + domain_id_ + ": threshold must be > 0");
    for (const auto& [name, ek] : lexicon.entities()) {
        entities_.push_back(name);
        for (const auto& kw : ek.keywords) owners_[kw].emplace_back(name, ek.scores.at(kw));
    }
}

std::map<std::string, double> PerformerRule::entity_scores(std::string_view text,
                                                           std::set<std::string>* matched) const {
    std::map<std::string, double> scores;
    for (const auto& m : matcher_.find(text)) {
        const auto it = owners_.find(m.phrase);
        if (it == owners_.end()) continue;
        if (matched) matched->insert(m.phrase);
        for (const auto& [entity, score] : it->second) scores[entity] += score;
    }
    return scores;
}

bool PerformerRule::has_pronoun(std::string_view text) const {
    const Tokens toks = tokenize(text);
    return std::any_of(toks.begin(), toks.end(), [&](const auto& t) { return pronouns_.count(t) > 0; });
}

Json PerformerRule::to_json() const {
    return {{"domain_id", domain_id_}, {"threshold", threshold_}, {"templates", templates_}};
}

PerformerRule PerformerRule::from_json(const Json& doc, const DomainLexicon& lexicon, std::set<std::string> pronouns) {
    try {
        const auto domain = doc.at("domain_id").get<std::string>();
        if (domain != lexicon.domain_id()) {
            throw InvalidArgument("rules for " + domain + " paired with lexicon " + lexicon.domain_id());
        }
        return PerformerRule(lexicon, doc.at("templates").get<std::vector<std::string>>(),
                             doc.value("threshold", kDefaultTriggerThreshold), std::move(pronouns));
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("performer rules: ") + e.what());
    }
}

PerformerRule PerformerRule::load(const std::filesystem::path& path, const DomainLexicon& lexicon,
                                  std::set<std::string> pronouns) {
    return from_json(read_json_file(path), lexicon, std::move(pronouns));
}

void PerformerRule::save(const std::filesystem::path& path) const {
    write_json_file(path, to_json());
}

PerformerDecision probe(const PerformerRule& rule, std::span<const std::string> history) {
    PerformerDecision decision;
    if (history.empty()) return decision;

    const std::string& latest = history.back();
    std::set<std::string> matched;
    if (const auto best = best_entity(rule.entity_scores(latest, &matched));
        best && best->second >= rule.threshold()) {
        decision.can_respond = true;
        decision.entity = best->first;
        decision.matched = std::move(matched);
        decision.resolved_via = Resolution::direct;
        decision.score = best->second;
        return decision;
    }

    if (!rule.has_pronoun(latest)) return decision;
    for (std::size_t i = history.size() - 1; i-- > 0;) {
        std::set<std::string> antecedent;
        const auto best = best_entity(rule.entity_scores(history[i], &antecedent));
        if (!best) continue;
        decision.can_respond = true;
        decision.entity = best->first;
        decision.matched = std::move(antecedent);
        decision.resolved_via = Resolution::coreference;
        decision.score = best->second;
        return decision;
    }
    return decision;
}

Recommendation perform(const PerformerRule& rule, const PerformerDecision& decision, std::size_t rotation) {
    if (!decision.can_respond || !decision.entity) {
        throw InvalidArgument("perform: performer " + rule.domain_id() + " cannot respond");
    }
    std::string text = rule.templates()[rotation % rule.templates().size()];
    for (auto pos = text.find(kSlot); pos != std::string::npos; pos = text.find(kSlot, pos)) {
        text.replace(pos, kSlot.size(), *decision.entity);
        pos += decision.entity->size();
    }
    return {std::move(text), *decision.entity, true};
}

} // namespace casper
