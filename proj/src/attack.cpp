#include "grada/attack.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "grada/errors.hpp"

namespace grada {

using nlohmann::json;

std::string to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::PoisonedRag: return "poisonedrag";
        case AttackKind::PoisonedRagNoPrefix: return "poisonedrag_noprefix";
        case AttackKind::Pia: return "pia";
        case AttackKind::External: return "external";
    }
    return "poisonedrag";
}

AttackKind attack_from_string(const std::string& name) {
    if (name == "poisonedrag") return AttackKind::PoisonedRag;
    if (name == "poisonedrag_noprefix") return AttackKind::PoisonedRagNoPrefix;
    if (name == "pia") return AttackKind::Pia;
    if (name == "external") return AttackKind::External;
    throw ArgumentError("unknown attack kind: " + name);
}

namespace {

Origin origin_for(AttackKind kind) {
    switch (kind) {
        case AttackKind::PoisonedRag: return Origin::PoisonedRag;
        case AttackKind::PoisonedRagNoPrefix: return Origin::PoisonedRagNoPrefix;
        case AttackKind::Pia: return Origin::Pia;
        case AttackKind::External: return Origin::External;
    }
    return Origin::External;
}

void replace_all(std::string& text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

}  // namespace

std::string render_payload(const std::string& payload_template, const Query& query) {
    std::string text = payload_template;
    replace_all(text, "{query}", query.text);
    replace_all(text, "{answer}", query.poison_answer.value_or(""));
    return text;
}

Document forge_poisoned_doc(const Query& query, const AttackSpec& spec, int k,
                            std::mt19937& rng) {
    if (spec.payload_templates.empty()) {
        throw ArgumentError("forge_poisoned_doc: no payload template");
    }
    std::size_t choice = 0;
    if (spec.payload_templates.size() > 1) {
        choice = std::uniform_int_distribution<std::size_t>(
            0, spec.payload_templates.size() - 1)(rng);
    }
    std::string payload = render_payload(spec.payload_templates[choice], query);
    if (payload.empty()) throw ArgumentError("forge_poisoned_doc: empty payload");

    Document doc;
    doc.doc_id = "poison::" + query.query_id + "::" + std::to_string(k);
    doc.is_poisoned = true;
    doc.origin = origin_for(spec.kind);
    if (spec.kind == AttackKind::PoisonedRag) {
        doc.text = query.text + ". " + payload;
    } else {
        doc.text = payload;
    }
    return doc;
}

std::pair<Corpus, AttackManifest> inject_attack(const Corpus& corpus,
                                                const std::vector<Query>& queries,
                                                const AttackSpec& spec, unsigned seed) {
    if (spec.per_query_count < 1) throw ArgumentError("inject_attack: per_query_count < 1");
    std::mt19937 rng(seed);
    std::vector<Document> forged;
    AttackManifest manifest;
    for (const auto& query : queries) {
        auto& ids = manifest[query.query_id];
        for (int k = 0; k < spec.per_query_count; ++k) {
            Document doc = forge_poisoned_doc(query, spec, k, rng);
            ids.push_back(doc.doc_id);
            forged.push_back(std::move(doc));
        }
    }
    return {inject_documents(corpus, forged), std::move(manifest)};
}

PlacementResult force_context_position(const ContextSet& context,
                                       const AttackManifest& manifest,
                                       std::size_t position) {
    if (position >= context.doc_ids.size()) {
        throw ArgumentError("force_context_position: position out of range");
    }
    auto it = manifest.find(context.query_id);
    std::size_t from = context.doc_ids.size();
    if (it != manifest.end()) {
        for (std::size_t i = 0; i < context.doc_ids.size(); ++i) {
            const auto& ids = it->second;
            if (std::find(ids.begin(), ids.end(), context.doc_ids[i]) != ids.end()) {
                from = i;
                break;
            }
        }
    }
    PlacementResult result;
    result.context = context;
    if (from == context.doc_ids.size()) return result;  // no poisoned doc, flagged no-op

    auto splice = [&](auto& vec) {
        auto value = vec[from];
        vec.erase(vec.begin() + static_cast<long>(from));
        vec.insert(vec.begin() + static_cast<long>(position), value);
    };
    splice(result.context.doc_ids);
    splice(result.context.first_stage_ranks);
    splice(result.context.scores);
    result.moved = true;
    return result;
}

void save_manifest(const AttackManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    json obj = json::object();
    for (const auto& [qid, ids] : manifest) obj[qid] = ids;
    out << obj.dump(2) << "\n";
}

AttackManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json obj = json::parse(in, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw ParseError(path + ": malformed manifest JSON");
    }
    AttackManifest manifest;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        manifest[it.key()] = it.value().get<std::vector<std::string>>();
    }
    return manifest;
}

}  // namespace grada
