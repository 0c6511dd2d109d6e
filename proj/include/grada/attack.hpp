#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "grada/corpus.hpp"
#include "grada/pipeline.hpp"

namespace grada {

enum class AttackKind { PoisonedRag, PoisonedRagNoPrefix, Pia, External };

std::string to_string(AttackKind kind);
AttackKind attack_from_string(const std::string& name);

enum class Placement { Natural, ForcedMiddle };

struct AttackSpec {
    AttackKind kind = AttackKind::PoisonedRag;
    // Payload template; "{answer}" expands to the query's poison_answer and
    // "{query}" to the query text. Several templates may be supplied, in
    // which case a seeded RNG picks one per forged document.
    std::vector<std::string> payload_templates;
    int per_query_count = 1;
    Placement placement = Placement::Natural;
};

// query_id -> injected doc_ids
using AttackManifest = std::map<std::string, std::vector<std::string>>;

std::string render_payload(const std::string& payload_template, const Query& query);

Document forge_poisoned_doc(const Query& query, const AttackSpec& spec, int k,
                            std::mt19937& rng);

std::pair<Corpus, AttackManifest> inject_attack(const Corpus& corpus,
                                                const std::vector<Query>& queries,
                                                const AttackSpec& spec, unsigned seed);

struct PlacementResult {
    ContextSet context;
    bool moved = false;  // false when the context held no manifest doc
};

// Moves the first poisoned doc in the context to the given index, keeping the
// relative order of the rest.
PlacementResult force_context_position(const ContextSet& context,
                                       const AttackManifest& manifest,
                                       std::size_t position);

void save_manifest(const AttackManifest& manifest, const std::string& path);
AttackManifest load_manifest(const std::string& path);

}  // namespace grada
