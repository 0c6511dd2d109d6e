#pragma once

#include <memory>
#include <string>
#include <vector>

#include "grada/corpus.hpp"
#include "grada/propagation.hpp"
#include "grada/sim_graph.hpp"

namespace grada {

enum class RetrieverKind { EmbeddingDot, EmbeddingCosine, Bm25 };

std::string to_string(RetrieverKind kind);
RetrieverKind retriever_from_string(const std::string& name);

enum class DefenseKind { None, Grada };

std::string to_string(DefenseKind kind);
DefenseKind defense_from_string(const std::string& name);

struct RetrievalConfig {
    std::size_t first_stage_m = 10;
    std::size_t context_n = 5;
    RetrieverKind retriever = RetrieverKind::EmbeddingDot;
    WeightScheme scheme;
    PropagationConfig prop;
    DefenseKind defense = DefenseKind::Grada;

    void validate() const;
};

struct ContextSet {
    std::string query_id;
    std::vector<std::string> doc_ids;            // length n
    std::vector<std::size_t> first_stage_ranks;  // 0-based rank in first stage
    std::vector<double> scores;                  // final score per doc
};

struct QueryRunResult {
    ContextSet context;
    std::vector<std::string> full_ranking;  // all M candidates, reranked order
    bool m_below_2n_warning = false;
    bool init_fallback = false;
    bool failed = false;
    std::string error;
};

// Two-stage retrieval over an immutable corpus: top-M by query similarity,
// then optional graph reranking and top-n selection.
class Pipeline {
public:
    Pipeline(const Corpus& corpus, const EmbeddingTable& embeddings,
             const RetrievalConfig& config);

    std::vector<std::string> first_stage_retrieve(const Query& query, std::size_t m) const;

    QueryRunResult run_defense(const Query& query) const;

    // One result per query, in input order. Individual failures are recorded
    // and do not stop the batch. jobs > 1 shards queries across threads.
    std::vector<QueryRunResult> run_batch(const std::vector<Query>& queries,
                                          unsigned jobs = 1) const;

    const RetrievalConfig& config() const { return config_; }
    const CorpusView& view() const { return view_; }

private:
    double query_doc_score(const Query& query, const std::string& doc_id) const;

    CorpusView view_;
    const EmbeddingTable* embeddings_;
    RetrievalConfig config_;
    std::vector<std::string> all_ids_;
    std::unique_ptr<Bm25Index> bm25_;  // corpus-wide, bm25 retriever only
};

}  // namespace grada
