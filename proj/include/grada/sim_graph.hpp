#pragma once

#include <string>
#include <vector>

#include "grada/bm25.hpp"
#include "grada/corpus.hpp"

namespace grada {

enum class BaseSim { Bm25, Embedding };

enum class SchemeKind { D2dsimBm25, D2dsimEbd, Hrsim };

std::string to_string(SchemeKind kind);
SchemeKind scheme_from_string(const std::string& name);

struct WeightScheme {
    SchemeKind kind = SchemeKind::Hrsim;
    double alpha = 0.4;          // penalty coefficient, hrsim only
    BaseSim base = BaseSim::Bm25;  // underlying similarity for hrsim
    Bm25Params bm25;

    BaseSim effective_base() const {
        if (kind == SchemeKind::D2dsimBm25) return BaseSim::Bm25;
        if (kind == SchemeKind::D2dsimEbd) return BaseSim::Embedding;
        return base;
    }
};

// Weighted undirected graph over a candidate set. Weights are symmetric with
// a zero diagonal and lie in [0,1]; query_sims holds sim(v_i, q) under the
// same base similarity and normalization.
struct SimilarityGraph {
    std::vector<std::string> node_ids;
    std::vector<std::vector<double>> weights;
    std::vector<double> query_sims;

    std::size_t size() const { return node_ids.size(); }
};

// Cosine similarity clamped below at zero.
double clamped_cosine(const std::vector<double>& a, const std::vector<double>& b);

double raw_similarity(const WeightScheme& scheme, const CorpusView& view,
                      const EmbeddingTable& embeddings, const std::string& id_a,
                      const std::string& id_b);

double query_relevance(const WeightScheme& scheme, const CorpusView& view,
                       const EmbeddingTable& embeddings, const Query& query,
                       const std::string& id);

SimilarityGraph build_graph(const WeightScheme& scheme, const CorpusView& view,
                            const EmbeddingTable& embeddings, const Query& query,
                            const std::vector<std::string>& candidate_ids);

// Weight matrix with a unit diagonal, for heatmap export.
std::vector<std::vector<double>> similarity_matrix(const SimilarityGraph& graph);

// Header row of doc_ids, then n rows of comma-separated reals.
std::string similarity_matrix_csv(const SimilarityGraph& graph);

}  // namespace grada
