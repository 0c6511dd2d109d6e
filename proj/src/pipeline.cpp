#include "grada/pipeline.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <thread>

#include "grada/errors.hpp"

namespace grada {

std::string to_string(RetrieverKind kind) {
    switch (kind) {
        case RetrieverKind::EmbeddingDot: return "embedding-dot";
        case RetrieverKind::EmbeddingCosine: return "embedding-cosine";
        case RetrieverKind::Bm25: return "bm25";
    }
    return "embedding-dot";
}

RetrieverKind retriever_from_string(const std::string& name) {
    if (name == "embedding-dot" || name == "embedding_dot") return RetrieverKind::EmbeddingDot;
    if (name == "embedding-cosine" || name == "embedding_cosine")
        return RetrieverKind::EmbeddingCosine;
    if (name == "bm25") return RetrieverKind::Bm25;
    throw ArgumentError("unknown retriever: " + name);
}

std::string to_string(DefenseKind kind) {
    return kind == DefenseKind::None ? "none" : "grada";
}

DefenseKind defense_from_string(const std::string& name) {
    if (name == "none") return DefenseKind::None;
    if (name == "grada") return DefenseKind::Grada;
    throw ArgumentError("unknown defense: " + name);
}

void RetrievalConfig::validate() const {
    if (first_stage_m < 1 || context_n < 1) {
        throw ArgumentError("config: M and n must be positive");
    }
    if (first_stage_m < context_n) {
        throw ArgumentError("config: M must be >= n");
    }
}

Pipeline::Pipeline(const Corpus& corpus, const EmbeddingTable& embeddings,
                   const RetrievalConfig& config)
    : view_(corpus), embeddings_(&embeddings), config_(config) {
    config_.validate();
    all_ids_ = view_.doc_ids();
    if (config_.retriever == RetrieverKind::Bm25) {
        std::vector<std::pair<std::string, std::string>> docs;
        docs.reserve(all_ids_.size());
        for (const auto& id : all_ids_) docs.emplace_back(id, view_.text(id));
        bm25_ = std::make_unique<Bm25Index>(docs, config_.scheme.bm25);
    }
}

double Pipeline::query_doc_score(const Query& query, const std::string& doc_id) const {
    switch (config_.retriever) {
        case RetrieverKind::Bm25:
            return bm25_->score_text(query.text, doc_id);
        case RetrieverKind::EmbeddingCosine:
            return clamped_cosine(embeddings_->at(query.query_id), embeddings_->at(doc_id));
        case RetrieverKind::EmbeddingDot: {
            const auto& q = embeddings_->at(query.query_id);
            const auto& d = embeddings_->at(doc_id);
            if (q.size() != d.size()) throw ArgumentError("dot: dimension mismatch");
            return std::inner_product(q.begin(), q.end(), d.begin(), 0.0);
        }
    }
    return 0.0;
}

std::vector<std::string> Pipeline::first_stage_retrieve(const Query& query,
                                                        std::size_t m) const {
    if (m > all_ids_.size()) {
        throw ArgumentError("first_stage_retrieve: M exceeds corpus size");
    }
    std::vector<std::pair<double, const std::string*>> scored;
    scored.reserve(all_ids_.size());
    for (const auto& id : all_ids_) {
        scored.emplace_back(query_doc_score(query, id), &id);
    }
    // Descending score, lexicographic doc_id on ties.
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return *a.second < *b.second;
    });
    std::vector<std::string> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(*scored[i].second);
    return out;
}

QueryRunResult Pipeline::run_defense(const Query& query) const {
    const std::size_t m = std::min(config_.first_stage_m, all_ids_.size());
    const std::size_t n = config_.context_n;

    QueryRunResult result;
    result.context.query_id = query.query_id;

    std::vector<std::string> candidates = first_stage_retrieve(query, m);

    auto rank_of = [&](const std::string& id) {
        return static_cast<std::size_t>(
            std::find(candidates.begin(), candidates.end(), id) - candidates.begin());
    };

    if (config_.defense == DefenseKind::None) {
        result.full_ranking = candidates;
        for (std::size_t i = 0; i < std::min(n, candidates.size()); ++i) {
            result.context.doc_ids.push_back(candidates[i]);
            result.context.first_stage_ranks.push_back(i);
            result.context.scores.push_back(0.0);
        }
        return result;
    }

    result.m_below_2n_warning = m < 2 * n;

    SimilarityGraph graph = build_graph(config_.scheme, view_, *embeddings_, query, candidates);
    RerankResult reranked = propagate(graph, config_.prop);
    result.full_ranking = reranked.ranked_ids;
    result.init_fallback = reranked.final_scores.uniform_fallback;

    std::vector<std::string> kept = top_n(reranked, std::min(n, reranked.ranked_ids.size()));
    for (const auto& id : kept) {
        std::size_t pos = static_cast<std::size_t>(
            std::find(reranked.final_scores.ids.begin(), reranked.final_scores.ids.end(), id) -
            reranked.final_scores.ids.begin());
        result.context.doc_ids.push_back(id);
        result.context.first_stage_ranks.push_back(rank_of(id));
        result.context.scores.push_back(reranked.final_scores.scores[pos]);
    }
    return result;
}

std::vector<QueryRunResult> Pipeline::run_batch(const std::vector<Query>& queries,
                                                unsigned jobs) const {
    std::vector<QueryRunResult> results(queries.size());
    auto worker = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < queries.size(); i += stride) {
            try {
                results[i] = run_defense(queries[i]);
            } catch (const std::exception& e) {
                results[i].context.query_id = queries[i].query_id;
                results[i].failed = true;
                results[i].error = e.what();
            }
        }
    };
    if (jobs <= 1 || queries.size() < 2) {
        worker(0, 1);
        return results;
    }
    const unsigned count = std::min<unsigned>(jobs, static_cast<unsigned>(queries.size()));
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (unsigned t = 0; t < count; ++t) threads.emplace_back(worker, t, count);
    for (auto& th : threads) th.join();
    return results;
}

}  // namespace grada
