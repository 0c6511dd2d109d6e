#include "grada/sim_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "grada/errors.hpp"

namespace grada {

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::D2dsimBm25: return "d2dsim-bm25";
        case SchemeKind::D2dsimEbd: return "d2dsim-ebd";
        case SchemeKind::Hrsim: return "hrsim";
    }
    return "hrsim";
}

SchemeKind scheme_from_string(const std::string& name) {
    if (name == "d2dsim-bm25") return SchemeKind::D2dsimBm25;
    if (name == "d2dsim-ebd") return SchemeKind::D2dsimEbd;
    if (name == "hrsim") return SchemeKind::Hrsim;
    throw ArgumentError("unknown scheme: " + name);
}

double clamped_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ArgumentError("cosine: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    double cos = dot / (std::sqrt(na) * std::sqrt(nb));
    if (cos > 1.0) cos = 1.0;
    return cos > 0.0 ? cos : 0.0;
}

double raw_similarity(const WeightScheme& scheme, const CorpusView& view,
                      const EmbeddingTable& embeddings, const std::string& id_a,
                      const std::string& id_b) {
    if (scheme.effective_base() == BaseSim::Embedding) {
        return clamped_cosine(embeddings.at(id_a), embeddings.at(id_b));
    }
    Bm25Index index({{id_a, view.text(id_a)}, {id_b, view.text(id_b)}}, scheme.bm25);
    return index.symmetric_score(id_a, id_b);
}

double query_relevance(const WeightScheme& scheme, const CorpusView& view,
                       const EmbeddingTable& embeddings, const Query& query,
                       const std::string& id) {
    if (scheme.effective_base() == BaseSim::Embedding) {
        return clamped_cosine(embeddings.at(query.query_id), embeddings.at(id));
    }
    Bm25Index index({{id, view.text(id)}}, scheme.bm25);
    return index.score_text(query.text, id);
}

SimilarityGraph build_graph(const WeightScheme& scheme, const CorpusView& view,
                            const EmbeddingTable& embeddings, const Query& query,
                            const std::vector<std::string>& candidate_ids) {
    if (candidate_ids.empty()) throw ArgumentError("build_graph: empty candidate set");
    {
        std::set<std::string> seen(candidate_ids.begin(), candidate_ids.end());
        if (seen.size() != candidate_ids.size()) {
            throw IntegrityError("build_graph: duplicate candidate id");
        }
    }

    const std::size_t n = candidate_ids.size();
    const BaseSim base = scheme.effective_base();

    SimilarityGraph graph;
    graph.node_ids = candidate_ids;
    graph.weights.assign(n, std::vector<double>(n, 0.0));
    graph.query_sims.assign(n, 0.0);

    std::vector<std::vector<double>> raw(n, std::vector<double>(n, 0.0));
    std::vector<double> qraw(n, 0.0);

    if (base == BaseSim::Bm25) {
        std::vector<std::pair<std::string, std::string>> docs;
        docs.reserve(n);
        for (const auto& id : candidate_ids) docs.emplace_back(id, view.text(id));
        Bm25Index index(docs, scheme.bm25);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                raw[i][j] = raw[j][i] = index.symmetric_score(candidate_ids[i], candidate_ids[j]);
            }
            qraw[i] = index.score_text(query.text, candidate_ids[i]);
        }
        // BM25 is unbounded; rescale everything by the largest pairwise score
        // so weights land in [0,1], clamping query scores that exceed it.
        double max_raw = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) max_raw = std::max(max_raw, raw[i][j]);
        if (max_raw > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) raw[i][j] = std::min(raw[i][j] / max_raw, 1.0);
                qraw[i] = std::min(qraw[i] / max_raw, 1.0);
            }
        } else {
            for (auto& row : raw) std::fill(row.begin(), row.end(), 0.0);
            std::fill(qraw.begin(), qraw.end(), 0.0);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& vi = embeddings.at(candidate_ids[i]);
            for (std::size_t j = i + 1; j < n; ++j) {
                raw[i][j] = raw[j][i] = clamped_cosine(vi, embeddings.at(candidate_ids[j]));
            }
            qraw[i] = clamped_cosine(embeddings.at(query.query_id), vi);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        graph.query_sims[i] = qraw[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            double w = raw[i][j];
            if (scheme.kind == SchemeKind::Hrsim) {
                w = std::max(w - scheme.alpha * (qraw[i] + qraw[j]), 0.0);
            }
            graph.weights[i][j] = graph.weights[j][i] = w;
        }
    }
    return graph;
}

std::vector<std::vector<double>> similarity_matrix(const SimilarityGraph& graph) {
    auto matrix = graph.weights;
    for (std::size_t i = 0; i < matrix.size(); ++i) matrix[i][i] = 1.0;
    return matrix;
}

std::string similarity_matrix_csv(const SimilarityGraph& graph) {
    std::string out;
    for (std::size_t i = 0; i < graph.node_ids.size(); ++i) {
        if (i > 0) out += ',';
        out += graph.node_ids[i];
    }
    out += '\n';
    auto matrix = similarity_matrix(graph);
    char buf[64];
    for (const auto& row : matrix) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            if (j > 0) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace grada
