#include "grada/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grada/errors.hpp"

namespace grada {

std::string to_string(InitKind init) {
    return init == InitKind::Uniform ? "uniform" : "query";
}

InitKind init_from_string(const std::string& name) {
    if (name == "uniform") return InitKind::Uniform;
    if (name == "query" || name == "query_similarity") return InitKind::QuerySimilarity;
    throw ArgumentError("unknown init: " + name);
}

ScoreVector initial_scores(const SimilarityGraph& graph, InitKind init) {
    const std::size_t n = graph.size();
    if (n == 0) throw ArgumentError("initial_scores: empty graph");
    ScoreVector sv;
    sv.ids = graph.node_ids;
    if (init == InitKind::QuerySimilarity) {
        double total = std::accumulate(graph.query_sims.begin(), graph.query_sims.end(), 0.0);
        if (total > 0.0) {
            sv.scores.resize(n);
            for (std::size_t i = 0; i < n; ++i) sv.scores[i] = graph.query_sims[i] / total;
            return sv;
        }
        sv.uniform_fallback = true;
    }
    sv.scores.assign(n, 1.0 / static_cast<double>(n));
    return sv;
}

RerankResult propagate(const SimilarityGraph& graph, const PropagationConfig& config) {
    const std::size_t n = graph.size();
    if (n == 0) throw ArgumentError("propagate: empty graph");
    if (config.damping <= 0.0 || config.damping >= 1.0) {
        throw ArgumentError("propagate: damping must be in (0,1)");
    }
    if (config.max_iters < 1 || !(config.tol > 0.0)) {
        throw ArgumentError("propagate: invalid max_iters or tol");
    }

    ScoreVector init = initial_scores(graph, config.init);
    const std::vector<double>& teleport = init.scores;

    std::vector<double> out_weight(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        out_weight[j] = std::accumulate(graph.weights[j].begin(), graph.weights[j].end(), 0.0);
    }

    const double d = config.damping;
    std::vector<double> scores = init.scores;
    std::vector<double> next(n, 0.0);
    int iters = 0;
    bool converged = false;

    while (iters < config.max_iters) {
        ++iters;
        // Mass of nodes with no neighbors flows back through the teleport
        // distribution instead of vanishing.
        double dangling = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (out_weight[j] == 0.0) dangling += scores[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double inflow = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (graph.weights[i][j] > 0.0) {
                    inflow += graph.weights[i][j] / out_weight[j] * scores[j];
                }
            }
            next[i] = (1.0 - d) * teleport[i] + d * (inflow + dangling * teleport[i]);
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - scores[i]);
        scores.swap(next);
        if (delta < config.tol) {
            converged = true;
            break;
        }
    }

    RerankResult result;
    result.final_scores.ids = graph.node_ids;
    result.final_scores.scores = scores;
    result.final_scores.uniform_fallback = init.uniform_fallback;
    result.iterations_used = iters;
    result.converged = converged;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    result.ranked_ids.reserve(n);
    for (std::size_t idx : order) result.ranked_ids.push_back(graph.node_ids[idx]);
    return result;
}

std::vector<std::string> top_n(const RerankResult& result, std::size_t n) {
    if (n < 1 || n > result.ranked_ids.size()) {
        throw ArgumentError("top_n: n out of range");
    }
    return {result.ranked_ids.begin(), result.ranked_ids.begin() + static_cast<long>(n)};
}

}  // namespace grada
