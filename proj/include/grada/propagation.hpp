#pragma once

#include <string>
#include <vector>

#include "grada/sim_graph.hpp"

namespace grada {

enum class InitKind { Uniform, QuerySimilarity };

std::string to_string(InitKind init);
InitKind init_from_string(const std::string& name);

struct PropagationConfig {
    double damping = 0.85;
    int max_iters = 100;
    double tol = 1e-8;  // L1 change threshold
    InitKind init = InitKind::Uniform;
};

struct ScoreVector {
    std::vector<std::string> ids;
    std::vector<double> scores;
    // Set when query-similarity init had to fall back to uniform because all
    // query sims were zero.
    bool uniform_fallback = false;
};

struct RerankResult {
    std::vector<std::string> ranked_ids;  // descending final score
    ScoreVector final_scores;
    int iterations_used = 0;
    bool converged = false;
};

ScoreVector initial_scores(const SimilarityGraph& graph, InitKind init);

// Damped score propagation over the graph. Synchronous updates; nodes with no
// positive-weight neighbor send their mass back through the initial
// distribution, so the score sum stays at 1. Ties in the final ranking break
// by original candidate order.
RerankResult propagate(const SimilarityGraph& graph, const PropagationConfig& config);

std::vector<std::string> top_n(const RerankResult& result, std::size_t n);

}  // namespace grada
