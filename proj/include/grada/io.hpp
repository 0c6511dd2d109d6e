#pragma once

#include <map>
#include <string>
#include <vector>

#include "grada/pipeline.hpp"

namespace grada {

void save_contexts(const std::vector<QueryRunResult>& results, const std::string& path);
std::vector<ContextSet> load_contexts(const std::string& path);

void save_full_rankings(const std::vector<QueryRunResult>& results, const std::string& path);
// Returns results with only query_id and full_ranking populated.
std::vector<QueryRunResult> load_full_rankings(const std::string& path);

// key = value lines, '#' comments. Recognized keys: bm25.k1, bm25.b,
// prop.damping, prop.tol, prop.max_iters, prop.init, retrieval.M,
// retrieval.n, retrieval.retriever, retrieval.defense, scheme.kind,
// scheme.alpha, scheme.base.
std::map<std::string, std::string> load_config_file(const std::string& path);

void apply_config(const std::map<std::string, std::string>& kv, RetrievalConfig& config);

}  // namespace grada
