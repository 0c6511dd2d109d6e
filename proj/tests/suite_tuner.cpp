// Scratch diagnostics for the synthetic suite; not registered with ctest.
#include <cstdio>

#include "grada/metrics.hpp"
#include "synthetic_suite.hpp"

using namespace grada;
using testsupport::make_suite;

namespace {

struct Run {
    double retention;
    PositionHistogram hist;
};

Run run(const Corpus& corpus, const std::vector<Query>& queries,
        const AttackManifest& manifest, DefenseKind defense, SchemeKind scheme, double alpha,
        std::size_t m) {
    RetrievalConfig config;
    config.retriever = RetrieverKind::Bm25;
    config.defense = defense;
    config.scheme.kind = scheme;
    config.scheme.alpha = alpha;
    config.first_stage_m = m;
    config.context_n = 5;
    EmbeddingTable none;
    Pipeline pipeline(corpus, none, config);
    auto results = pipeline.run_batch(queries, 4);
    std::vector<ContextSet> contexts;
    for (const auto& r : results) contexts.push_back(r.context);
    return {retention(contexts, manifest), position_distribution(results, manifest)};
}

}  // namespace

int main() {
    auto suite = make_suite();
    std::printf("corpus %zu docs, %zu poisoned\n", suite.poisoned.size(),
                suite.poisoned.poisoned_count());

    auto none = run(suite.poisoned, suite.queries, suite.manifest, DefenseKind::None,
                    SchemeKind::Hrsim, 0.4, 10);
    std::printf("none        retention %.3f\n", none.retention);

    auto d2d = run(suite.poisoned, suite.queries, suite.manifest, DefenseKind::Grada,
                   SchemeKind::D2dsimBm25, 0.0, 10);
    std::printf("d2dsim-bm25 retention %.3f\n", d2d.retention);

    auto hr = run(suite.poisoned, suite.queries, suite.manifest, DefenseKind::Grada,
                  SchemeKind::Hrsim, 0.4, 10);
    std::printf("hrsim a=0.4 retention %.3f\n", hr.retention);
    std::size_t total = 0, beyond = 0;
    for (auto [rank, count] : hr.hist) {
        total += count;
        if (rank >= 5) beyond += count;
    }
    std::printf("hrsim poison beyond rank5: %zu/%zu (%.2f)\n", beyond, total,
                total ? double(beyond) / double(total) : 0.0);

    std::printf("alpha sweep: ");
    for (double a = 0.0; a <= 1.0001; a += 0.1) {
        auto r = run(suite.poisoned, suite.queries, suite.manifest, DefenseKind::Grada,
                     SchemeKind::Hrsim, a, 10);
        std::printf("%.1f:%.2f ", a, r.retention);
    }
    std::printf("\n");

    auto m5 = run(suite.poisoned, suite.queries, suite.manifest, DefenseKind::Grada,
                  SchemeKind::Hrsim, 0.4, 5);
    std::printf("hrsim M=5 retention %.3f (M=10 %.3f)\n", m5.retention, hr.retention);
    return 0;
}
