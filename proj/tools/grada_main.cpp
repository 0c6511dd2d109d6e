#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "grada/attack.hpp"
#include "grada/errors.hpp"
#include "grada/io.hpp"
#include "grada/metrics.hpp"
#include "grada/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string corpus_path;
    std::string queries_path;
    std::string embeddings_path;
    std::string config_path;
    std::string out_dir = ".";
    unsigned seed = 0;
    unsigned jobs = 1;
    std::string defense = "grada";
    std::string scheme = "hrsim";
    double alpha = 0.4;
    std::size_t first_stage_m = 10;
    std::size_t context_n = 5;
    std::string init = "uniform";
    std::string retriever = "bm25";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--corpus", opts.corpus_path, "corpus.jsonl path");
    cmd->add_option("--queries", opts.queries_path, "queries.jsonl path");
    cmd->add_option("--embeddings", opts.embeddings_path, "embeddings.jsonl path");
    cmd->add_option("--config", opts.config_path, "key=value config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "random seed (attack synthesis only)");
    cmd->add_option("--jobs", opts.jobs, "worker threads for batch runs");
    cmd->add_option("--defense", opts.defense)->check(CLI::IsMember({"none", "grada"}));
    cmd->add_option("--scheme", opts.scheme)
        ->check(CLI::IsMember({"d2dsim-bm25", "d2dsim-ebd", "hrsim"}));
    cmd->add_option("--alpha", opts.alpha, "hrsim penalty coefficient");
    cmd->add_option("--M", opts.first_stage_m, "first-stage retrieval depth");
    cmd->add_option("--n", opts.context_n, "context size");
    cmd->add_option("--init", opts.init)->check(CLI::IsMember({"uniform", "query"}));
    cmd->add_option("--retriever", opts.retriever)
        ->check(CLI::IsMember({"bm25", "embedding-dot", "embedding-cosine"}));
}

// Config file first, then flags on top.
grada::RetrievalConfig build_config(const CommonOpts& opts, const CLI::App* cmd) {
    grada::RetrievalConfig config;
    config.retriever = grada::RetrieverKind::Bm25;
    if (!opts.config_path.empty()) {
        grada::apply_config(grada::load_config_file(opts.config_path), config);
    }
    auto flag_set = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (flag_set("--defense") || opts.config_path.empty())
        config.defense = grada::defense_from_string(opts.defense);
    if (flag_set("--scheme") || opts.config_path.empty())
        config.scheme.kind = grada::scheme_from_string(opts.scheme);
    if (flag_set("--alpha")) config.scheme.alpha = opts.alpha;
    if (flag_set("--M")) config.first_stage_m = opts.first_stage_m;
    if (flag_set("--n")) config.context_n = opts.context_n;
    if (flag_set("--init")) config.prop.init = grada::init_from_string(opts.init);
    if (flag_set("--retriever")) config.retriever = grada::retriever_from_string(opts.retriever);
    config.validate();
    return config;
}

grada::EmbeddingTable maybe_load_embeddings(const CommonOpts& opts) {
    if (opts.embeddings_path.empty()) return {};
    return grada::load_embeddings(opts.embeddings_path, {});
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw grada::ParseError("cannot write file: " + path);
    out << content;
}

int cmd_inject(const CommonOpts& opts, const std::string& attack_kind,
               const std::vector<std::string>& payloads, int count) {
    auto corpus = grada::load_corpus(opts.corpus_path);
    auto queries = grada::load_queries(opts.queries_path);
    grada::AttackSpec spec;
    spec.kind = grada::attack_from_string(attack_kind);
    spec.payload_templates = payloads;
    if (spec.payload_templates.empty()) {
        spec.payload_templates = {"The answer is {answer}."};
    }
    spec.per_query_count = count;
    auto [poisoned, manifest] = grada::inject_attack(corpus, queries, spec, opts.seed);
    fs::create_directories(opts.out_dir);
    grada::save_corpus(poisoned, opts.out_dir + "/corpus.poisoned.jsonl");
    grada::save_manifest(manifest, opts.out_dir + "/manifest.json");
    std::cout << "injected " << poisoned.size() - corpus.size() << " documents into "
              << opts.out_dir << "\n";
    return 0;
}

int cmd_rerank(const CommonOpts& opts, const CLI::App* cmd) {
    auto config = build_config(opts, cmd);
    auto corpus = grada::load_corpus(opts.corpus_path);
    auto queries = grada::load_queries(opts.queries_path);
    auto embeddings = maybe_load_embeddings(opts);
    grada::Pipeline pipeline(corpus, embeddings, config);
    auto results = pipeline.run_batch(queries, opts.jobs);
    for (const auto& result : results) {
        if (result.m_below_2n_warning) {
            std::cerr << "warning: M < 2n for query " << result.context.query_id << "\n";
        }
        if (result.failed) {
            std::cerr << "error: query " << result.context.query_id << ": " << result.error
                      << "\n";
        }
    }
    fs::create_directories(opts.out_dir);
    grada::save_contexts(results, opts.out_dir + "/contexts.jsonl");
    grada::save_full_rankings(results, opts.out_dir + "/full_rankings.jsonl");
    std::cout << "wrote contexts for " << results.size() << " queries to " << opts.out_dir
              << "\n";
    return 0;
}

json report_to_json(const grada::SeedAggregate& agg) {
    json report;
    report["retention"] = {{"mean", agg.retention_mean}, {"std", agg.retention_std}};
    if (agg.asr_mean) report["asr"] = {{"mean", *agg.asr_mean}, {"std", *agg.asr_std}};
    if (agg.em_mean) report["em"] = {{"mean", *agg.em_mean}, {"std", *agg.em_std}};
    report["per_seed"] = json::array();
    for (const auto& seed_report : agg.per_seed) {
        json entry;
        entry["retention"] = seed_report.retention_rate;
        if (seed_report.asr) entry["asr"] = *seed_report.asr;
        if (seed_report.em) entry["em"] = *seed_report.em;
        json hist = json::object();
        for (const auto& [rank, n] : seed_report.position_histogram) {
            hist[std::to_string(rank)] = n;
        }
        entry["position_histogram"] = hist;
        report["per_seed"].push_back(entry);
    }
    return report;
}

int cmd_eval(const CommonOpts& opts, const std::vector<std::string>& context_files,
             const std::vector<std::string>& ranking_files, const std::string& manifest_path,
             const std::string& answers_path) {
    auto manifest = grada::load_manifest(manifest_path);
    std::vector<grada::Query> queries;
    if (!opts.queries_path.empty()) queries = grada::load_queries(opts.queries_path);

    std::vector<grada::EvalReport> per_seed;
    for (std::size_t i = 0; i < context_files.size(); ++i) {
        grada::EvalReport report;
        auto contexts = grada::load_contexts(context_files[i]);
        report.retention_rate = grada::retention(contexts, manifest);
        if (i < ranking_files.size()) {
            auto rankings = grada::load_full_rankings(ranking_files[i]);
            report.position_histogram = grada::position_distribution(rankings, manifest);
        }
        if (!answers_path.empty()) {
            auto answers = grada::load_answers(answers_path);
            report.asr = grada::asr(answers, queries);
            report.em = grada::em(answers, queries);
        }
        per_seed.push_back(std::move(report));
    }
    auto agg = grada::aggregate_seeds(std::move(per_seed));
    fs::create_directories(opts.out_dir);
    write_text(opts.out_dir + "/report.json", report_to_json(agg).dump(2) + "\n");
    std::cout << "retention " << agg.retention_mean << " +/- " << agg.retention_std << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const CLI::App* cmd, const std::string& param,
              const std::string& values_csv, const std::string& manifest_path) {
    auto config = build_config(opts, cmd);
    auto corpus = grada::load_corpus(opts.corpus_path);
    auto queries = grada::load_queries(opts.queries_path);
    auto embeddings = maybe_load_embeddings(opts);
    auto manifest = grada::load_manifest(manifest_path);

    std::vector<double> values;
    std::stringstream ss(values_csv);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));

    grada::SweepInputs inputs{&corpus, &embeddings, &queries, &manifest};
    auto param_kind =
        param == "alpha" ? grada::SweepParam::Alpha : grada::SweepParam::FirstStageM;
    auto rows = grada::sweep(param_kind, values, config, inputs, opts.jobs);

    std::size_t max_rank = config.first_stage_m;
    if (param_kind == grada::SweepParam::FirstStageM) {
        for (double v : values) max_rank = std::max(max_rank, static_cast<std::size_t>(v));
    }
    fs::create_directories(opts.out_dir);
    write_text(opts.out_dir + "/sweep.csv", grada::sweep_csv(rows, max_rank));
    std::cout << "wrote sweep.csv with " << rows.size() << " rows\n";
    return 0;
}

int cmd_heatmap(const CommonOpts& opts, const CLI::App* cmd, const std::string& query_id) {
    auto config = build_config(opts, cmd);
    auto corpus = grada::load_corpus(opts.corpus_path);
    auto queries = grada::load_queries(opts.queries_path);
    auto embeddings = maybe_load_embeddings(opts);

    const grada::Query* query = nullptr;
    for (const auto& q : queries) {
        if (q.query_id == query_id) query = &q;
    }
    if (query == nullptr) throw grada::LookupError("unknown query_id: " + query_id);

    grada::Pipeline pipeline(corpus, embeddings, config);
    auto candidates = pipeline.first_stage_retrieve(
        *query, std::min(config.first_stage_m, corpus.size()));
    auto graph =
        grada::build_graph(config.scheme, pipeline.view(), embeddings, *query, candidates);
    fs::create_directories(opts.out_dir);
    write_text(opts.out_dir + "/matrix." + query_id + ".csv",
               grada::similarity_matrix_csv(graph));
    std::cout << "wrote " << candidates.size() << "x" << candidates.size() << " matrix for "
              << query_id << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GRADA graph-based reranking defense: attack injection, reranking, evaluation"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* inject = app.add_subcommand("inject", "forge and inject poisoned documents");
    std::string attack_kind = "poisonedrag";
    std::vector<std::string> payloads;
    int count = 1;
    add_common(inject, opts);
    inject->add_option("--attack", attack_kind)
        ->check(CLI::IsMember({"poisonedrag", "poisonedrag_noprefix", "pia", "external"}));
    inject->add_option("--payload", payloads,
                       "payload template; {answer} and {query} expand per query (repeatable)");
    inject->add_option("--count", count, "poisoned docs per query");

    auto* rerank = app.add_subcommand("rerank", "two-stage retrieval with optional defense");
    add_common(rerank, opts);

    auto* eval = app.add_subcommand("eval", "compute retention/positions and optional ASR/EM");
    std::vector<std::string> context_files, ranking_files;
    std::string manifest_path, answers_path;
    add_common(eval, opts);
    eval->add_option("--contexts", context_files, "contexts.jsonl, one per seed")->required();
    eval->add_option("--rankings", ranking_files, "full_rankings.jsonl, one per seed");
    eval->add_option("--manifest", manifest_path, "attack manifest JSON")->required();
    eval->add_option("--answers", answers_path, "answers.jsonl with model responses");

    auto* sweep = app.add_subcommand("sweep", "retention across alpha or M values");
    std::string sweep_param = "alpha", sweep_values;
    std::string sweep_manifest;
    add_common(sweep, opts);
    sweep->add_option("--param", sweep_param)->check(CLI::IsMember({"alpha", "M"}));
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("--manifest", sweep_manifest, "attack manifest JSON")->required();

    auto* heatmap = app.add_subcommand("heatmap", "similarity matrix CSV for one query");
    std::string heatmap_query;
    add_common(heatmap, opts);
    heatmap->add_option("--query-id", heatmap_query)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (inject->parsed()) return cmd_inject(opts, attack_kind, payloads, count);
        if (rerank->parsed()) return cmd_rerank(opts, rerank);
        if (eval->parsed())
            return cmd_eval(opts, context_files, ranking_files, manifest_path, answers_path);
        if (sweep->parsed())
            return cmd_sweep(opts, sweep, sweep_param, sweep_values, sweep_manifest);
        if (heatmap->parsed()) return cmd_heatmap(opts, heatmap, heatmap_query);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
