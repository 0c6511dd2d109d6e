#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grada/attack.hpp"
#include "grada/corpus.hpp"
#include "grada/pipeline.hpp"

namespace grada {

struct AnswerRecord {
    std::string query_id;
    std::string model_answer;
};

std::vector<AnswerRecord> load_answers(const std::string& path);

// rank -> number of poisoned docs observed at that rank (0-based, over the
// full reranked list, so ranks beyond n appear too).
using PositionHistogram = std::map<std::size_t, std::size_t>;

struct EvalReport {
    double retention_rate = 0.0;
    PositionHistogram position_histogram;
    std::optional<double> asr;
    std::optional<double> em;
};

struct SeedAggregate {
    std::vector<EvalReport> per_seed;
    double retention_mean = 0.0;
    double retention_std = 0.0;  // population std across seeds
    std::optional<double> asr_mean, asr_std;
    std::optional<double> em_mean, em_std;
};

// Fraction of queries whose context holds at least one manifest doc.
double retention(const std::vector<ContextSet>& contexts, const AttackManifest& manifest);

PositionHistogram position_distribution(const std::vector<QueryRunResult>& results,
                                        const AttackManifest& manifest);

// Case-insensitive substring test of poison_answer in the model answer.
double asr(const std::vector<AnswerRecord>& answers, const std::vector<Query>& queries);

// Exact match of gold_answer after trimming surrounding whitespace.
double em(const std::vector<AnswerRecord>& answers, const std::vector<Query>& queries);

SeedAggregate aggregate_seeds(std::vector<EvalReport> per_seed);

enum class SweepParam { Alpha, FirstStageM };

struct SweepRow {
    double value = 0.0;
    double retention = 0.0;
    PositionHistogram histogram;
};

struct SweepInputs {
    const Corpus* corpus;
    const EmbeddingTable* embeddings;
    const std::vector<Query>* queries;
    const AttackManifest* manifest;
};

std::vector<SweepRow> sweep(SweepParam param, const std::vector<double>& values,
                            const RetrievalConfig& base_config, const SweepInputs& inputs,
                            unsigned jobs = 1);

// Columns: param_value, retention, rank_0..rank_{M-1}.
std::string sweep_csv(const std::vector<SweepRow>& rows, std::size_t max_rank);

}  // namespace grada
