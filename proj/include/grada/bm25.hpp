#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace grada {

struct TokenizedDoc {
    std::vector<std::string> tokens;
    std::map<std::string, int> term_freqs;
    std::size_t length = 0;
};

// Lowercases and splits on anything that is not ASCII alphanumeric or a
// non-ASCII byte (UTF-8 sequences are kept whole). No stemming, no stopwords.
TokenizedDoc tokenize(const std::string& text);

struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

// Okapi BM25 over a fixed document set. IDF is ln(1 + (N - df + 0.5)/(df + 0.5))
// floored at zero, so scores are always nonnegative. Query-side term frequency
// is ignored: each distinct query token contributes once.
class Bm25Index {
public:
    Bm25Index(const std::vector<std::pair<std::string, std::string>>& docs,
              Bm25Params params = {});

    double score(const TokenizedDoc& query_doc, const std::string& target_id) const;
    double score_text(const std::string& query_text, const std::string& target_id) const;

    // Mean of the two directed scores; exactly symmetric in its arguments.
    double symmetric_score(const std::string& id_a, const std::string& id_b) const;

    double idf(const std::string& token) const;
    double avg_len() const { return avg_len_; }
    std::size_t num_docs() const { return num_docs_; }
    const Bm25Params& params() const { return params_; }

private:
    const TokenizedDoc& doc_or_throw(const std::string& id) const;

    Bm25Params params_;
    std::unordered_map<std::string, TokenizedDoc> docs_;
    std::unordered_map<std::string, std::size_t> doc_freqs_;
    std::size_t num_docs_ = 0;
    double avg_len_ = 0.0;
};

}  // namespace grada
