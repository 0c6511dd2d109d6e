#include "grada/bm25.hpp"

#include <cctype>
#include <cmath>

#include "grada/errors.hpp"

namespace grada {

namespace {

bool is_token_char(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

}  // namespace

TokenizedDoc tokenize(const std::string& text) {
    TokenizedDoc doc;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            doc.term_freqs[current] += 1;
            doc.tokens.push_back(std::move(current));
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (is_token_char(c)) {
            current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                                       : static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    doc.length = doc.tokens.size();
    return doc;
}

Bm25Index::Bm25Index(const std::vector<std::pair<std::string, std::string>>& docs,
                     Bm25Params params)
    : params_(params) {
    if (params_.k1 <= 0.0 || params_.b < 0.0 || params_.b > 1.0) {
        throw ArgumentError("bm25: k1 must be > 0 and b in [0,1]");
    }
    std::size_t total_len = 0;
    for (const auto& [id, text] : docs) {
        if (docs_.count(id) > 0) throw IntegrityError("bm25: duplicate doc id '" + id + "'");
        TokenizedDoc tok = tokenize(text);
        total_len += tok.length;
        for (const auto& [term, freq] : tok.term_freqs) {
            (void)freq;
            doc_freqs_[term] += 1;
        }
        docs_.emplace(id, std::move(tok));
    }
    num_docs_ = docs_.size();
    avg_len_ = num_docs_ > 0 ? static_cast<double>(total_len) / static_cast<double>(num_docs_)
                             : 0.0;
}

double Bm25Index::idf(const std::string& token) const {
    auto it = doc_freqs_.find(token);
    double df = it == doc_freqs_.end() ? 0.0 : static_cast<double>(it->second);
    double n = static_cast<double>(num_docs_);
    double value = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    return value > 0.0 ? value : 0.0;
}

const TokenizedDoc& Bm25Index::doc_or_throw(const std::string& id) const {
    auto it = docs_.find(id);
    if (it == docs_.end()) throw LookupError("bm25: unknown doc id '" + id + "'");
    return it->second;
}

double Bm25Index::score(const TokenizedDoc& query_doc, const std::string& target_id) const {
    const TokenizedDoc& target = doc_or_throw(target_id);
    const double k1 = params_.k1;
    const double b = params_.b;
    const double len_norm =
        1.0 - b + b * static_cast<double>(target.length) / (avg_len_ > 0.0 ? avg_len_ : 1.0);
    double total = 0.0;
    // term_freqs is an ordered map, so summation order is fixed by token.
    for (const auto& [term, qf] : query_doc.term_freqs) {
        (void)qf;
        auto it = target.term_freqs.find(term);
        if (it == target.term_freqs.end()) continue;
        double tf = static_cast<double>(it->second);
        total += idf(term) * tf * (k1 + 1.0) / (tf + k1 * len_norm);
    }
    return total;
}

double Bm25Index::score_text(const std::string& query_text, const std::string& target_id) const {
    return score(tokenize(query_text), target_id);
}

double Bm25Index::symmetric_score(const std::string& id_a, const std::string& id_b) const {
    const TokenizedDoc& a = doc_or_throw(id_a);
    const TokenizedDoc& b = doc_or_throw(id_b);
    // Evaluate in id order so (a,b) and (b,a) round identically.
    if (id_b < id_a) return symmetric_score(id_b, id_a);
    return 0.5 * (score(a, id_b) + score(b, id_a));
}

}  // namespace grada
