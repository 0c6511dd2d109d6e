#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace grada {

enum class Origin {
    Benign,
    PoisonedRag,
    PoisonedRagNoPrefix,
    Pia,
    Phantom,
    External,
};

std::string to_string(Origin origin);
Origin origin_from_string(const std::string& name);

struct Document {
    std::string doc_id;
    std::string text;
    bool is_poisoned = false;
    Origin origin = Origin::Benign;
};

struct Query {
    std::string query_id;
    std::string text;
    std::string gold_answer;
    std::optional<std::string> poison_answer;
};

class EmbeddingTable {
public:
    EmbeddingTable() = default;

    void insert(const std::string& id, std::vector<double> vec);
    bool contains(const std::string& id) const { return entries_.count(id) > 0; }
    const std::vector<double>& at(const std::string& id) const;
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> entries_;
};

class Corpus {
public:
    Corpus() = default;

    void add(Document doc);
    const std::vector<Document>& documents() const { return docs_; }
    const Document& at(const std::string& doc_id) const;
    bool contains(const std::string& doc_id) const { return index_.count(doc_id) > 0; }
    std::size_t position(const std::string& doc_id) const;
    std::size_t size() const { return docs_.size(); }
    std::size_t poisoned_count() const;

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> index_;
};

// What retrieval and reranking are allowed to see: ids and text only.
// Poison provenance stays with the Corpus and is read exclusively by
// the evaluation side.
class CorpusView {
public:
    explicit CorpusView(const Corpus& corpus) : corpus_(&corpus) {}

    const std::string& text(const std::string& doc_id) const { return corpus_->at(doc_id).text; }
    bool contains(const std::string& doc_id) const { return corpus_->contains(doc_id); }
    std::size_t size() const { return corpus_->size(); }
    std::vector<std::string> doc_ids() const;

private:
    const Corpus* corpus_;
};

Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

std::vector<Query> load_queries(const std::string& path);

EmbeddingTable load_embeddings(const std::string& path,
                               const std::vector<std::string>& expected_ids);

Corpus inject_documents(const Corpus& corpus, const std::vector<Document>& docs);

}  // namespace grada
