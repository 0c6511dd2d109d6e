#include "grada/corpus.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "grada/errors.hpp"

namespace grada {

using nlohmann::json;

std::string to_string(Origin origin) {
    switch (origin) {
        case Origin::Benign: return "benign";
        case Origin::PoisonedRag: return "poisonedrag";
        case Origin::PoisonedRagNoPrefix: return "poisonedrag_noprefix";
        case Origin::Pia: return "pia";
        case Origin::Phantom: return "phantom";
        case Origin::External: return "external";
    }
    return "benign";
}

Origin origin_from_string(const std::string& name) {
    if (name == "benign") return Origin::Benign;
    if (name == "poisonedrag") return Origin::PoisonedRag;
    if (name == "poisonedrag_noprefix") return Origin::PoisonedRagNoPrefix;
    if (name == "pia") return Origin::Pia;
    if (name == "phantom") return Origin::Phantom;
    if (name == "external") return Origin::External;
    throw ParseError("unknown origin: " + name);
}

void EmbeddingTable::insert(const std::string& id, std::vector<double> vec) {
    if (entries_.empty()) {
        dim_ = vec.size();
    } else if (vec.size() != dim_) {
        throw ParseError("embedding dimension mismatch for id '" + id + "': expected " +
                         std::to_string(dim_) + ", got " + std::to_string(vec.size()));
    }
    entries_[id] = std::move(vec);
}

const std::vector<double>& EmbeddingTable::at(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw LookupError("no embedding for id '" + id + "'");
    return it->second;
}

void Corpus::add(Document doc) {
    if (index_.count(doc.doc_id) > 0) {
        throw IntegrityError("duplicate doc_id '" + doc.doc_id + "'");
    }
    index_[doc.doc_id] = docs_.size();
    docs_.push_back(std::move(doc));
}

const Document& Corpus::at(const std::string& doc_id) const {
    return docs_[position(doc_id)];
}

std::size_t Corpus::position(const std::string& doc_id) const {
    auto it = index_.find(doc_id);
    if (it == index_.end()) throw LookupError("no document with doc_id '" + doc_id + "'");
    return it->second;
}

std::size_t Corpus::poisoned_count() const {
    std::size_t count = 0;
    for (const auto& doc : docs_) {
        if (doc.is_poisoned) ++count;
    }
    return count;
}

std::vector<std::string> CorpusView::doc_ids() const {
    std::vector<std::string> ids;
    ids.reserve(corpus_->size());
    for (const auto& doc : corpus_->documents()) ids.push_back(doc.doc_id);
    return ids;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

json parse_line(const std::string& line, const std::string& path, std::size_t line_no) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": malformed JSON line");
    }
    return obj;
}

}  // namespace

Corpus load_corpus(const std::string& path) {
    auto in = open_or_throw(path);
    Corpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = parse_line(line, path, line_no);
        if (!obj.contains("doc_id") || !obj.contains("text")) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": missing doc_id or text");
        }
        Document doc;
        doc.doc_id = obj["doc_id"].get<std::string>();
        doc.text = obj["text"].get<std::string>();
        doc.is_poisoned = obj.value("is_poisoned", false);
        doc.origin = origin_from_string(obj.value("origin", std::string("benign")));
        if (doc.text.empty()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": empty text for '" +
                             doc.doc_id + "'");
        }
        if (corpus.contains(doc.doc_id)) {
            throw IntegrityError(path + ":" + std::to_string(line_no) +
                                 ": duplicate doc_id '" + doc.doc_id + "'");
        }
        corpus.add(std::move(doc));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    for (const auto& doc : corpus.documents()) {
        json obj;
        obj["doc_id"] = doc.doc_id;
        obj["text"] = doc.text;
        obj["is_poisoned"] = doc.is_poisoned;
        obj["origin"] = to_string(doc.origin);
        out << obj.dump() << "\n";
    }
}

std::vector<Query> load_queries(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<Query> queries;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = parse_line(line, path, line_no);
        Query q;
        try {
            q.query_id = obj.at("query_id").get<std::string>();
            q.text = obj.at("text").get<std::string>();
            q.gold_answer = obj.value("gold_answer", std::string());
            if (obj.contains("poison_answer")) {
                q.poison_answer = obj["poison_answer"].get<std::string>();
            }
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(q.query_id).second) {
            throw IntegrityError(path + ":" + std::to_string(line_no) +
                                 ": duplicate query_id '" + q.query_id + "'");
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

EmbeddingTable load_embeddings(const std::string& path,
                               const std::vector<std::string>& expected_ids) {
    auto in = open_or_throw(path);
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = parse_line(line, path, line_no);
        std::string id;
        std::vector<double> vec;
        try {
            id = obj.at("id").get<std::string>();
            vec = obj.at("vector").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        bool all_zero = true;
        for (double x : vec) {
            if (!std::isfinite(x)) {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": non-finite component in vector for id '" + id + "'");
            }
            if (x != 0.0) all_zero = false;
        }
        if (vec.empty() || all_zero) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": zero vector for id '" + id + "'");
        }
        table.insert(id, std::move(vec));
    }
    std::string missing;
    for (const auto& id : expected_ids) {
        if (!table.contains(id)) missing += (missing.empty() ? "" : ", ") + id;
    }
    if (!missing.empty()) {
        throw CoverageError(path + ": missing embeddings for ids: " + missing);
    }
    return table;
}

Corpus inject_documents(const Corpus& corpus, const std::vector<Document>& docs) {
    Corpus out = corpus;
    for (const auto& doc : docs) out.add(doc);
    return out;
}

}  // namespace grada
