#include "grada/io.hpp"

#include <cctype>
#include <fstream>

#include <json.hpp>

#include "grada/errors.hpp"

namespace grada {

using nlohmann::json;

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

std::ofstream create_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    return out;
}

json parse_line(const std::string& line, const std::string& path, std::size_t line_no) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": malformed JSON line");
    }
    return obj;
}

}  // namespace

void save_contexts(const std::vector<QueryRunResult>& results, const std::string& path) {
    auto out = create_or_throw(path);
    for (const auto& result : results) {
        json obj;
        obj["query_id"] = result.context.query_id;
        obj["doc_ids"] = result.context.doc_ids;
        obj["first_stage_ranks"] = result.context.first_stage_ranks;
        obj["scores"] = result.context.scores;
        if (result.failed) obj["error"] = result.error;
        out << obj.dump() << "\n";
    }
}

std::vector<ContextSet> load_contexts(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<ContextSet> contexts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = parse_line(line, path, line_no);
        ContextSet context;
        context.query_id = obj.at("query_id").get<std::string>();
        context.doc_ids = obj.value("doc_ids", std::vector<std::string>{});
        context.first_stage_ranks =
            obj.value("first_stage_ranks", std::vector<std::size_t>{});
        context.scores = obj.value("scores", std::vector<double>{});
        contexts.push_back(std::move(context));
    }
    return contexts;
}

void save_full_rankings(const std::vector<QueryRunResult>& results, const std::string& path) {
    auto out = create_or_throw(path);
    for (const auto& result : results) {
        json obj;
        obj["query_id"] = result.context.query_id;
        obj["ranking"] = result.full_ranking;
        out << obj.dump() << "\n";
    }
}

std::vector<QueryRunResult> load_full_rankings(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<QueryRunResult> results;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = parse_line(line, path, line_no);
        QueryRunResult result;
        result.context.query_id = obj.at("query_id").get<std::string>();
        result.full_ranking = obj.value("ranking", std::vector<std::string>{});
        results.push_back(std::move(result));
    }
    return results;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
    auto in = open_or_throw(path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, RetrievalConfig& config) {
    for (const auto& [key, value] : kv) {
        if (key == "bm25.k1") config.scheme.bm25.k1 = std::stod(value);
        else if (key == "bm25.b") config.scheme.bm25.b = std::stod(value);
        else if (key == "prop.damping") config.prop.damping = std::stod(value);
        else if (key == "prop.tol") config.prop.tol = std::stod(value);
        else if (key == "prop.max_iters") config.prop.max_iters = std::stoi(value);
        else if (key == "prop.init") config.prop.init = init_from_string(value);
        else if (key == "retrieval.M") config.first_stage_m = std::stoul(value);
        else if (key == "retrieval.n") config.context_n = std::stoul(value);
        else if (key == "retrieval.retriever") config.retriever = retriever_from_string(value);
        else if (key == "retrieval.defense") config.defense = defense_from_string(value);
        else if (key == "scheme.kind") config.scheme.kind = scheme_from_string(value);
        else if (key == "scheme.alpha") config.scheme.alpha = std::stod(value);
        else if (key == "scheme.base")
            config.scheme.base = value == "embedding" ? BaseSim::Embedding : BaseSim::Bm25;
        else throw ArgumentError("unknown config key: " + key);
    }
}

}  // namespace grada
