#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "grada/corpus.hpp"
#include "grada/errors.hpp"

using namespace grada;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("grada_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& content) const {
        auto p = (path / name).string();
        std::ofstream out(p);
        out << content;
        return p;
    }
};

}  // namespace

TEST_CASE("empty file loads as empty corpus") {
    TempDir dir;
    auto corpus = load_corpus(dir.file("c.jsonl", ""));
    CHECK(corpus.size() == 0);
}

TEST_CASE("two-line corpus builds a consistent index") {
    TempDir dir;
    auto corpus = load_corpus(dir.file(
        "c.jsonl", R"({"doc_id":"d1","text":"a"})" "\n" R"({"doc_id":"d2","text":"b"})" "\n"));
    CHECK(corpus.size() == 2);
    CHECK(corpus.position("d1") == 0);
    CHECK(corpus.position("d2") == 1);
    CHECK(corpus.at("d2").text == "b");
    CHECK(corpus.at("d1").origin == Origin::Benign);
    CHECK_FALSE(corpus.at("d1").is_poisoned);
}

TEST_CASE("duplicate doc_id reports the offending line") {
    TempDir dir;
    auto path = dir.file("c.jsonl", R"({"doc_id":"d1","text":"a"})" "\n"
                                    R"({"doc_id":"d2","text":"b"})" "\n"
                                    R"({"doc_id":"d1","text":"c"})" "\n");
    try {
        load_corpus(path);
        FAIL("expected IntegrityError");
    } catch (const IntegrityError& e) {
        std::string msg = e.what();
        CHECK(msg.find("d1") != std::string::npos);
        CHECK(msg.find(":3") != std::string::npos);
    }
}

TEST_CASE("malformed line reports its line number") {
    TempDir dir;
    auto path = dir.file("c.jsonl", R"({"doc_id":"d1","text":"a"})" "\n" "not json\n");
    try {
        load_corpus(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("load then save then load round-trips") {
    TempDir dir;
    auto path = dir.file(
        "c.jsonl",
        R"({"doc_id":"d1","text":"alpha","is_poisoned":true,"origin":"pia"})" "\n"
        R"({"doc_id":"d2","text":"beta"})" "\n");
    auto corpus = load_corpus(path);
    auto copy_path = (dir.path / "copy.jsonl").string();
    save_corpus(corpus, copy_path);
    auto again = load_corpus(copy_path);
    REQUIRE(again.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(again.documents()[i].doc_id == corpus.documents()[i].doc_id);
        CHECK(again.documents()[i].text == corpus.documents()[i].text);
        CHECK(again.documents()[i].is_poisoned == corpus.documents()[i].is_poisoned);
        CHECK(again.documents()[i].origin == corpus.documents()[i].origin);
    }
}

TEST_CASE("inject_documents appends and counts poisoned docs") {
    Corpus corpus;
    for (int i = 0; i < 100; ++i) {
        corpus.add({"d" + std::to_string(i), "text " + std::to_string(i), false,
                    Origin::Benign});
    }
    Document poison{"p1", "bad", true, Origin::PoisonedRag};
    auto grown = inject_documents(corpus, {poison});
    CHECK(grown.size() == 101);
    CHECK(grown.poisoned_count() == 1);
    CHECK(corpus.poisoned_count() == 0);  // input untouched

    SUBCASE("empty injection is the identity") {
        auto same = inject_documents(corpus, {});
        CHECK(same.size() == corpus.size());
    }
    SUBCASE("colliding id throws") {
        CHECK_THROWS_AS(inject_documents(grown, {poison}), IntegrityError);
    }
    SUBCASE("injection is associative over list concatenation") {
        Document p2{"p2", "worse", true, Origin::Pia};
        auto one_shot = inject_documents(corpus, {poison, p2});
        auto two_step = inject_documents(inject_documents(corpus, {poison}), {p2});
        REQUIRE(one_shot.size() == two_step.size());
        for (std::size_t i = 0; i < one_shot.size(); ++i) {
            CHECK(one_shot.documents()[i].doc_id == two_step.documents()[i].doc_id);
        }
    }
}

TEST_CASE("load_queries parses optional poison_answer") {
    TempDir dir;
    auto queries = load_queries(dir.file(
        "q.jsonl",
        R"({"query_id":"q1","text":"who","gold_answer":"x","poison_answer":"y"})" "\n"
        R"({"query_id":"q2","text":"what","gold_answer":"z"})" "\n"));
    REQUIRE(queries.size() == 2);
    CHECK(queries[0].poison_answer == "y");
    CHECK_FALSE(queries[1].poison_answer.has_value());
}

TEST_CASE("load_embeddings enforces coverage, dimension and finiteness") {
    TempDir dir;
    SUBCASE("well-formed table") {
        auto table = load_embeddings(
            dir.file("e.jsonl", R"({"id":"a","vector":[1,0,0,0]})" "\n"
                                R"({"id":"b","vector":[0,1,0,0]})" "\n"
                                R"({"id":"c","vector":[0,0,1,0]})" "\n"),
            {"a", "b"});
        CHECK(table.dim() == 4);
        CHECK(table.at("c").size() == 4);
    }
    SUBCASE("dimension mismatch") {
        auto path = dir.file("e.jsonl", R"({"id":"a","vector":[1,0,0,0]})" "\n"
                                        R"({"id":"b","vector":[0,1,0]})" "\n");
        CHECK_THROWS_AS(load_embeddings(path, {}), ParseError);
    }
    SUBCASE("NaN component") {
        auto path = dir.file("e.jsonl", R"({"id":"a","vector":[1,null,0]})" "\n");
        CHECK_THROWS(load_embeddings(path, {}));
    }
    SUBCASE("missing expected id") {
        auto path = dir.file("e.jsonl", R"({"id":"a","vector":[1,0]})" "\n");
        try {
            load_embeddings(path, {"a", "zz"});
            FAIL("expected CoverageError");
        } catch (const CoverageError& e) {
            CHECK(std::string(e.what()).find("zz") != std::string::npos);
        }
    }
}

TEST_CASE("corpus view exposes text but not provenance") {
    Corpus corpus;
    corpus.add({"d1", "hello", true, Origin::Phantom});
    CorpusView view(corpus);
    CHECK(view.text("d1") == "hello");
    CHECK(view.doc_ids() == std::vector<std::string>{"d1"});
}
