#include "oracles.hpp"

#include "stacks/catalog.hpp"
#include "stacks/errors.hpp"
#include "stacks/texts.hpp"

#include <doctest.h>

#include <fstream>
#include <random>

using namespace stacks;

namespace {

const std::string kHeader = "id,title,author,year,category,text_uri\n";

std::string fixture_path(const std::string& rel) { return std::string(STACKS_SOURCE_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("csv with one row") {
    const Catalog c = parse_catalog(kHeader + "pg100,Hamlet,William Shakespeare,1603,Harvard Classics,texts/pg100.txt\n", CatalogFormat::csv);
    REQUIRE(c.books.size() == 1);
    CHECK(c.books[0].id == "pg100");
    CHECK(c.books[0].year == 1603);
    const auto cats = group_by_category(c);
    REQUIRE(cats.size() == 1);
    CHECK(cats[0].name == "Harvard Classics");
}

TEST_CASE("csv header only is an empty catalog") {
    CHECK(parse_catalog(kHeader, CatalogFormat::csv).books.empty());
    CHECK_THROWS_AS(group_by_category(parse_catalog(kHeader, CatalogFormat::csv)), InputError);
}

TEST_CASE("missing category reports line and field") {
    const std::string in = kHeader + "a,A,X,1900,cat,\nb,B,Y,1900,,\n";
    try {
        parse_catalog(in, CatalogFormat::csv);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()) == "line 3: category empty");
        CHECK(e.line() == 3);
        CHECK(e.field() == "category");
    }
}

TEST_CASE("duplicate id is a parse error naming the id") {
    const std::string in = kHeader + "pg1,A,X,1900,c,\npg1,B,Y,1900,c,\n";
    CHECK_THROWS_WITH_AS(parse_catalog(in, CatalogFormat::csv), doctest::Contains("pg1"), ParseError);
}

TEST_CASE("quoted csv fields") {
    const Catalog c = parse_catalog(kHeader + "x,\"Title, with comma\",\"Say \"\"hi\"\"\",1900,c,\n", CatalogFormat::csv);
    CHECK(c.books[0].title == "Title, with comma");
    CHECK(c.books[0].author == "Say \"hi\"");
}

TEST_CASE("jsonl uses the first of several categories") {
    const Catalog c = parse_catalog(R"({"id":"a","title":"T","author":"A","year":1900,"category":["Poetry","Drama"],"text_uri":""})"
                                    "\n",
                                    CatalogFormat::jsonl);
    REQUIRE(c.books.size() == 1);
    CHECK(c.books[0].category == "Poetry");
}

TEST_CASE("malformed jsonl line is reported with its line") {
    try {
        parse_catalog("{\"id\":\"a\",\"title\":\"T\",\"author\":\"A\",\"year\":1,\"category\":\"c\",\"text_uri\":\"\"}\nnot json\n", CatalogFormat::jsonl);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("validate_catalog findings") {
    Catalog ok;
    ok.books = {{"a", "A", "X", 1900, "c", "texts/a.txt", 0}, {"b", "B", "Y", 1901, "c", "texts/b.txt", 0}};
    CHECK(validate_catalog(ok).empty());

    Catalog dup = ok;
    dup.books[1].id = "a";
    const auto r1 = validate_catalog(dup);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0].severity == Severity::error);

    Catalog year0 = ok;
    year0.books[0].year = 0;
    const auto r2 = validate_catalog(year0);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].severity == Severity::warning);
    CHECK_FALSE(has_errors(r2));
}

TEST_CASE("group_by_category keeps first-appearance order") {
    Catalog c;
    c.books = {{"A", "t", "a", 1900, "cat1", "", 0}, {"B", "t", "a", 1900, "cat2", "", 0}, {"C", "t", "a", 1900, "cat1", "", 0}};
    const auto g = group_by_category(c);
    REQUIRE(g.size() == 2);
    CHECK(g[0].name == "cat1");
    REQUIRE(g[0].books.size() == 2);
    CHECK(g[0].books[0].id == "A");
    CHECK(g[0].books[1].id == "C");
    CHECK(g[1].name == "cat2");
    CHECK(g[1].books.size() == 1);

    Catalog one;
    one.books = {{"A", "t", "a", 1900, "only", "", 0}};
    CHECK(group_by_category(one).size() == 1);
}

TEST_CASE("demo fixture category sizes match a row count of the file") {
    const std::string path = fixture_path("fixtures/demo/catalog.csv");
    // Oracle: count rows per category straight from the file, last column pair split by hand.
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::map<std::string, int> counts;
    while (std::getline(in, line)) {
        const auto last = line.rfind(',');
        const auto prev = line.rfind(',', last - 1);
        ++counts[line.substr(prev + 1, last - prev - 1)];
    }
    const auto cats = group_by_category(parse_catalog(read_file(path), CatalogFormat::csv));
    REQUIRE(cats.size() == 3);
    CHECK(cats[0].name == "Harvard Classics");
    CHECK(cats[0].books.size() == std::size_t(counts["Harvard Classics"]));
    CHECK(cats[1].books.size() == std::size_t(counts["Italy"]));
    CHECK(cats[2].books.size() == std::size_t(counts["Poetry"]));
    CHECK(counts["Harvard Classics"] == 120);
    CHECK(counts["Italy"] == 40);
    CHECK(counts["Poetry"] == 10);
}

TEST_CASE("normalize_text") {
    CHECK(normalize_text("a\r\nb") == "a\nb");
    CHECK(normalize_text("") == "");
    CHECK(normalize_text("x\t") == "x");
    CHECK(normalize_text("a\rb") == "a\nb");
    CHECK(normalize_text("\t x  \ny") == "     x\ny");
    CHECK(normalize_text("\xEF\xBB\xBFhi") == "hi");
    CHECK_THROWS_AS(normalize_text("bad \xC3"), InputError);
}

TEST_CASE("round-trip through both formats for random catalogs") {
    std::mt19937_64 rng(11);
    const std::string alphabet = "abc ,\"\n\xC3\xA9xyz'";
    std::uniform_int_distribution<int> pick(0, int(alphabet.size()) - 1);
    auto word = [&](int len) {
        std::string s;
        for (int i = 0; i < len; ++i) {
            char ch = alphabet[std::size_t(pick(rng))];
            if (ch == '\xC3') {
                s += "\xC3\xA9";
                ++i;
                continue;
            }
            if (ch == '\xA9') ch = 'q';
            s += ch;
        }
        // fields are trimmed on input, so keep them free of outer spaces
        while (!s.empty() && s.back() == ' ') s.pop_back();
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        return s.empty() ? std::string("w") : s;
    };
    for (int round = 0; round < 50; ++round) {
        Catalog c;
        const int n = int(rng() % 20);
        for (int i = 0; i < n; ++i)
            c.books.push_back({"id" + std::to_string(i), word(8), word(5), int(rng() % 3000) - 500, "cat" + std::to_string(rng() % 4),
                               i % 3 ? "texts/" + std::to_string(i) + ".txt" : "", 0});
        for (auto fmt : {CatalogFormat::csv, CatalogFormat::jsonl}) {
            const Catalog back = parse_catalog(serialize_catalog(c, fmt), fmt);
            CHECK(back.books == c.books);
        }
        if (!c.books.empty()) {
            // Partition property: every book exactly once.
            std::multiset<std::string> ids;
            for (const auto& cat : group_by_category(c))
                for (const auto& b : cat.books) ids.insert(b.id);
            CHECK(ids.size() == c.books.size());
            for (const auto& b : c.books) CHECK(ids.count(b.id) == 1);
        }
    }
}

TEST_CASE("parsing is deterministic") {
    const std::string in = read_file(fixture_path("fixtures/demo/catalog.csv"));
    CHECK(parse_catalog(in, CatalogFormat::csv) == parse_catalog(in, CatalogFormat::csv));
}
