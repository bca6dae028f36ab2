#include "demo.hpp"
#include "oracles.hpp"

#include "stacks/server.hpp"

#include <doctest.h>
#include <httplib.h>

using namespace stacks;
using json = nlohmann::json;

namespace {

class FailingBackend : public CompletionBackend {
public:
    std::string name() const override { return "failing"; }
    std::string complete(const std::string&) override { throw BackendError("model offline"); }
};

struct Fixture {
    std::shared_ptr<MockBackend> backend = std::make_shared<MockBackend>();
    Service service{demo::world(), ServerConfig{0, demo::dir(), 100}, std::make_shared<ContextService>(backend, std::nullopt)};
    HttpServer server{service, "127.0.0.1", 0};
    httplib::Client client{"127.0.0.1", server.port()};

    std::pair<int, std::string> raw(const std::string& path) {
        auto res = client.Get(path);
        REQUIRE(res);
        return {res->status, res->body};
    }
    std::pair<int, json> get(const std::string& path) {
        auto [status, body] = raw(path);
        return {status, json::parse(body)};
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("healthz") {
    auto [status, body] = fixture().get("/healthz");
    CHECK(status == 200);
    CHECK(body["status"] == "ok");
}

TEST_CASE("layout and rooms") {
    auto [status, layout] = fixture().get("/api/layout");
    REQUIRE(status == 200);
    CHECK(layout["rooms"].size() == 3);
    CHECK(layout["connections"].size() == 3);
    CHECK(layout.contains("bbox"));
    // No dangling links: every room in the layout is fetchable.
    for (const auto& r : layout["rooms"]) {
        auto [s, chunk] = fixture().get("/api/rooms/" + std::to_string(r["id"].get<int>()));
        CHECK(s == 200);
        CHECK(chunk["room_id"] == r["id"]);
        CHECK(chunk.contains("structure"));
        CHECK(chunk.contains("interior"));
    }
    CHECK(fixture().get("/api/rooms/9999").first == 404);
    CHECK(fixture().get("/api/rooms/-1").first == 404);
    CHECK(fixture().get("/api/rooms/abc").first == 400);
    CHECK(fixture().get("/api/rooms/1.5").first == 400);
    CHECK(fixture().get("/api/rooms/1/nope").first == 404);
    auto [s404, err] = fixture().get("/api/rooms/9999");
    CHECK(err.contains("error"));
}

TEST_CASE("visible sets over http mirror the culling oracle") {
    const World& w = demo::world();
    const auto adj = oracle::adjacency(w.layout.rooms.size(), w.layout.connections);
    for (const auto& r : w.layout.rooms) {
        auto [status, v] = fixture().get("/api/rooms/" + std::to_string(r.id) + "/visible");
        REQUIRE(status == 200);
        std::vector<int> expect{r.id};
        expect.insert(expect.end(), adj[std::size_t(r.id)].begin(), adj[std::size_t(r.id)].end());
        std::sort(expect.begin(), expect.end());
        CHECK(v["structure"].get<std::vector<int>>() == expect);
        CHECK(v["interior"].get<std::vector<int>>() == std::vector<int>{r.id});
    }
    auto [status, mid] = fixture().get("/api/rooms/1/visible");
    CHECK(mid["structure"].get<std::vector<int>>() == std::vector<int>{0, 1, 2});
    CHECK(mid["interior"].get<std::vector<int>>() == std::vector<int>{1});
    CHECK(fixture().get("/api/rooms/3/visible").first == 404);
}

TEST_CASE("map") {
    auto [status, m] = fixture().get("/api/map");
    REQUIRE(status == 200);
    CHECK(m["outlines"].size() == 3);
    CHECK(m["teleports"].size() == 3);
    CHECK(m["category_index"].size() == 3);
    CHECK(m["signboards"].size() == 3);
}

TEST_CASE("book metadata") {
    auto [status, b] = fixture().get("/api/books/pg100");
    REQUIRE(status == 200);
    CHECK(b["title"] == "Hamlet");
    CHECK(b["author"] == "William Shakespeare");
    CHECK(b["publication_year"] == 1603);
    CHECK(b["category"] == "Harvard Classics");
    CHECK(b["room_id"] == 0);
    CHECK(b["total_pages"] == demo::world().pagination.pages.at("pg100"));
    CHECK(fixture().get("/api/books/pg99999").first == 404);
    CHECK(fixture().get("/api/books/pg100/other").first == 404);
}

TEST_CASE("pages reassemble every demo text") {
    const World& w = demo::world();
    for (const auto& b : w.catalog.books) {
        const int total = w.pagination.pages.at(b.id);
        std::string joined;
        for (int n = 0; n < total; ++n) {
            auto [status, page] = fixture().get("/api/books/" + b.id + "/pages/" + std::to_string(n));
            REQUIRE(status == 200);
            CHECK(page["index"] == n);
            CHECK(page["total_pages"] == total);
            joined += page["text"].get<std::string>();
        }
        CHECK(joined == *load_book_text(b, demo::dir()));
        CHECK(fixture().get("/api/books/" + b.id + "/pages/" + std::to_string(total)).first == 404);
    }
    CHECK(fixture().get("/api/books/pg100/pages/-1").first == 404);
    CHECK(fixture().get("/api/books/pg100/pages/x").first == 400);
    CHECK(fixture().get("/api/books/nope/pages/0").first == 404);
}

TEST_CASE("context") {
    auto [status, c] = fixture().get("/api/books/pg100/context?kind=summary");
    REQUIRE(status == 200);
    CHECK(c["text"].get<std::string>().starts_with("Summary of Hamlet by William Shakespeare"));
    CHECK(c["kind"] == "summary");
    auto [s2, info] = fixture().get("/api/books/pg100/context?kind=additional_info");
    CHECK(s2 == 200);
    CHECK(info["text"].get<std::string>().starts_with("Background on Hamlet"));
    CHECK(fixture().get("/api/books/pg100/context?kind=poem").first == 400);
    CHECK(fixture().get("/api/books/pg100/context").first == 400);
    CHECK(fixture().get("/api/books/nope/context?kind=summary").first == 404);
}

TEST_CASE("context backend failure gives 502 with placeholder text") {
    const Service svc(demo::world(), ServerConfig{0, demo::dir(), 100},
                      std::make_shared<ContextService>(std::make_shared<FailingBackend>(), std::nullopt));
    const Response r = svc.handle("/api/books/pg100/context", {{"kind", "summary"}});
    CHECK(r.status == 502);
    const json body = json::parse(r.body);
    CHECK_FALSE(body["text"].get<std::string>().empty());
    CHECK(body["error"].get<std::string>().find("model offline") != std::string::npos);
}

TEST_CASE("search") {
    auto [status, s] = fixture().get("/api/search?q=HAMLET");
    REQUIRE(status == 200);
    REQUIRE(s["total"].get<int>() >= 1);
    CHECK(s["matches"][0]["book_id"] == "pg100");
    for (const auto& m : s["matches"]) {
        std::string t = m["title"];
        std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return char(std::tolower(ch)); });
        CHECK(t.find("hamlet") != std::string::npos);
    }
    auto [s2, poetry] = fixture().get("/api/search?category=Poetry");
    CHECK(s2 == 200);
    CHECK(poetry["total"] == 10);
    auto [s3, cat_q] = fixture().get("/api/search?q=italy");
    CHECK(cat_q["total"] == 40);  // substring over categories too
    auto [s4, limited] = fixture().get("/api/search?category=Italy&limit=5");
    CHECK(limited["matches"].size() == 5);
    CHECK(limited["total"] == 40);
    CHECK(fixture().get("/api/search").first == 400);
    CHECK(fixture().get("/api/search?q=a&limit=0").first == 400);
    CHECK(fixture().get("/api/search?q=a&limit=many").first == 400);
    auto [s5, none] = fixture().get("/api/search?q=zzzzzz");
    CHECK(s5 == 200);
    CHECK(none["total"] == 0);
}

TEST_CASE("unknown paths and cors") {
    CHECK(fixture().get("/").first == 404);
    CHECK(fixture().get("/api/nothing").first == 404);
    auto res = fixture().client.Get("/api/layout");
    REQUIRE(res);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(res->get_header_value("Content-Type").find("application/json") == 0);
}

TEST_CASE("requests never change the world and repeat byte for byte") {
    const World before = fixture().service.world();
    const std::vector<std::string> paths{"/api/layout", "/api/map", "/api/rooms/0", "/api/rooms/2/visible", "/api/books/pg150",
                                         "/api/books/pg150/pages/0", "/api/search?q=the", "/api/rooms/77"};
    std::vector<std::pair<int, std::string>> first;
    for (const auto& p : paths) first.push_back(fixture().raw(p));
    for (int round = 0; round < 3; ++round)
        for (std::size_t i = 0; i < paths.size(); ++i) CHECK(fixture().raw(paths[i]) == first[i]);
    CHECK(fixture().service.world() == before);
}
