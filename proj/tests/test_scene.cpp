#include "oracles.hpp"

#include "stacks/errors.hpp"
#include "stacks/scene.hpp"
#include "stacks/world.hpp"

#include <doctest.h>

#include <random>

using namespace stacks;

namespace {

Category make_category(const std::string& name, int n) {
    Category c{name, {}};
    for (int i = 0; i < n; ++i) c.books.push_back(BookRecord{name + "-" + std::to_string(i), "Book " + std::to_string(i), "a", 1900, name, "", 0});
    return c;
}

Layout demo_layout() { return generate_layout({make_category("Harvard Classics", 120), make_category("Italy", 40), make_category("Poetry", 10)}, {}, 42); }

Layout star(int leaves) {
    Layout l;
    for (int i = 0; i <= leaves; ++i) {
        RoomPlan r;
        r.id = i;
        l.rooms.push_back(r);
    }
    for (int i = 1; i <= leaves; ++i) l.connections.push_back({i - 1, 0, i, ConnectionKind::extra, Direction::east, 0, {}, {}});
    return l;
}

std::size_t count_kind(const std::vector<Primitive>& ps, PrimitiveKind k) {
    return std::size_t(std::count_if(ps.begin(), ps.end(), [k](const Primitive& p) { return p.kind == k; }));
}

}  // namespace

TEST_CASE("text height") {
    CHECK(compute_text_height(32, 1.0) == 0.032);
    CHECK(compute_text_height(0, 5.0) == 0.0);
    CHECK(compute_text_height(23, 2.0) == doctest::Approx(0.046));
    for (double d : {0.5, 1.0, 2.0}) CHECK(compute_text_height(23, d) == doctest::Approx(d * compute_text_height(23, 1.0)));
    static_assert(compute_text_height(32, 1.0) == 0.032);
}

TEST_CASE("ergonomics defaults are valid") {
    CHECK(validate_ergonomics({}).empty());
    ErgonomicsConfig small;
    small.body_text_dmm = 20;
    CHECK_FALSE(validate_ergonomics(small).empty());
}

TEST_CASE("light count") {
    CHECK(light_count(12.0) == 1);
    CHECK(light_count(9.0) == 1);
    CHECK(light_count(24.0) == 2);
    CHECK(light_count(35.9) == 2);
}

TEST_CASE("demo chunks") {
    const Layout l = demo_layout();
    const auto signs = build_signboards(l);
    const SceneChunk c0 = instantiate_room(l.rooms[0], signs[0], {}, l.params);
    CHECK(count_kind(c0.interior, PrimitiveKind::light) + count_kind(c0.structure, PrimitiveKind::light) == 1);
    // Room 1 has only its two chain doors.
    REQUIRE(l.rooms[1].doors.size() == 2);
    const SceneChunk c1 = instantiate_room(l.rooms[1], signs[1], {}, l.params);
    CHECK(count_kind(c1.structure, PrimitiveKind::door_sign) + count_kind(c1.interior, PrimitiveKind::door_sign) == 2);
    CHECK(c1 == instantiate_room(l.rooms[1], signs[1], {}, l.params));
    CHECK(canonical_dump(wire::to_json(c1)) == canonical_dump(wire::to_json(instantiate_room(l.rooms[1], signs[1], {}, l.params))));
}

TEST_CASE("instantiate_all is independent of the thread count") {
    const Layout l = demo_layout();
    const auto signs = build_signboards(l);
    CHECK(instantiate_all(l, signs, {}, {}, 1) == instantiate_all(l, signs, {}, {}, 4));
}

TEST_CASE("visible sets") {
    const Layout l = demo_layout();
    // Room 1 sits in the middle of the chain.
    VisibleSet v = visible_set(l, 1);
    CHECK(v.structure_visible == std::vector<int>{0, 1, 2});
    CHECK(v.interior_visible == std::vector<int>{1});

    Layout single;
    single.rooms.push_back(RoomPlan{});
    v = visible_set(single, 0);
    CHECK(v.structure_visible == std::vector<int>{0});
    CHECK(v.interior_visible == std::vector<int>{0});

    CHECK(visible_set(star(4), 0).structure_visible.size() == 5);
    CHECK(visible_set(star(4), 3).structure_visible == std::vector<int>{0, 3});
    CHECK_THROWS_AS(visible_set(l, 3), InputError);
    CHECK_THROWS_AS(visible_set(l, -1), InputError);
}

TEST_CASE("scene properties over random layouts") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 60; ++round) {
        const auto cats = oracle::random_categories(rng, 1 + int(rng() % 15), 1 + int(rng() % 900));
        const Layout l = generate_layout(cats, {}, rng());
        const auto signs = build_signboards(l);
        BookTitles titles;
        for (const auto& c : cats)
            for (const auto& b : c.books) titles[b.id] = b.title;
        const auto chunks = instantiate_all(l, signs, titles, {}, 2);
        REQUIRE(chunks.size() == l.rooms.size());

        std::multiset<std::string> spines;
        std::set<std::string> ids;
        std::size_t primitives = 0;
        for (const auto& ch : chunks)
            for (const auto* part : {&ch.structure, &ch.interior})
                for (const auto& p : *part) {
                    ++primitives;
                    ids.insert(p.id);
                    if (p.kind == PrimitiveKind::book_spine) spines.insert(p.book_id);
                    const bool labelled = p.kind == PrimitiveKind::door_sign || p.kind == PrimitiveKind::book_spine ||
                                          p.kind == PrimitiveKind::plaque;
                    CHECK(labelled == (p.text_height_m > 0));
                    if (labelled) {
                        CHECK(p.view_distance_m > 0);
                        CHECK(p.text_height_m >= compute_text_height(23, p.view_distance_m) - 1e-12);
                    }
                }
        CHECK(ids.size() == primitives);  // ids are unique
        std::size_t books = 0;
        for (const auto& c : cats) {
            books += c.books.size();
            for (const auto& b : c.books) CHECK(spines.count(b.id) == 1);
        }
        CHECK(spines.size() == books);

        const auto adj = oracle::adjacency(l.rooms.size(), l.connections);
        for (const auto& r : l.rooms) {
            const VisibleSet v = visible_set(l, r.id);
            std::vector<int> expect{r.id};
            expect.insert(expect.end(), adj[std::size_t(r.id)].begin(), adj[std::size_t(r.id)].end());
            std::sort(expect.begin(), expect.end());
            CHECK(v.structure_visible == expect);
            CHECK(v.interior_visible == std::vector<int>{r.id});
        }
    }
}

TEST_CASE("primitive ids") {
    CHECK(primitive_id(0, PrimitiveKind::floor, 0).size() == 16);
    CHECK(primitive_id(0, PrimitiveKind::floor, 0) != primitive_id(0, PrimitiveKind::floor, 1));
    // FNV-1a 64 reference values
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
