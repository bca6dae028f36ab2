// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [--quick]   (--quick shrinks the randomized suites tenfold, for development)

#include "demo.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

#include "stacks/cli.hpp"
#include "stacks/pagination.hpp"
#include "stacks/server.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace stacks;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_failures = 0;
int g_scale = 1;  // divisor for randomized suite sizes

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int decimals = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(decimals);
    s << v;
    return s.str();
}

template <class F>
void criterion(const char* name, F&& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++g_failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
}

Outcome determinism() {
    TempDir dir;
    const std::string cat = (demo::dir() / "catalog.csv").string();
    std::string sums[2];
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        const auto t0 = Clock::now();
        std::ostringstream out, err;
        const std::string path = (dir / ("w" + std::to_string(i) + ".json")).string();
        if (run_cli({"generate", cat, "--seed", "42", "-o", path}, out, err) != 0) return {false, "generate failed: " + err.str()};
        worst = std::max(worst, seconds_since(t0));
        sums[i] = sha256_hex(read_file(path));
    }
    // Reference digest recorded on another build machine.
    std::string golden;
    std::ifstream(demo::dir() / "world-seed42.sha256") >> golden;
    const bool ok = sums[0] == sums[1] && sums[0] == golden && worst < 5.0;
    return {ok, "sha256 " + sums[0] + (sums[0] == golden ? " matches" : " differs from") + " the recorded digest, runs identical=" +
                    (sums[0] == sums[1] ? "yes" : "no") + ", slowest run " + fmt(worst, 3) + " s (limit 5 s)"};
}

/// Geometry and conservation share one pass over the random catalogs.
struct SuiteResult {
    Outcome geometry;
    Outcome conservation;
};

SuiteResult geometry_and_conservation() {
    const int runs = 10000 / g_scale;
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> ncat(1, 50), nbooks(1, 2000);
    long overlaps = 0, disconnected = 0, thin_chain = 0, over_budget = 0, failures = 0;
    long lost = 0, duplicated = 0, over_capacity = 0, spine_mismatch = 0;
    long rooms = 0, books_total = 0;
    std::string first_problem;
    const auto t0 = Clock::now();
    for (int run = 0; run < runs; ++run) {
        std::vector<Category> cats;
        const int n = ncat(rng);
        for (int c = 0; c < n; ++c) {
            Category cat{"c" + std::to_string(c), {}};
            const int k = nbooks(rng);
            cat.books.reserve(std::size_t(k));
            for (int b = 0; b < k; ++b) cat.books.push_back({std::to_string(c) + "/" + std::to_string(b), "t", "a", 1900, cat.name, "", 0});
            cats.push_back(std::move(cat));
        }
        GenParams p;
        p.seed = rng();
        Layout l;
        try {
            l = generate_layout(cats, p, p.seed);
        } catch (const std::exception& e) {
            ++failures;
            if (first_problem.empty()) first_problem = "run " + std::to_string(run) + ": " + e.what();
            continue;
        }
        rooms += long(l.rooms.size());
        if (oracle::first_overlap(l)) ++overlaps;
        const auto adj = oracle::adjacency(l.rooms.size(), l.connections);
        if (oracle::bfs_reach(adj, 0) != l.rooms.size()) ++disconnected;
        std::vector<int> degree(l.rooms.size(), 0);
        for (const auto& c : l.connections) {
            ++degree[std::size_t(c.a)], ++degree[std::size_t(c.b)];
            const auto ct = oracle::contact(oracle::box(l.rooms[std::size_t(c.a)].rect), oracle::box(l.rooms[std::size_t(c.b)].rect));
            if (!ct || ct->length() < p.door_width_m - oracle::kEps) ++thin_chain;
        }
        for (const auto& r : l.rooms) {
            const int budget = std::clamp(int(std::floor(2 * (r.rect.w + r.rect.h) / 10 + 1e-9)) + 1, 2, 6);
            if (degree[std::size_t(r.id)] > budget) ++over_budget;
        }

        // Conservation on shelves for every world: each catalog id exactly once, no shelf over capacity.
        std::unordered_map<std::string, int> seen;
        std::size_t expected = 0;
        for (const auto& c : cats) expected += c.books.size();
        books_total += long(expected);
        for (const auto& r : l.rooms)
            for (const auto& s : r.shelves) {
                if (int(s.assigned.size()) > p.shelf_capacity()) ++over_capacity;
                for (const auto& slot : s.assigned) ++seen[slot.book_id];
            }
        for (const auto& c : cats)
            for (const auto& b : c.books) {
                auto it = seen.find(b.id);
                if (it == seen.end()) ++lost;
                else if (it->second > 1) ++duplicated;
            }
        if (seen.size() != expected) ++lost;

        // And through scene chunks for every tenth world (spines are the costly part).
        if (run % 10 == 0) {
            const auto signs = build_signboards(l);
            const auto chunks = instantiate_all(l, signs, {}, {}, 1);
            std::unordered_map<std::string, int> spines;
            for (const auto& ch : chunks)
                for (const auto& prim : ch.interior)
                    if (prim.kind == PrimitiveKind::book_spine) ++spines[prim.book_id];
            bool ok = spines.size() == expected;
            for (const auto& [id, count] : spines) ok = ok && count == 1 && seen.count(id);
            if (!ok) ++spine_mismatch;
        }
    }
    const double secs = seconds_since(t0);
    SuiteResult r;
    const bool geo_ok = !failures && !overlaps && !disconnected && !thin_chain && !over_budget && secs < 600.0;
    r.geometry = {geo_ok, std::to_string(runs) + " catalogs, " + std::to_string(rooms) + " rooms: generation failures=" + std::to_string(failures) +
                              " overlaps=" + std::to_string(overlaps) + " disconnected=" + std::to_string(disconnected) +
                              " doors under width=" + std::to_string(thin_chain) + " over budget=" + std::to_string(over_budget) + ", " +
                              fmt(secs, 1) + " s (limit 600 s)" + (first_problem.empty() ? "" : "; " + first_problem)};
    const bool cons_ok = !failures && !lost && !duplicated && !over_capacity && !spine_mismatch;
    r.conservation = {cons_ok, std::to_string(books_total) + " books in " + std::to_string(runs) + " worlds: lost=" + std::to_string(lost) +
                                   " duplicated=" + std::to_string(duplicated) + " shelves over capacity=" + std::to_string(over_capacity) +
                                   "; spine check on " + std::to_string((runs + 9) / 10) + " worlds, mismatches=" + std::to_string(spine_mismatch)};
    return r;
}

Outcome demo_conservation() {
    // The full pipeline on the demo fixture, spines included.
    const World& w = demo::world();
    std::multiset<std::string> spines;
    for (const auto& ch : w.chunks)
        for (const auto& p : ch.interior)
            if (p.kind == PrimitiveKind::book_spine) spines.insert(p.book_id);
    for (const auto& b : w.catalog.books)
        if (spines.count(b.id) != 1) return {false, "demo book " + b.id + " appears " + std::to_string(spines.count(b.id)) + " times"};
    return {spines.size() == w.catalog.books.size(), ""};
}

Outcome compression() {
    const Catalog cat = demo::catalog();
    const auto cats = group_by_category(cat);
    int worse = 0;
    double with_sum = 0, without_sum = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GenParams on, off;
        off.compress = false;
        const double a = generate_layout(cats, on, seed).bbox.area();
        const double b = generate_layout(cats, off, seed).bbox.area();
        with_sum += a, without_sum += b;
        if (a > b + oracle::kEps) ++worse;
    }
    return {worse == 0, "100 seeds, seeds where compression enlarged the bbox=" + std::to_string(worse) + ", mean area " + fmt(with_sum / 100) +
                            " m2 with vs " + fmt(without_sum / 100) + " m2 without"};
}

Outcome culling() {
    const int worlds = 1000 / g_scale;
    std::mt19937_64 rng(4711);
    long checked = 0, wrong = 0, unsupported = 0;
    for (int i = 0; i < worlds; ++i) {
        const auto cats = oracle::random_categories(rng, 1 + int(rng() % 50), 1 + int(rng() % 2000));
        const Layout l = generate_layout(cats, {}, rng());
        // Independent adjacency: door neighbors read off the rooms, each backed by a touching wall.
        std::vector<std::set<int>> nb(l.rooms.size());
        for (const auto& r : l.rooms)
            for (const auto& d : r.doors)
                if (d.neighbor != kOutside) {
                    nb[std::size_t(r.id)].insert(d.neighbor);
                    const auto ct = oracle::contact(oracle::box(r.rect), oracle::box(l.rooms[std::size_t(d.neighbor)].rect));
                    if (!ct || ct->length() < l.params.door_width_m - oracle::kEps) ++unsupported;
                }
        for (const auto& r : l.rooms) {
            const VisibleSet v = visible_set(l, r.id);
            std::vector<int> expect{r.id};
            expect.insert(expect.end(), nb[std::size_t(r.id)].begin(), nb[std::size_t(r.id)].end());
            std::sort(expect.begin(), expect.end());
            ++checked;
            if (v.structure_visible != expect || v.interior_visible != std::vector<int>{r.id}) ++wrong;
        }
    }
    return {wrong == 0 && unsupported == 0, std::to_string(checked) + " rooms in " + std::to_string(worlds) + " worlds, mismatches=" +
                                                std::to_string(wrong) + ", doors without a shared wall=" + std::to_string(unsupported)};
}

std::string random_raw_text(std::mt19937_64& rng, std::size_t bytes) {
    static const char* pieces[] = {"word ", "the ", "a", "\r\n", "\n", "\t", "  ", "\xC3\xA9t\xC3\xA9 ", "\xE2\x80\x94", "\xF0\x9F\x93\x96", ".", "x"};
    std::string s;
    while (s.size() < bytes) s += pieces[rng() % std::size(pieces)];
    return s;
}

Outcome pagination() {
    std::mt19937_64 rng(1234);
    std::vector<std::string> texts{"", "one single line without a break", std::string(1 << 20, 'q')};
    std::uniform_int_distribution<std::size_t> size(0, 1 << 20);
    while (texts.size() < 100) {
        // Sizes spread over the whole range up to 1 MB, small ones included.
        const std::size_t n = texts.size() % 4 == 0 ? size(rng) : size(rng) >> (rng() % 16);
        texts.push_back(random_raw_text(rng, n));
    }
    std::size_t max_bytes = 0, pages_total = 0;
    int bad = 0;
    for (const auto& raw : texts) {
        const std::string text = normalize_text(raw);
        max_bytes = std::max(max_bytes, text.size());
        const int limit = rng() % 3 == 0 ? 1800 : 1 + int(rng() % 4000);
        const auto pages = paginate_text(text, limit);
        pages_total += pages.size();
        bool ok = oracle::concat(pages) == text && !pages.empty() && int(pages.size()) == page_count(text, limit);
        for (const auto& p : pages) ok = ok && oracle::code_points(p) <= std::size_t(limit);
        if (!ok) ++bad;
    }
    return {bad == 0, "100 texts (largest " + std::to_string(max_bytes) + " bytes, " + std::to_string(pages_total) + " pages), failures=" +
                          std::to_string(bad)};
}

Outcome ergonomics() {
    const double h32 = compute_text_height(32, 1.0);
    bool ok = h32 == 0.032;
    std::string detail = "h(32 dmm, 1 m)=" + fmt(h32, 6) + " m";
    const double base = compute_text_height(23, 1.0);
    for (double d : {0.5, 1.0, 2.0}) {
        const double h = compute_text_height(23, d);
        ok = ok && std::abs(h - d * base) <= 1e-15;
        detail += ", h(23, " + fmt(d, 1) + ")=" + fmt(h, 6);
    }
    return {ok, detail};
}

Outcome scale() {
    TempDir dir;
    {
        std::mt19937_64 rng(70000);
        std::ofstream csv(dir / "big.csv");
        csv << "id,title,author,year,category,text_uri\n";
        for (int i = 0; i < 70000; ++i)
            csv << "g" << i << ",Title " << i << ",Author " << i % 977 << "," << 1500 + i % 500 << ",Category " << rng() % 200 << ",\n";
    }
    const auto t0 = Clock::now();
    std::ostringstream out, err;
    if (run_cli({"generate", (dir / "big.csv").string(), "-o", (dir / "big.json").string()}, out, err) != 0)
        return {false, "generate failed: " + err.str()};
    const double gen_secs = seconds_since(t0);

    World w = parse_world(read_file(dir / "big.json"));
    const std::size_t rooms = w.layout.rooms.size();
    const Service svc(std::move(w), ServerConfig{0, dir.path(), 100}, nullptr);
    HttpServer server(svc, "127.0.0.1", 0);
    httplib::Client client("127.0.0.1", server.port());
    double worst_ms = 0.0;
    int bad = 0;
    for (std::size_t r = 0; r < rooms; ++r) {
        const auto t1 = Clock::now();
        auto res = client.Get("/api/rooms/" + std::to_string(r));
        worst_ms = std::max(worst_ms, seconds_since(t1) * 1000.0);
        if (!res || res->status != 200) ++bad;
    }
    const bool ok = rooms == 200 && gen_secs < 60.0 && worst_ms < 50.0 && bad == 0;
    return {ok, "70000 books, " + std::to_string(rooms) + " rooms generated in " + fmt(gen_secs) + " s (limit 60 s); slowest of " +
                    std::to_string(rooms) + " /api/rooms requests " + fmt(worst_ms) + " ms (limit 50 ms), errors=" + std::to_string(bad)};
}

Outcome server_contract() {
    const World& w = demo::world();
    auto backend = std::make_shared<MockBackend>();
    const Service svc(w, ServerConfig{0, demo::dir(), 100}, std::make_shared<ContextService>(backend, std::nullopt));
    HttpServer server(svc, "127.0.0.1", 0);
    httplib::Client client("127.0.0.1", server.port());

    struct Case {
        std::string path;
        int status;
    };
    std::vector<Case> cases{{"/healthz", 200},
                            {"/api/layout", 200},
                            {"/api/map", 200},
                            {"/api/rooms/0", 200},
                            {"/api/rooms/9999", 404},
                            {"/api/rooms/x", 400},
                            {"/api/rooms/2/visible", 200},
                            {"/api/rooms/9999/visible", 404},
                            {"/api/rooms/x/visible", 400},
                            {"/api/books/pg100", 200},
                            {"/api/books/none", 404},
                            {"/api/books/pg100/pages/0", 200},
                            {"/api/books/pg100/pages/100000", 404},
                            {"/api/books/pg100/pages/x", 400},
                            {"/api/books/none/pages/0", 404},
                            {"/api/books/pg100/context?kind=summary", 200},
                            {"/api/books/pg100/context?kind=additional_info", 200},
                            {"/api/books/pg100/context?kind=x", 400},
                            {"/api/books/none/context?kind=summary", 404},
                            {"/api/search?q=hamlet", 200},
                            {"/api/search?category=Poetry", 200},
                            {"/api/search", 400},
                            {"/api/search?q=a&limit=-3", 400},
                            {"/api/unknown", 404}};
    for (std::size_t r = 0; r < w.layout.rooms.size(); ++r) cases.push_back({"/api/rooms/" + std::to_string(r), 200});

    int wrong = 0, unstable = 0;
    std::string first;
    std::vector<std::string> bodies;
    for (int round = 0; round < 2; ++round)
        for (std::size_t i = 0; i < cases.size(); ++i) {
            auto res = client.Get(cases[i].path);
            const int status = res ? res->status : -1;
            if (status != cases[i].status) {
                ++wrong;
                if (first.empty()) first = cases[i].path + " gave " + std::to_string(status);
            }
            bool is_json = false;
            if (res) is_json = nlohmann::json::accept(res->body);
            if (!is_json) ++wrong;
            const bool volatile_body = cases[i].path.find("/context") != std::string::npos;  // cached flag and fetch time
            if (round == 0) bodies.push_back(res ? res->body : "");
            else if (!volatile_body && res && res->body != bodies[i]) ++unstable;
        }
    const bool unchanged = svc.world() == w;
    // Pagination round trip for every demo book through the API.
    int text_mismatch = 0;
    for (const auto& b : w.catalog.books) {
        std::string joined;
        for (int n = 0; n < w.pagination.pages.at(b.id); ++n) {
            auto res = client.Get("/api/books/" + b.id + "/pages/" + std::to_string(n));
            if (res && res->status == 200) joined += nlohmann::json::parse(res->body)["text"].get<std::string>();
        }
        if (joined != *load_book_text(b, demo::dir())) ++text_mismatch;
    }
    const bool ok = wrong == 0 && unstable == 0 && unchanged && text_mismatch == 0;
    return {ok, std::to_string(cases.size()) + " requests x2: wrong status or body=" + std::to_string(wrong) +
                    ", changed between rounds=" + std::to_string(unstable) + ", world unchanged=" + (unchanged ? "yes" : "no") +
                    ", demo texts not reassembled=" + std::to_string(text_mismatch) + (first.empty() ? "" : "; " + first)};
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) g_scale = 10;

    criterion("determinism", determinism);
    SuiteResult suite;
    bool suite_ran = false;
    auto run_suite = [&] {
        if (!suite_ran) suite = geometry_and_conservation();
        suite_ran = true;
    };
    criterion("geometry", [&] {
        run_suite();
        return suite.geometry;
    });
    criterion("conservation", [&] {
        run_suite();
        Outcome o = suite.conservation;
        const Outcome d = demo_conservation();
        o.pass = o.pass && d.pass;
        o.detail += d.pass ? "; demo world spines match the catalog" : "; " + d.detail;
        return o;
    });
    criterion("compression", compression);
    criterion("culling", culling);
    criterion("pagination", pagination);
    criterion("ergonomics", ergonomics);
    criterion("scale", scale);
    criterion("server-contract", server_contract);
    std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed") << std::endl;
    return g_failures == 0 ? 0 : 1;
}
