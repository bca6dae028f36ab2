#include "stacks/server.hpp"

#include "stacks/errors.hpp"
#include "stacks/pagination.hpp"
#include "stacks/texts.hpp"

#include <httplib.h>

#include <charconv>

namespace stacks {
namespace {

using json = nlohmann::json;

constexpr int kMaxSearchLimit = 1000;
constexpr std::string_view kContextPlaceholder = "Background information is not available right now. Please try again later.";

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> out;
    while (!path.empty()) {
        const auto slash = path.find('/');
        const auto part = path.substr(0, slash);
        if (!part.empty()) out.push_back(part);
        if (slash == std::string_view::npos) break;
        path.remove_prefix(slash + 1);
    }
    return out;
}

std::optional<long long> parse_int(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

Response ok(const json& j) { return {200, canonical_dump(j)}; }
Response fail(int status, std::string_view message) { return {status, error_body(message)}; }

std::string query_value(const Query& q, const std::string& key) {
    auto it = q.find(key);
    return it == q.end() ? std::string() : it->second;
}

}  // namespace

std::string error_body(std::string_view message) { return canonical_dump(json{{"error", std::string(message)}}); }

Service::Service(World world, ServerConfig config, std::shared_ptr<ContextService> context)
    : world_(std::move(world)), config_(std::move(config)), context_(std::move(context)) {
    chars_per_page_ = config_.chars_per_page > 0 ? config_.chars_per_page : world_.pagination.chars_per_page;
    layout_json_ = canonical_dump(wire::to_json(world_.layout));
    json signs = json::array();
    for (const auto& s : world_.signboards) signs.push_back(wire::to_json(s));
    json map = wire::to_json(world_.map);
    map["signboards"] = std::move(signs);
    map_json_ = canonical_dump(map);
    for (const auto& c : world_.chunks) room_json_.push_back(canonical_dump(wire::to_json(c)));
    for (const auto& r : world_.layout.rooms) visible_json_.push_back(canonical_dump(wire::to_json(visible_set(world_.layout, r.id))));

    std::unordered_map<std::string, int> room_of;
    for (const auto& r : world_.layout.rooms)
        for (const auto& s : r.shelves)
            for (const auto& slot : s.assigned) room_of[slot.book_id] = r.id;
    for (std::size_t i = 0; i < world_.catalog.books.size(); ++i) {
        const auto& b = world_.catalog.books[i];
        books_.emplace(b.id, BookInfo{i, room_of.at(b.id), lower_ascii(b.title), lower_ascii(b.category)});
    }
}

Response Service::handle(std::string_view path, const Query& query) const {
    try {
        const auto parts = split_path(path);
        if (parts.size() == 1 && parts[0] == "healthz") return ok({{"status", "ok"}});
        if (parts.empty() || parts[0] != "api") return fail(404, "no such endpoint");

        if (parts.size() == 2 && parts[1] == "layout") return {200, layout_json_};
        if (parts.size() == 2 && parts[1] == "map") return {200, map_json_};
        if (parts.size() == 2 && parts[1] == "search") return search(query);

        if (parts.size() >= 3 && parts[1] == "rooms") {
            const auto id = parse_int(parts[2]);
            if (!id) return fail(400, "room id must be an integer");
            if (*id < 0 || *id >= static_cast<long long>(room_json_.size())) return fail(404, "unknown room " + std::string(parts[2]));
            const auto i = static_cast<std::size_t>(*id);
            if (parts.size() == 3) return {200, room_json_[i]};
            if (parts.size() == 4 && parts[3] == "visible") return {200, visible_json_[i]};
            return fail(404, "no such endpoint");
        }

        if (parts.size() >= 3 && parts[1] == "books") {
            auto it = books_.find(std::string(parts[2]));
            if (it == books_.end()) return fail(404, "unknown book " + std::string(parts[2]));
            if (parts.size() == 3) return book(it->second);
            if (parts.size() == 5 && parts[3] == "pages") return page(it->second, parts[4]);
            if (parts.size() == 4 && parts[3] == "context") return context(it->second, query);
            return fail(404, "no such endpoint");
        }
        return fail(404, "no such endpoint");
    } catch (const std::exception& e) {
        return fail(500, e.what());
    }
}

std::shared_ptr<const std::vector<std::string>> Service::pages_of(const BookInfo& b) const {
    const auto& rec = world_.catalog.books[b.index];
    {
        std::lock_guard lock(pages_mutex_);
        if (auto it = pages_.find(rec.id); it != pages_.end()) return it->second;
    }
    std::shared_ptr<const std::vector<std::string>> pages;
    try {
        const auto text = load_book_text(rec, config_.text_root);
        pages = std::make_shared<const std::vector<std::string>>(paginate_text(text ? *text : std::string(), chars_per_page_));
    } catch (const InputError&) {
        return nullptr;
    }
    std::lock_guard lock(pages_mutex_);
    return pages_.emplace(rec.id, std::move(pages)).first->second;
}

Response Service::book(const BookInfo& b) const {
    const auto& rec = world_.catalog.books[b.index];
    int total = 1;
    if (auto pages = pages_of(b))
        total = static_cast<int>(pages->size());
    else if (auto it = world_.pagination.pages.find(rec.id); it != world_.pagination.pages.end())
        total = it->second;
    return ok({{"id", rec.id},
               {"title", rec.title},
               {"author", rec.author},
               {"publication_year", rec.year},
               {"category", rec.category},
               {"room_id", b.room_id},
               {"total_pages", total},
               {"text_length", rec.text_length}});
}

Response Service::page(const BookInfo& b, std::string_view n) const {
    const auto index = parse_int(n);
    if (!index) return fail(400, "page number must be an integer");
    auto pages = pages_of(b);
    const auto& rec = world_.catalog.books[b.index];
    if (!pages) return fail(404, "text of book " + rec.id + " is not available");
    if (*index < 0 || *index >= static_cast<long long>(pages->size()))
        return fail(404, "book " + rec.id + " has no page " + std::string(n));
    return ok({{"book_id", rec.id},
               {"index", *index},
               {"text", (*pages)[static_cast<std::size_t>(*index)]},
               {"total_pages", pages->size()}});
}

Response Service::context(const BookInfo& b, const Query& query) const {
    const std::string kind_text = query_value(query, "kind");
    const auto kind = parse_context_kind(kind_text);
    if (!kind) return fail(400, "kind must be summary or additional_info");
    const auto& rec = world_.catalog.books[b.index];
    if (!context_) return {502, canonical_dump(json{{"error", "no context backend configured"}, {"book_id", rec.id}, {"kind", kind_text}, {"text", kContextPlaceholder}})};
    try {
        const ContextResult r = context_->get(rec, *kind);
        return ok({{"book_id", r.book_id},
                   {"kind", to_string(r.kind)},
                   {"text", r.text},
                   {"backend", r.backend},
                   {"cached", r.cached},
                   {"fetched_at", r.fetched_at}});
    } catch (const std::exception& e) {
        return {502, canonical_dump(json{{"error", e.what()}, {"book_id", rec.id}, {"kind", kind_text}, {"text", kContextPlaceholder}})};
    }
}

Response Service::search(const Query& query) const {
    const std::string q = lower_ascii(query_value(query, "q"));
    const std::string category = lower_ascii(query_value(query, "category"));
    if (q.empty() && category.empty()) return fail(400, "q or category is required");
    int limit = config_.search_limit;
    if (auto it = query.find("limit"); it != query.end()) {
        const auto v = parse_int(it->second);
        if (!v || *v < 1 || *v > kMaxSearchLimit) return fail(400, "limit must be an integer in [1, 1000]");
        limit = static_cast<int>(*v);
    }
    json matches = json::array();
    int total = 0;
    for (const auto& rec : world_.catalog.books) {
        const BookInfo& b = books_.at(rec.id);
        if (!category.empty() && b.category_lower != category) continue;
        if (!q.empty() && b.title_lower.find(q) == std::string::npos && b.category_lower.find(q) == std::string::npos) continue;
        ++total;
        if (static_cast<int>(matches.size()) < limit)
            matches.push_back({{"book_id", rec.id}, {"title", rec.title}, {"category", rec.category}, {"room_id", b.room_id}});
    }
    return ok({{"query", query_value(query, "q")}, {"category", query_value(query, "category")}, {"total", total}, {"matches", std::move(matches)}});
}

HttpServer::HttpServer(const Service& service, std::string host, int port) : server_(std::make_unique<httplib::Server>()) {
    server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}, {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                  {"Access-Control-Allow-Headers", "Content-Type"}});
    server_->Get(R"(/.*)", [&service](const httplib::Request& req, httplib::Response& res) {
        Query q;
        for (const auto& [k, v] : req.params) q.emplace(k, v);  // first value wins
        const Response r = service.handle(req.path, q);
        res.status = r.status;
        res.set_content(r.body, "application/json; charset=utf-8");
    });
    server_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
    } else {
        port_ = server_->bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) throw InputError("cannot listen on " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

HttpServer::~HttpServer() {
    stop();
    if (thread_.joinable()) thread_.join();
}

void HttpServer::wait() {
    if (thread_.joinable()) thread_.join();
}

void HttpServer::stop() { server_->stop(); }

}  // namespace stacks
