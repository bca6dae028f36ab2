#include "stacks/context.hpp"

#include "stacks/errors.hpp"
#include "stacks/scene.hpp"
#include "stacks/texts.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>

namespace stacks {
namespace {

using json = nlohmann::json;

constexpr std::string_view kSummaryPrefix = "Summarize the book ";
constexpr std::string_view kInfoPrefix = "Provide background information about the book ";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string digest_sentence(std::string_view prompt) {
    const std::string h = hex64(fnv1a64(prompt));
    return "Catalog reference " + h.substr(0, 4) + "-" + h.substr(4, 4) + " records this entry for further reading.";
}

std::string safe_name(std::string_view id) {
    std::string out;
    for (char c : id.substr(0, 64)) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
    return out;
}

}  // namespace

std::string_view to_string(ContextKind k) { return k == ContextKind::summary ? "summary" : "additional_info"; }

std::optional<ContextKind> parse_context_kind(std::string_view s) {
    if (s == "summary") return ContextKind::summary;
    if (s == "additional_info") return ContextKind::additional_info;
    return std::nullopt;
}

ContextRequest make_request(const BookRecord& book, ContextKind kind) {
    std::string prompt;
    if (kind == ContextKind::summary)
        prompt = std::string(kSummaryPrefix) + book.title + " by " + book.author + ".";
    else
        prompt = std::string(kInfoPrefix) + book.title + " by " + book.author + " (" + std::to_string(book.year) + ").";
    return {book.id, kind, std::move(prompt)};
}

std::string mock_completion(std::string_view prompt) {
    if (prompt.empty()) return "No question was asked, so there is nothing to add about this book yet.";
    if (prompt.starts_with(kSummaryPrefix) && prompt.ends_with(".")) {
        const auto subject = prompt.substr(kSummaryPrefix.size(), prompt.size() - kSummaryPrefix.size() - 1);
        return "Summary of " + std::string(subject) + ". " + digest_sentence(prompt);
    }
    if (prompt.starts_with(kInfoPrefix) && prompt.ends_with(".")) {
        const auto subject = prompt.substr(kInfoPrefix.size(), prompt.size() - kInfoPrefix.size() - 1);
        return "Background on " + std::string(subject) + ". " + digest_sentence(prompt);
    }
    return "Notes on the request. " + digest_sentence(prompt);
}

std::string MockBackend::complete(const std::string& prompt) {
    ++calls_;
    return mock_completion(prompt);
}

HttpBackend::HttpBackend(std::string url, std::string token_env, int timeout_s) : url_(std::move(url)), timeout_s_(timeout_s) {
    if (const char* t = std::getenv(token_env.c_str())) token_ = t;
}

std::string HttpBackend::complete(const std::string& prompt) {
    const auto scheme_end = url_.find("://");
    if (scheme_end == std::string::npos) throw BackendError("context endpoint must be an absolute URL: " + url_);
    const auto path_start = url_.find('/', scheme_end + 3);
    const std::string origin = url_.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url_.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_s_);
    client.set_read_timeout(timeout_s_);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    const auto res = client.Post(path, headers, json{{"prompt", prompt}}.dump(), "application/json");
    if (!res) throw BackendError("context backend unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw BackendError("context backend returned status " + std::to_string(res->status));
    try {
        const auto body = json::parse(res->body);
        for (const char* key : {"text", "completion"})
            if (body.contains(key) && body[key].is_string() && !body[key].get<std::string>().empty()) return body[key].get<std::string>();
    } catch (const json::exception&) {
    }
    throw BackendError("context backend response has no text");
}

ContextCache::ContextCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::filesystem::path ContextCache::path_for(const std::string& book_id, ContextKind kind) const {
    return dir_ / (safe_name(book_id) + "-" + hex64(fnv1a64(book_id)).substr(0, 8) + "." + std::string(to_string(kind)) + ".v" +
                   std::to_string(kPromptTemplateVersion) + ".json");
}

std::optional<ContextResult> ContextCache::get(const std::string& book_id, ContextKind kind) const {
    const auto path = path_for(book_id, kind);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
    try {
        const auto j = json::parse(read_file(path));
        if (j.at("book_id").get<std::string>() != book_id) return std::nullopt;
        ContextResult r{book_id, kind, j.at("text").get<std::string>(), j.at("backend").get<std::string>(), true,
                        j.at("fetched_at").get<std::string>()};
        if (r.text.empty()) return std::nullopt;
        return r;
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entries count as misses and get rewritten
    }
}

void ContextCache::put(const ContextResult& r) const {
    const json j{{"book_id", r.book_id}, {"kind", to_string(r.kind)}, {"text", r.text}, {"backend", r.backend}, {"fetched_at", r.fetched_at},
                 {"template_version", kPromptTemplateVersion}};
    write_file_atomic(path_for(r.book_id, r.kind), j.dump(2) + "\n");
}

ContextService::ContextService(std::shared_ptr<CompletionBackend> backend, std::optional<ContextCache> cache)
    : backend_(std::move(backend)), cache_(std::move(cache)) {}

std::mutex& ContextService::key_mutex(const std::string& key) {
    std::lock_guard lock(table_mutex_);
    auto& slot = key_mutexes_[key];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

ContextResult ContextService::get(const BookRecord& book, ContextKind kind) {
    const std::string key = book.id + '\x1f' + std::string(to_string(kind));
    std::lock_guard lock(key_mutex(key));
    if (cache_) {
        if (auto hit = cache_->get(book.id, kind)) return *hit;
    } else {
        std::lock_guard table(table_mutex_);
        if (auto it = memory_.find(key); it != memory_.end()) {
            ContextResult r = it->second;
            r.cached = true;
            return r;
        }
    }

    const ContextRequest req = make_request(book, kind);
    std::string text = backend_->complete(req.prompt);
    if (text.empty()) throw BackendError("context backend returned an empty text");
    ContextResult r{book.id, kind, std::move(text), backend_->name(), false, utc_timestamp()};
    if (cache_) {
        cache_->put(r);
    } else {
        std::lock_guard table(table_mutex_);
        memory_[key] = r;
    }
    return r;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace stacks
