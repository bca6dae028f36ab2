#pragma once

#include "stacks/catalog.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

namespace stacks {

enum class ContextKind : std::uint8_t { additional_info, summary };

std::string_view to_string(ContextKind k);
std::optional<ContextKind> parse_context_kind(std::string_view s);

inline constexpr int kPromptTemplateVersion = 1;

struct ContextRequest {
    std::string book_id;
    ContextKind kind = ContextKind::summary;
    std::string prompt;
};

struct ContextResult {
    std::string book_id;
    ContextKind kind = ContextKind::summary;
    std::string text;
    std::string backend;  // "mock" or "http"
    bool cached = false;
    std::string fetched_at;  // UTC, ISO 8601
};

/// Completion failure; the message comes from the backend.
class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ContextRequest make_request(const BookRecord& book, ContextKind kind);

/// Deterministic stand-in for a completion model: a fixed template plus a sentence derived from the
/// prompt's digest. Summary prompts yield "Summary of {title} by {author}. ...".
std::string mock_completion(std::string_view prompt);

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual std::string name() const = 0;
    /// Throws BackendError on failure.
    virtual std::string complete(const std::string& prompt) = 0;
};

class MockBackend : public CompletionBackend {
public:
    std::string name() const override { return "mock"; }
    std::string complete(const std::string& prompt) override;
    long calls() const { return calls_.load(); }

private:
    std::atomic<long> calls_{0};
};

/// POSTs {"prompt": ...} to `url` and reads {"text": ...} (or {"completion": ...}) back. The bearer
/// token is read from the environment variable named by `token_env` at construction.
class HttpBackend : public CompletionBackend {
public:
    explicit HttpBackend(std::string url, std::string token_env = "STACKS_CONTEXT_TOKEN", int timeout_s = 30);
    std::string name() const override { return "http"; }
    std::string complete(const std::string& prompt) override;

private:
    std::string url_;
    std::string token_;
    int timeout_s_;
};

/// One JSON file per (book id, kind, template version). Writes go through a temp file and rename.
class ContextCache {
public:
    explicit ContextCache(std::filesystem::path dir);
    std::optional<ContextResult> get(const std::string& book_id, ContextKind kind) const;
    void put(const ContextResult& result) const;
    std::filesystem::path path_for(const std::string& book_id, ContextKind kind) const;

private:
    std::filesystem::path dir_;
};

/// Context lookups with caching. Concurrent misses on the same key reach the backend once.
class ContextService {
public:
    ContextService(std::shared_ptr<CompletionBackend> backend, std::optional<ContextCache> cache);

    /// Throws BackendError when the backend fails; the cache is left untouched then.
    ContextResult get(const BookRecord& book, ContextKind kind);

    const CompletionBackend& backend() const { return *backend_; }

private:
    std::mutex& key_mutex(const std::string& key);

    std::shared_ptr<CompletionBackend> backend_;
    std::optional<ContextCache> cache_;
    std::map<std::string, ContextResult> memory_;  // used when no cache directory is configured
    std::mutex table_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> key_mutexes_;
};

std::string utc_timestamp();

}  // namespace stacks
