#pragma once

#include "stacks/context.hpp"
#include "stacks/world.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace httplib {
class Server;
}

namespace stacks {

struct ServerConfig {
    int chars_per_page = 0;  // 0 = use the world's value
    std::filesystem::path text_root = ".";
    int search_limit = 100;
};

struct Response {
    int status = 200;
    std::string body;
};

using Query = std::map<std::string, std::string>;

/// The read-only HTTP API over a loaded world, independent of the transport.
class Service {
public:
    Service(World world, ServerConfig config, std::shared_ptr<ContextService> context);

    /// Routes a GET request. Never throws; failures become JSON error bodies.
    Response handle(std::string_view path, const Query& query) const;

    const World& world() const { return world_; }
    int chars_per_page() const { return chars_per_page_; }

private:
    struct BookInfo {
        std::size_t index;  // into world_.catalog.books
        int room_id;
        std::string title_lower;
        std::string category_lower;
    };

    Response book(const BookInfo& b) const;
    Response page(const BookInfo& b, std::string_view n) const;
    Response context(const BookInfo& b, const Query& query) const;
    Response search(const Query& query) const;
    /// Pages of a book's text; nullptr when its local text file is gone.
    std::shared_ptr<const std::vector<std::string>> pages_of(const BookInfo& b) const;

    World world_;
    ServerConfig config_;
    std::shared_ptr<ContextService> context_;
    int chars_per_page_;
    std::string layout_json_;
    std::string map_json_;
    std::vector<std::string> room_json_;
    std::vector<std::string> visible_json_;
    std::unordered_map<std::string, BookInfo> books_;
    mutable std::mutex pages_mutex_;
    mutable std::unordered_map<std::string, std::shared_ptr<const std::vector<std::string>>> pages_;
};

/// Serves a Service over HTTP on a background thread. Port 0 picks a free port.
class HttpServer {
public:
    HttpServer(const Service& service, std::string host = "127.0.0.1", int port = 8080);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    int port() const { return port_; }
    /// Blocks until stop() is called from another thread or a signal handler.
    void wait();
    void stop();

private:
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

/// Response body for an error status.
std::string error_body(std::string_view message);

}  // namespace stacks
