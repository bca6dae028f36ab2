#include "stacks/cli.hpp"

#include "stacks/errors.hpp"
#include "stacks/server.hpp"
#include "stacks/texts.hpp"
#include "stacks/world.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

namespace stacks {
namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested.store(true); }

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

CatalogFormat format_for(const fs::path& path) {
    return path.extension() == ".jsonl" ? CatalogFormat::jsonl : CatalogFormat::csv;
}

Catalog load_catalog(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw InputError("catalog not found: " + path.string());
    return parse_catalog(read_file(path), format_for(path), path.filename().string());
}

World load_world(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw InputError("world file not found: " + path.string());
    try {
        return parse_world(read_file(path));
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string fixed6(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << v;
    return s.str();
}

void add_param_options(CLI::App& cmd, GenParams& p) {
    cmd.add_option("--seed", p.seed, "Decor seed");
    cmd.add_option("--shelf-rows", p.shelf_rows, "Rows per shelf");
    cmd.add_option("--slots-per-row", p.slots_per_row, "Books per shelf row");
    cmd.add_option("--unit-width", p.unit_width_m, "Shelf unit width (m)");
    cmd.add_option("--shelf-depth", p.shelf_depth_m, "Shelf depth (m)");
    cmd.add_option("--corridor-width", p.corridor_width_m, "Corridor between shelf rows (m)");
    cmd.add_option("--wall-margin", p.wall_margin_m, "Clearance at the short walls (m)");
    cmd.add_option("--min-room-length", p.min_room_length_m, "Minimum room width along its heading (m)");
    cmd.add_option("--room-height", p.room_height_m, "Room height (m)");
    cmd.add_option("--door-width", p.door_width_m, "Door opening (m)");
    cmd.add_option("--chars-per-page", p.chars_per_page, "Reader page size in code points");
    cmd.add_flag("--ccw", p.ccw, "Turn the spiral counter-clockwise");
    cmd.add_flag("!--no-compress", p.compress, "Disable inward compression");
}

int run_generate(const fs::path& catalog_path, const fs::path& out_path, std::optional<fs::path> text_root,
                 const GenParams& params, unsigned threads, std::ostream& out) {
    const Catalog catalog = load_catalog(catalog_path);
    BuildOptions options;
    options.text_root = text_root ? *text_root : catalog_path.parent_path();
    if (options.text_root.empty()) options.text_root = ".";
    options.threads = threads;
    const World w = build_world(catalog, params, options);
    const std::string text = export_world(w);
    write_file_atomic(out_path, text);
    out << "rooms=" << w.layout.rooms.size() << " connections=" << w.layout.connections.size()
        << " books=" << w.catalog.books.size() << " bbox_area=" << fixed6(w.layout.bbox.area())
        << " sha256=" << sha256_hex(text) << " out=" << out_path.string() << "\n";
    return kExitOk;
}

int run_validate(const fs::path& catalog_path, std::ostream& out, std::ostream& err) {
    const Catalog catalog = load_catalog(catalog_path);
    const ValidationReport report = validate_catalog(catalog);
    int warnings = 0;
    int errors = 0;
    for (const auto& f : report) {
        (f.severity == Severity::error ? errors : warnings)++;
        err << (f.severity == Severity::error ? "error" : "warning") << ": " << (f.book_id.empty() ? "-" : f.book_id)
            << ": " << f.message << "\n";
    }
    std::size_t categories = 0;
    if (!catalog.books.empty()) categories = group_by_category(catalog).size();
    out << "books=" << catalog.books.size() << " categories=" << categories << " warnings=" << warnings
        << " errors=" << errors << "\n";
    return errors == 0 ? kExitOk : kExitInput;
}

int run_stats(const fs::path& world_path, std::ostream& out) {
    const World w = load_world(world_path);
    const Layout& l = w.layout;
    std::vector<int> degree(l.rooms.size(), 0);
    for (const auto& c : l.connections) {
        ++degree[static_cast<std::size_t>(c.a)];
        ++degree[static_cast<std::size_t>(c.b)];
    }
    out << "room\tcategory\tbooks\tarea_m2\tdegree\n";
    std::size_t books = 0;
    double area = 0.0;
    for (const auto& r : l.rooms) {
        out << r.id << '\t' << r.category << '\t' << r.book_count() << '\t' << fixed6(r.area()) << '\t'
            << degree[static_cast<std::size_t>(r.id)] << '\n';
        books += r.book_count();
        area += r.area();
    }
    out << "total\t" << l.rooms.size() << '\t' << books << '\t' << fixed6(area) << '\t' << l.connections.size() << '\n';
    out << "bbox_area_m2\t" << fixed6(l.bbox.area()) << '\n';
    out << "fill_ratio\t" << fixed6(area / l.bbox.area()) << '\n';
    return kExitOk;
}

struct ServeOptions {
    fs::path world;
    std::string host = "127.0.0.1";
    int port = 8080;
    int chars_per_page = 0;
    std::string backend = "mock";
    std::string context_url;
    std::optional<fs::path> cache_dir;
    fs::path text_root;
};

int run_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
    World world = load_world(o.world);
    std::shared_ptr<CompletionBackend> backend;
    if (o.backend == "mock") {
        backend = std::make_shared<MockBackend>();
    } else {
        if (o.context_url.empty()) throw InputError("--context-backend http needs --context-url");
        backend = std::make_shared<HttpBackend>(o.context_url);
    }
    std::optional<ContextCache> cache;
    if (o.cache_dir) cache.emplace(*o.cache_dir);
    auto context = std::make_shared<ContextService>(backend, std::move(cache));

    ServerConfig config;
    config.chars_per_page = o.chars_per_page;
    config.text_root = o.text_root.empty() ? o.world.parent_path() : o.text_root;
    if (config.text_root.empty()) config.text_root = ".";
    const Service service(std::move(world), config, context);
    HttpServer server(service, o.host, o.port);
    out << "listening on http://" << o.host << ":" << server.port() << std::endl;

    g_stop_requested.store(false);
    std::signal(SIGINT, on_stop_signal);
    std::signal(SIGTERM, on_stop_signal);
    while (!g_stop_requested.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    err << "shutting down\n";
    server.stop();
    server.wait();
    return kExitOk;
}

/// Splices config file values in right after the subcommand so that later command-line flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
    }
    if (!config || args.empty()) return args;
    std::vector<std::string> out{args.front()};
    for (auto& a : config_arguments(*config)) out.push_back(std::move(a));
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

}  // namespace

std::vector<std::string> config_arguments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config file not found: " + path);
    std::vector<std::string> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InputError(path + ":" + std::to_string(n) + ": expected key=value");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        out.push_back("--" + key + "=" + trim(std::string_view(t).substr(eq + 1)));
    }
    return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate and serve procedurally laid out library worlds", "stacks"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;  // consumed by expand_config

    GenParams params;
    std::string catalog_path;
    std::string out_path = "world.json";
    std::string text_root;
    unsigned threads = 0;
    auto* gen = app.add_subcommand("generate", "Build a world file from a catalog");
    gen->add_option("catalog", catalog_path, "Catalog file (.csv or .jsonl)")->required();
    gen->add_option("-o,--out", out_path, "World file to write");
    gen->add_option("--text-root", text_root, "Directory relative text_uri values resolve against (default: catalog directory)");
    gen->add_option("--threads", threads, "Chunk instantiation workers (0 = all cores)");
    gen->add_option("--config", config_path, "key=value file with defaults for these flags");
    add_param_options(*gen, params);

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "Check a catalog and report findings");
    val->add_option("catalog", validate_path, "Catalog file (.csv or .jsonl)")->required();
    val->add_option("--config", config_path, "key=value file with defaults for these flags");

    std::string stats_path;
    auto* stats = app.add_subcommand("stats", "Per-room statistics of a world file");
    stats->add_option("world", stats_path, "World file")->required();
    stats->add_option("--config", config_path, "key=value file with defaults for these flags");

    ServeOptions serve_opts;
    std::string serve_cache;
    std::string serve_root;
    std::string serve_world;
    auto* serve = app.add_subcommand("serve", "Serve a world file over HTTP");
    serve->add_option("--world", serve_world, "World file")->required();
    serve->add_option("--host", serve_opts.host, "Interface to bind");
    serve->add_option("--port", serve_opts.port, "Port, 0 picks a free one")->check(CLI::Range(0, 65535));
    serve->add_option("--chars-per-page", serve_opts.chars_per_page, "Page size override")->check(CLI::PositiveNumber);
    serve->add_option("--context-backend", serve_opts.backend, "Completion backend")->check(CLI::IsMember({"mock", "http"}));
    serve->add_option("--context-url", serve_opts.context_url, "Endpoint of the http backend");
    serve->add_option("--cache-dir", serve_cache, "Directory for cached context results");
    serve->add_option("--text-root", serve_root, "Directory relative text_uri values resolve against (default: world directory)");
    serve->add_option("--config", config_path, "key=value file with defaults for these flags");

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "stacks: " << e.what() << "\n";
        return kExitInput;
    } catch (const InputError& e) {
        err << "stacks: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (app.got_subcommand(gen))
            return run_generate(catalog_path, out_path, text_root.empty() ? std::nullopt : std::optional<fs::path>(text_root),
                                params, threads, out);
        if (app.got_subcommand(val)) return run_validate(validate_path, out, err);
        if (app.got_subcommand(stats)) return run_stats(stats_path, out);
        serve_opts.world = serve_world;
        if (!serve_cache.empty()) serve_opts.cache_dir = serve_cache;
        serve_opts.text_root = serve_root;
        return run_serve(serve_opts, out, err);
    } catch (const ParseError& e) {
        err << "stacks: " << e.what() << " (field " << e.field() << ")\n";
        return kExitInput;
    } catch (const InputError& e) {
        err << "stacks: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvariantError& e) {
        err << "stacks: internal error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "stacks: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace stacks
