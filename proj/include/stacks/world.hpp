#pragma once

#include "stacks/catalog.hpp"
#include "stacks/layout.hpp"
#include "stacks/navmap.hpp"
#include "stacks/scene.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace stacks {

inline constexpr int kFormatVersion = 1;

struct PaginationIndex {
    int chars_per_page = 1800;
    std::map<std::string, int> pages;  // book id -> page count

    friend bool operator==(const PaginationIndex&, const PaginationIndex&) = default;
};

/// Everything a generate run produces; the in-memory form of the world file.
struct World {
    int format_version = kFormatVersion;
    std::uint64_t seed = 0;
    GenParams params;
    Catalog catalog;  // text_length filled in
    Layout layout;
    MapModel map;
    std::vector<Signboard> signboards;
    std::vector<SceneChunk> chunks;
    PaginationIndex pagination;
    ErgonomicsConfig reader;

    friend bool operator==(const World&, const World&) = default;
};

struct BuildOptions {
    std::filesystem::path text_root = ".";
    unsigned threads = 0;  // chunk workers, 0 = hardware concurrency
};

/// Full pipeline: validate catalog, load texts, layout, map, signboards, chunks, pagination.
/// The result is canonical: parse_world(export_world(w)) == w.
/// Throws InputError for bad input, InvariantError if generation breaks an invariant.
World build_world(const Catalog& catalog, const GenParams& params, const BuildOptions& options = {});

/// Canonical JSON: sorted keys, reals with 6 decimals, no insignificant whitespace, trailing LF.
/// Validates references first and throws InputError naming the first dangling or duplicated id.
std::string export_world(const World& w);

/// Parses and validates a world file. Throws InputError on malformed JSON, schema mismatches, an
/// unsupported format_version or broken references.
World parse_world(std::string_view text);

/// Reference checks: ids resolve, every catalog book sits on exactly one shelf slot and one spine.
void validate_world(const World& w);

/// Compact JSON with sorted keys and reals printed with 6 decimals.
std::string canonical_dump(const nlohmann::json& j);

/// JSON fragments of the world file, shared with the HTTP API.
namespace wire {
nlohmann::json to_json(const BookRecord& b);
nlohmann::json to_json(const Layout& l);
nlohmann::json to_json(const MapModel& m);
nlohmann::json to_json(const Signboard& s);
nlohmann::json to_json(const SceneChunk& c);
nlohmann::json to_json(const VisibleSet& v);
nlohmann::json to_json(const ErgonomicsConfig& e);
nlohmann::json to_json(const World& w);
}  // namespace wire

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace stacks
