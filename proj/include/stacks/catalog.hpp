#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stacks {

struct BookRecord {
    std::string id;
    std::string title;
    std::string author;
    std::int64_t year = 0;
    std::string category;
    std::string text_uri;
    std::int64_t text_length = 0;  // code points of the normalized text, 0 until loaded

    friend bool operator==(const BookRecord&, const BookRecord&) = default;
};

/// Books in input file order.
struct Catalog {
    std::vector<BookRecord> books;
    std::string source_name;

    friend bool operator==(const Catalog&, const Catalog&) = default;
};

struct Category {
    std::string name;
    std::vector<BookRecord> books;

    friend bool operator==(const Category&, const Category&) = default;
};

enum class CatalogFormat { csv, jsonl };

/// Header columns, in canonical order.
inline constexpr std::string_view kCatalogFields[] = {"id", "title", "author", "year", "category", "text_uri"};

/// Parses a catalog. Throws ParseError (line + field) on malformed rows and on duplicate ids.
Catalog parse_catalog(std::string_view input, CatalogFormat format, std::string source_name = {});

/// Writes the catalog back out in `format`; parse_catalog of the result reproduces `c`.
std::string serialize_catalog(const Catalog& c, CatalogFormat format);

enum class Severity { warning, error };

struct Finding {
    Severity severity = Severity::error;
    std::string book_id;
    std::string message;

    friend bool operator==(const Finding&, const Finding&) = default;
};

using ValidationReport = std::vector<Finding>;

ValidationReport validate_catalog(const Catalog& c);
bool has_errors(const ValidationReport& report);

/// Partitions books by category in first-appearance order. Throws InputError("no categories") when empty.
std::vector<Category> group_by_category(const Catalog& c);

/// Unifies line endings to LF, expands tabs to four spaces and strips trailing spaces per line.
/// A leading byte-order mark is dropped. Throws InputError on invalid UTF-8.
std::string normalize_text(std::string_view raw);

bool is_valid_utf8(std::string_view s);

/// Number of code points in valid UTF-8.
std::int64_t utf8_length(std::string_view s);

bool is_well_formed_uri(std::string_view uri);

}  // namespace stacks
