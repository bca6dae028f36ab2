#pragma once

#include "stacks/catalog.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace stacks {

/// Local file a text_uri points to: "file://path" or a plain path, relative paths against `root`.
/// nullopt for empty and http(s) URIs, which are never fetched.
std::optional<std::filesystem::path> local_text_path(std::string_view uri, const std::filesystem::path& root);

/// Normalized text of a book, or nullopt when it has no local text. Throws InputError when the file
/// is missing or not valid UTF-8 (the message names the book and the path).
std::optional<std::string> load_book_text(const BookRecord& book, const std::filesystem::path& root);

std::string read_file(const std::filesystem::path& path);

/// Writes `data` next to `path` and renames it into place, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace stacks
