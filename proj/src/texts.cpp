#include "stacks/texts.hpp"

#include "stacks/errors.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace stacks {

std::optional<std::filesystem::path> local_text_path(std::string_view uri, const std::filesystem::path& root) {
    if (uri.empty() || uri.starts_with("http://") || uri.starts_with("https://")) return std::nullopt;
    if (uri.starts_with("file://")) uri.remove_prefix(7);
    std::filesystem::path p{std::string(uri)};
    return p.is_absolute() ? p : root / p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

std::optional<std::string> load_book_text(const BookRecord& book, const std::filesystem::path& root) {
    const auto path = local_text_path(book.text_uri, root);
    if (!path) return std::nullopt;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(*path, ec)) throw InputError("book " + book.id + ": text not found at " + path->string());
    try {
        return normalize_text(read_file(*path));
    } catch (const InputError& e) {
        throw InputError("book " + book.id + ": " + path->string() + ": " + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
    auto tmp = path;
    static std::atomic<unsigned long> serial{0};
    tmp += ".tmp" + std::to_string(::getpid()) + "-" + std::to_string(serial++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw InputError("cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("cannot replace " + path.string());
    }
}

}  // namespace stacks
