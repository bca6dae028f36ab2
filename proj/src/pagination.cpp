#include "stacks/pagination.hpp"

#include "stacks/errors.hpp"

namespace stacks {
namespace {

bool is_lead_byte(unsigned char c) { return (c & 0xC0) != 0x80; }

/// Byte length of the next page starting at `pos`.
std::size_t next_page(std::string_view text, std::size_t pos, int limit) {
    std::size_t i = pos;
    int count = 0;
    std::size_t after_lf = 0, after_space = 0;  // 0 = not seen
    while (i < text.size()) {
        if (count == limit) break;
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        while (i + len < text.size() && !is_lead_byte(static_cast<unsigned char>(text[i + len]))) ++len;
        i += len;
        ++count;
        if (c == '\n') after_lf = i;
        if (c == ' ') after_space = i;
    }
    if (i == text.size()) return i - pos;  // the rest fits
    if (after_lf) return after_lf - pos;
    if (after_space) return after_space - pos;
    return i - pos;
}

}  // namespace

std::vector<std::string> paginate_text(std::string_view text, int chars_per_page) {
    if (chars_per_page <= 0) throw InputError("chars_per_page must be > 0");
    std::vector<std::string> pages;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t len = next_page(text, pos, chars_per_page);
        pages.emplace_back(text.substr(pos, len));
        pos += len;
    }
    if (pages.empty()) pages.emplace_back();
    return pages;
}

int page_count(std::string_view text, int chars_per_page) {
    if (chars_per_page <= 0) throw InputError("chars_per_page must be > 0");
    int n = 0;
    for (std::size_t pos = 0; pos < text.size(); ++n) pos += next_page(text, pos, chars_per_page);
    return n == 0 ? 1 : n;
}

}  // namespace stacks
