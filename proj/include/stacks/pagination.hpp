#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stacks {

struct Page {
    std::string book_id;
    int index = 0;
    std::string text;
    int total_pages = 1;

    friend bool operator==(const Page&, const Page&) = default;
};

/// Splits normalized text into pages of at most `chars_per_page` code points. A page ends after the
/// last line feed inside the limit, else after the last space, else at the limit. Concatenating the
/// pages gives back `text`; empty text yields one empty page. Throws InputError if chars_per_page <= 0.
std::vector<std::string> paginate_text(std::string_view text, int chars_per_page);

/// Number of pages paginate_text would produce, without copying.
int page_count(std::string_view text, int chars_per_page);

}  // namespace stacks
