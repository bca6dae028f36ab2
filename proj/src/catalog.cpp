#include "stacks/catalog.hpp"

#include "stacks/errors.hpp"

#include <charconv>
#include <json.hpp>
#include <unordered_map>
#include <unordered_set>

namespace stacks {
namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

/// Category rule: first entry of a ';'-separated list, trimmed.
std::string first_category(std::string_view raw) {
    return std::string(trim(raw.substr(0, raw.find(';'))));
}

std::int64_t parse_year(std::string_view text, std::size_t line) {
    const auto t = trim(text);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
        throw ParseError(line, "year", "year invalid '" + std::string(t) + "'");
    return v;
}

/// Line number (1-based) of byte `offset`.
std::size_t line_of(std::string_view input, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < input.size(); ++i)
        if (input[i] == '\n') ++line;
    return line;
}

std::size_t first_invalid_utf8(std::string_view s) {
    const auto* p = reinterpret_cast<const unsigned char*>(s.data());
    const std::size_t n = s.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned c = p[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            if ((p[i + k] & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (p[i + k] & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
        i += len;
    }
    return std::string_view::npos;
}

void check_utf8(std::string_view input) {
    if (auto bad = first_invalid_utf8(input); bad != std::string_view::npos)
        throw ParseError(line_of(input, bad), "encoding", "invalid UTF-8");
}

struct CsvField {
    std::string text;
    bool quoted = false;
};

struct CsvRecord {
    std::size_t line = 0;
    std::vector<CsvField> fields;
};

/// RFC 4180 style reader: comma separated, double-quoted fields with "" escapes, CRLF or LF rows.
std::vector<CsvRecord> read_csv(std::string_view in) {
    std::vector<CsvRecord> rows;
    std::size_t i = 0;
    std::size_t line = 1;
    const std::size_t n = in.size();
    while (i < n) {
        CsvRecord rec;
        rec.line = line;
        // Skip blank lines.
        if (in[i] == '\n' || (in[i] == '\r' && i + 1 < n && in[i + 1] == '\n')) {
            i += in[i] == '\r' ? 2 : 1;
            ++line;
            continue;
        }
        CsvField field;
        bool end_of_record = false;
        while (!end_of_record) {
            if (i < n && in[i] == '"' && trim(field.text).empty()) {
                field.text.clear();
                field.quoted = true;
                ++i;
                bool closed = false;
                while (i < n) {
                    if (in[i] == '"') {
                        if (i + 1 < n && in[i + 1] == '"') {
                            field.text.push_back('"');
                            i += 2;
                            continue;
                        }
                        ++i;
                        closed = true;
                        break;
                    }
                    if (in[i] == '\n') ++line;
                    field.text.push_back(in[i++]);
                }
                if (!closed) throw ParseError(rec.line, "row", "unterminated quoted field");
                // Only whitespace may follow a closing quote.
                while (i < n && (in[i] == ' ' || in[i] == '\t')) ++i;
                if (i < n && in[i] != ',' && in[i] != '\n' && in[i] != '\r')
                    throw ParseError(rec.line, "row", "unexpected character after quoted field");
            }
            if (i >= n) {
                end_of_record = true;
            } else if (in[i] == ',') {
                ++i;
                rec.fields.push_back(std::move(field));
                field = {};
                continue;
            } else if (in[i] == '\n' || in[i] == '\r') {
                if (in[i] == '\r' && i + 1 < n && in[i + 1] == '\n') ++i;
                ++i;
                ++line;
                end_of_record = true;
            } else if (!field.quoted) {
                field.text.push_back(in[i++]);
                continue;
            }
            if (end_of_record) rec.fields.push_back(std::move(field));
        }
        rows.push_back(std::move(rec));
    }
    return rows;
}

std::string field_value(const CsvField& f) { return f.quoted ? f.text : std::string(trim(f.text)); }

void require_non_empty(const BookRecord& b, std::size_t line) {
    if (trim(b.id).empty()) throw ParseError(line, "id", "id empty");
    if (trim(b.title).empty()) throw ParseError(line, "title", "title empty");
    if (b.category.empty()) throw ParseError(line, "category", "category empty");
}

Catalog parse_csv(std::string_view input, std::string source_name) {
    Catalog cat;
    cat.source_name = std::move(source_name);
    auto rows = read_csv(input);
    if (rows.empty()) throw ParseError(1, "header", "missing header row");

    const auto& header = rows.front().fields;
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t k = 0; k < header.size(); ++k) column.emplace(field_value(header[k]), k);
    std::size_t index[6];
    for (std::size_t f = 0; f < 6; ++f) {
        auto it = column.find(std::string(kCatalogFields[f]));
        if (it == column.end())
            throw ParseError(rows.front().line, std::string(kCatalogFields[f]),
                             "missing column '" + std::string(kCatalogFields[f]) + "'");
        index[f] = it->second;
    }

    std::unordered_set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& rec = rows[r];
        if (rec.fields.size() != header.size())
            throw ParseError(rec.line, "row",
                             "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(rec.fields.size()));
        BookRecord b;
        b.id = field_value(rec.fields[index[0]]);
        b.title = field_value(rec.fields[index[1]]);
        b.author = field_value(rec.fields[index[2]]);
        b.year = parse_year(rec.fields[index[3]].text, rec.line);
        b.category = first_category(rec.fields[index[4]].text);
        b.text_uri = field_value(rec.fields[index[5]]);
        require_non_empty(b, rec.line);
        if (!seen.insert(b.id).second) throw ParseError(rec.line, "id", "duplicate id '" + b.id + "'");
        cat.books.push_back(std::move(b));
    }
    return cat;
}

std::string json_string(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(line, key, std::string(key) + " missing");
    if (!it->is_string()) throw ParseError(line, key, std::string(key) + " must be a string");
    return it->get<std::string>();
}

Catalog parse_jsonl(std::string_view input, std::string source_name) {
    Catalog cat;
    cat.source_name = std::move(source_name);
    std::unordered_set<std::string> seen;
    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos < input.size()) {
        ++line;
        auto eol = input.find('\n', pos);
        auto text = input.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? input.size() : eol + 1;
        if (trim(text).empty()) continue;

        json obj = json::parse(text, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) throw ParseError(line, "row", "invalid JSON object");

        BookRecord b;
        b.id = json_string(obj, "id", line);
        b.title = json_string(obj, "title", line);
        b.author = json_string(obj, "author", line);
        b.text_uri = json_string(obj, "text_uri", line);

        auto year = obj.find("year");
        if (year == obj.end()) throw ParseError(line, "year", "year missing");
        if (year->is_number_integer())
            b.year = year->get<std::int64_t>();
        else if (year->is_string())
            b.year = parse_year(year->get<std::string>(), line);
        else
            throw ParseError(line, "year", "year invalid");

        auto category = obj.find("category");
        if (category == obj.end()) throw ParseError(line, "category", "category missing");
        if (category->is_array() && !category->empty() && category->front().is_string())
            b.category = first_category(category->front().get<std::string>());
        else if (category->is_string())
            b.category = first_category(category->get<std::string>());
        else if (!category->is_array())
            throw ParseError(line, "category", "category must be a string or list");

        require_non_empty(b, line);
        if (!seen.insert(b.id).second) throw ParseError(line, "id", "duplicate id '" + b.id + "'");
        cat.books.push_back(std::move(b));
    }
    return cat;
}

void append_csv_field(std::string& out, const std::string& v) {
    const bool needs_quotes = v.find_first_of(",\"\r\n") != std::string::npos ||
                              (!v.empty() && (v.front() == ' ' || v.front() == '\t' || v.back() == ' ' || v.back() == '\t'));
    if (!needs_quotes) {
        out += v;
        return;
    }
    out.push_back('"');
    for (char c : v) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

}  // namespace

Catalog parse_catalog(std::string_view input, CatalogFormat format, std::string source_name) {
    check_utf8(input);
    if (input.starts_with("\xEF\xBB\xBF")) input.remove_prefix(3);
    return format == CatalogFormat::csv ? parse_csv(input, std::move(source_name)) : parse_jsonl(input, std::move(source_name));
}

std::string serialize_catalog(const Catalog& c, CatalogFormat format) {
    std::string out;
    if (format == CatalogFormat::csv) {
        out = "id,title,author,year,category,text_uri\n";
        for (const auto& b : c.books) {
            append_csv_field(out, b.id);
            out.push_back(',');
            append_csv_field(out, b.title);
            out.push_back(',');
            append_csv_field(out, b.author);
            out.push_back(',');
            out += std::to_string(b.year);
            out.push_back(',');
            append_csv_field(out, b.category);
            out.push_back(',');
            append_csv_field(out, b.text_uri);
            out.push_back('\n');
        }
        return out;
    }
    for (const auto& b : c.books) {
        json obj{{"id", b.id}, {"title", b.title}, {"author", b.author}, {"year", b.year},
                 {"category", b.category}, {"text_uri", b.text_uri}};
        out += obj.dump();
        out.push_back('\n');
    }
    return out;
}

bool is_well_formed_uri(std::string_view uri) {
    if (uri.empty() || trim(uri).size() != uri.size()) return false;
    for (unsigned char c : uri)
        if (c < 0x20 || c == 0x7F) return false;
    if (auto sep = uri.find("://"); sep != std::string_view::npos) {
        const auto scheme = uri.substr(0, sep);
        if (scheme != "file" && scheme != "http" && scheme != "https") return false;
        return sep + 3 < uri.size();
    }
    return true;
}

ValidationReport validate_catalog(const Catalog& c) {
    ValidationReport report;
    std::unordered_set<std::string> seen;
    for (const auto& b : c.books) {
        if (trim(b.id).empty()) report.push_back({Severity::error, b.id, "id empty"});
        else if (!seen.insert(b.id).second) report.push_back({Severity::error, b.id, "duplicate id '" + b.id + "'"});
        if (trim(b.category).empty()) report.push_back({Severity::error, b.id, "category empty"});
        if (b.year <= 0 || b.year > 2100)
            report.push_back({Severity::warning, b.id, "year implausible (" + std::to_string(b.year) + ")"});
        if (b.text_uri.empty()) report.push_back({Severity::warning, b.id, "no text_uri"});
        else if (!is_well_formed_uri(b.text_uri)) report.push_back({Severity::error, b.id, "text_uri malformed '" + b.text_uri + "'"});
        if (b.text_length < 0) report.push_back({Severity::error, b.id, "text_length negative"});
    }
    return report;
}

bool has_errors(const ValidationReport& report) {
    for (const auto& f : report)
        if (f.severity == Severity::error) return true;
    return false;
}

std::vector<Category> group_by_category(const Catalog& c) {
    if (c.books.empty()) throw InputError("no categories");
    std::vector<Category> out;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& b : c.books) {
        auto [it, fresh] = slot.emplace(b.category, out.size());
        if (fresh) out.push_back(Category{b.category, {}});
        out[it->second].books.push_back(b);
    }
    return out;
}

bool is_valid_utf8(std::string_view s) { return first_invalid_utf8(s) == std::string_view::npos; }

std::int64_t utf8_length(std::string_view s) {
    std::int64_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

std::string normalize_text(std::string_view raw) {
    if (!is_valid_utf8(raw)) throw InputError("text is not valid UTF-8");
    if (raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);

    std::string out;
    out.reserve(raw.size());
    auto strip_trailing = [&out] {
        while (!out.empty() && out.back() == ' ') out.pop_back();
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (c == '\r') {
            if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
            strip_trailing();
            out.push_back('\n');
        } else if (c == '\n') {
            strip_trailing();
            out.push_back('\n');
        } else if (c == '\t') {
            out.append(4, ' ');
        } else {
            out.push_back(c);
        }
    }
    strip_trailing();
    return out;
}

}  // namespace stacks
