#include "stacks/geometry.hpp"

#include <charconv>
#include <system_error>

namespace stacks {

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::east: return "east";
    case Direction::south: return "south";
    case Direction::west: return "west";
    case Direction::north: return "north";
    }
    return "?";
}

std::optional<Direction> parse_direction(std::string_view s) {
    for (auto d : {Direction::east, Direction::south, Direction::west, Direction::north})
        if (to_string(d) == s) return d;
    return std::nullopt;
}

std::vector<Interval> subtract(const std::vector<Interval>& set, const Interval& cut) {
    std::vector<Interval> out;
    out.reserve(set.size() + 1);
    for (const auto& iv : set) {
        if (cut.hi <= iv.lo || cut.lo >= iv.hi) {
            out.push_back(iv);
            continue;
        }
        if (cut.lo > iv.lo) out.push_back({iv.lo, cut.lo});
        if (cut.hi < iv.hi) out.push_back({cut.hi, iv.hi});
    }
    return out;
}

double quantize(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
    if (res.ec != std::errc{}) return v;
    double out = 0.0;
    std::from_chars(buf, res.ptr, out);
    return out == 0.0 ? 0.0 : out;  // folds -0
}

}  // namespace stacks
