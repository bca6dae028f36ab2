#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace stacks {

/// Geometric tolerance in meters used for all touching/overlap decisions.
inline constexpr double kEps = 1e-6;

/// Compass directions in clockwise order. +x is east, +y is north.
enum class Direction : std::uint8_t { east = 0, south = 1, west = 2, north = 3 };

enum class Axis : std::uint8_t { x, y };

constexpr Direction cw(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 1) % 4); }
constexpr Direction ccw(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 3) % 4); }
constexpr Direction opposite(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 2) % 4); }

/// Axis a direction points along.
constexpr Axis axis_of(Direction d) { return (d == Direction::east || d == Direction::west) ? Axis::x : Axis::y; }
constexpr Axis other(Axis a) { return a == Axis::x ? Axis::y : Axis::x; }
constexpr double sign_of(Direction d) { return (d == Direction::east || d == Direction::north) ? 1.0 : -1.0; }

std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view s);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

    double operator[](Axis a) const { return a == Axis::x ? x : y; }
    double& operator[](Axis a) { return a == Axis::x ? x : y; }
};

constexpr Vec2 unit(Direction d) {
    switch (d) {
    case Direction::east: return {1.0, 0.0};
    case Direction::south: return {0.0, -1.0};
    case Direction::west: return {-1.0, 0.0};
    case Direction::north: return {0.0, 1.0};
    }
    return {};
}

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Closed 1-D interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;

    double length() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    bool contains(const Interval& o, double eps = kEps) const { return o.lo >= lo - eps && o.hi <= hi + eps; }
};

/// Length of the intersection of two intervals; negative when they are apart.
inline double overlap_length(const Interval& a, const Interval& b) { return std::min(a.hi, b.hi) - std::max(a.lo, b.lo); }

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (r.hi < r.lo) return std::nullopt;
    return r;
}

/// Removes `cut` (treated as open) from every interval in `set`. `set` must be sorted and disjoint.
std::vector<Interval> subtract(const std::vector<Interval>& set, const Interval& cut);

/// Axis-aligned rectangle: min corner (x, y) and extents (w, h) in meters.
struct Rect {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    friend bool operator==(const Rect&, const Rect&) = default;

    double max_x() const { return x + w; }
    double max_y() const { return y + h; }
    double area() const { return w * h; }
    double perimeter() const { return 2.0 * (w + h); }
    Vec2 center() const { return {x + 0.5 * w, y + 0.5 * h}; }

    Interval span(Axis a) const { return a == Axis::x ? Interval{x, x + w} : Interval{y, y + h}; }
    double extent(Axis a) const { return a == Axis::x ? w : h; }

    /// Coordinate of the wall facing `d` (e.g. max_x for east).
    double wall_line(Direction d) const {
        switch (d) {
        case Direction::east: return max_x();
        case Direction::west: return x;
        case Direction::north: return max_y();
        case Direction::south: return y;
        }
        return 0.0;
    }

    /// Extent of the wall facing `d` along the wall.
    Interval wall_span(Direction d) const { return span(other(axis_of(d))); }

    Rect translated(Vec2 v) const { return {x + v.x, y + v.y, w, h}; }
    Rect inflated(double m) const { return {x - m, y - m, w + 2 * m, h + 2 * m}; }

    static Rect from_spans(Interval xs, Interval ys) { return {xs.lo, ys.lo, xs.length(), ys.length()}; }
};

/// True when the open interiors intersect by more than `eps` on both axes.
inline bool interiors_overlap(const Rect& a, const Rect& b, double eps = kEps) {
    return overlap_length(a.span(Axis::x), b.span(Axis::x)) > eps && overlap_length(a.span(Axis::y), b.span(Axis::y)) > eps;
}

inline bool contains(const Rect& outer, const Rect& inner, double eps = kEps) {
    return outer.span(Axis::x).contains(inner.span(Axis::x), eps) && outer.span(Axis::y).contains(inner.span(Axis::y), eps);
}

inline bool contains(const Rect& r, Vec2 p, double eps = kEps) {
    return p.x >= r.x - eps && p.x <= r.max_x() + eps && p.y >= r.y - eps && p.y <= r.max_y() + eps;
}

/// Euclidean distance between a point and a rectangle (0 inside).
inline double distance(Vec2 p, const Rect& r) {
    const double dx = std::max({r.x - p.x, 0.0, p.x - r.max_x()});
    const double dy = std::max({r.y - p.y, 0.0, p.y - r.max_y()});
    return std::hypot(dx, dy);
}

/// Rounds to the 1e-6 m grid used by the world file so in-memory values survive serialization unchanged.
double quantize(double v);

}  // namespace stacks
