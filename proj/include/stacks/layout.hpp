#pragma once

#include "stacks/catalog.hpp"
#include "stacks/geometry.hpp"
#include "stacks/params.hpp"
#include "stacks/roomgen.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace stacks {

enum class ConnectionKind : std::uint8_t { chain, extra };

/// A door between two rooms, in world coordinates.
struct Connection {
    int id = 0;
    int a = 0;  // lower room id for extra connections; previous room for chain connections
    int b = 0;
    ConnectionKind kind = ConnectionKind::chain;
    Direction wall_a = Direction::east;  // world wall of room a carrying the door
    double line = 0.0;                   // world coordinate of the shared wall line
    Interval overlap;                    // shared wall extent along the wall axis
    Interval opening;                    // door opening along the wall axis

    friend bool operator==(const Connection&, const Connection&) = default;

    Vec2 center() const;
};

struct Layout {
    std::vector<RoomPlan> rooms;  // placement order = category order, rooms[i].id == i
    std::vector<Connection> connections;
    Rect bbox;
    std::uint64_t seed = 0;
    GenParams params;

    friend bool operator==(const Layout&, const Layout&) = default;
};

/// Spiral walker: arms of 1, 1, 2, 2, 3, 3, ... rooms, turning clockwise (or counter-clockwise).
struct PlacementCursor {
    Direction direction = Direction::east;
    int rooms_in_arm = 0;
    int arm_limit = 1;
    int turns = 0;
    bool ccw = false;

    friend bool operator==(const PlacementCursor&, const PlacementCursor&) = default;

    /// Cursor after one more room has been placed in `direction`.
    PlacementCursor next() const;
    /// Side of the current arm facing the spiral interior.
    Direction inward() const { return ccw ? stacks::ccw(direction) : cw(direction); }
};

struct SharedWall {
    Direction wall_a = Direction::east;  // world wall of a
    Direction wall_b = Direction::west;  // world wall of b
    double line = 0.0;
    Interval overlap;

    friend bool operator==(const SharedWall&, const SharedWall&) = default;
};

/// Largest t >= 0 such that `candidate` moved by t along `inward` overlaps no obstacle interior and still
/// shares at least `min_overlap` of wall with `must_touch`. Exact, no stepping.
double max_inward_slide(const Rect& candidate, std::span<const Rect> obstacles, Direction inward, const Rect& must_touch,
                        double min_overlap);

struct PlacementRequest {
    Direction direction = Direction::east;  // side of the previous room to attach to
    Direction inward = Direction::south;    // compression direction, perpendicular to `direction`
    RoomSize size;                          // the new room is oriented with its heading = direction
    std::vector<Interval> door_segments;    // world spans on the previous room's wall where a door may go
    double min_overlap = 1.4;
    bool compress = true;
};

struct PlacementResult {
    Rect rect;
    double slide_m = 0.0;
    Interval door_span;  // overlap of the new room with the chosen door segment
};

/// Attaches a room to `previous` on its `request.direction` side. The room starts flush with the inward
/// end of that wall and is slid inward when that brings it into contact with another room. If the flush
/// spot is blocked, the nearest collision-free spot along the wall is used. `obstacles` holds every
/// placed room (including `previous`) plus keep-out zones; contact only counts against `rooms`.
std::optional<PlacementResult> place_next_room(std::span<const Rect> rooms, std::span<const Rect> keep_out,
                                               const Rect& previous, const PlacementRequest& request);

std::optional<SharedWall> detect_adjacency(const Rect& a, const Rect& b, double min_overlap);
std::optional<SharedWall> detect_adjacency(const RoomPlan& a, const RoomPlan& b, double min_overlap);

/// Connection budget: clamp(floor(perimeter / 10) + 1, 2, 6).
int max_connections(const Rect& r);
int max_connections(const RoomPlan& room);

/// Along-wall spans of a local wall free of shelves and other doors (including their jambs), in local coordinates.
std::vector<Interval> free_wall_spans(const RoomPlan& room, Direction local, const GenParams& p);

/// Adds doors between non-consecutive adjacent rooms, largest overlap first, within both rooms' budgets.
Layout assign_extra_connections(Layout layout);

/// Places one room per category along the spiral, then doors, extra connections and decor.
/// Throws InputError on empty input or invalid parameters.
Layout generate_layout(const std::vector<Category>& categories, const GenParams& params, std::uint64_t seed);

std::string_view to_string(ConnectionKind k);
std::optional<ConnectionKind> parse_connection_kind(std::string_view s);

/// Room ids adjacent to `room` through connections, ascending and unique.
std::vector<int> neighbors(const Layout& layout, int room);

}  // namespace stacks
