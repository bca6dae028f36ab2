#pragma once

#include "stacks/catalog.hpp"
#include "stacks/geometry.hpp"
#include "stacks/params.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stacks {

// Room-local frame: the room's long axis runs along local +x, which points in the room's
// heading (the direction the visitor travels when entering). Local y points to the left of
// the heading. The entrance short wall is local west (x = 0); the far short wall is local
// east (x = width). Shelves stand on the long walls, local north (y = depth) and south (y = 0).
// Offsets along a wall are measured from local x = 0 (north/south walls) or y = 0 (east/west).

/// Neighbor marker for doors that lead outside the building.
inline constexpr int kOutside = -1;

enum class DoorKind : std::uint8_t { chain_entrance, chain_exit, extra };

struct Door {
    int id = kOutside;  // connection id in the layout, kOutside for the world entrance/exit
    Direction wall = Direction::west;  // local wall
    double center_offset_m = 0.0;
    double width_m = 0.0;
    DoorKind kind = DoorKind::chain_entrance;
    int neighbor = kOutside;

    friend bool operator==(const Door&, const Door&) = default;

    Interval opening() const { return {center_offset_m - 0.5 * width_m, center_offset_m + 0.5 * width_m}; }
};

struct ShelfSlot {
    std::string book_id;
    int row = 0;
    int slot = 0;

    friend bool operator==(const ShelfSlot&, const ShelfSlot&) = default;
};

struct ShelfPlacement {
    Direction wall = Direction::north;  // local wall, always north or south
    double offset_m = 0.0;
    std::vector<ShelfSlot> assigned;

    friend bool operator==(const ShelfPlacement&, const ShelfPlacement&) = default;
};

enum class DecorKind : std::uint8_t { exhibit_pedestal, table, chair, plant };

struct DecorItem {
    DecorKind kind = DecorKind::table;
    Vec2 position;  // local center
    Vec2 size;      // local footprint extents
    double rotation_deg = 0.0;
    std::string info_text;  // exhibits only

    friend bool operator==(const DecorItem&, const DecorItem&) = default;

    Rect footprint() const { return {position.x - 0.5 * size.x, position.y - 0.5 * size.y, size.x, size.y}; }
};

struct RoomSize {
    double width_m = 0.0;  // along the heading, grows with shelf count
    double depth_m = 0.0;  // fixed

    friend bool operator==(const RoomSize&, const RoomSize&) = default;
};

struct RoomPlan {
    int id = 0;
    std::string category;
    Rect rect;  // world footprint
    Direction heading = Direction::east;
    double width_m = 0.0;
    double depth_m = 0.0;
    double height_m = 0.0;
    std::optional<Direction> bay_wall;  // long wall sized to take the chain exit door
    std::vector<ShelfPlacement> shelves;
    std::vector<Door> doors;
    std::vector<DecorItem> decor;

    friend bool operator==(const RoomPlan&, const RoomPlan&) = default;

    Rect local_bounds() const { return {0.0, 0.0, width_m, depth_m}; }
    double area() const { return width_m * depth_m; }
    std::size_t book_count() const;
};

/// World direction of a local wall.
constexpr Direction world_wall(Direction heading, Direction local) {
    return static_cast<Direction>((static_cast<int>(local) + static_cast<int>(heading)) % 4);
}

/// Local wall facing a world direction.
constexpr Direction local_wall(Direction heading, Direction world) {
    return static_cast<Direction>((static_cast<int>(world) + 4 - static_cast<int>(heading)) % 4);
}

/// World footprint of a room with the given heading and size whose local origin corner is placed
/// so that the footprint's min corner sits at `min_corner`.
Rect world_footprint(Direction heading, RoomSize size, Vec2 min_corner);

Vec2 to_world(const RoomPlan& room, Vec2 local);
Vec2 to_local(const RoomPlan& room, Vec2 world);
Rect to_world(const RoomPlan& room, const Rect& local);

/// Length of a local wall.
double wall_length(const RoomPlan& room, Direction local);

/// World interval covered by a stretch [lo, hi] of a local wall (along that wall's world axis).
Interval to_world_span(const RoomPlan& room, Direction local, Interval along);
/// Inverse of to_world_span.
Interval to_local_span(const RoomPlan& room, Direction local, Interval world);

/// Along-wall interval a shelf occupies.
Interval shelf_span(const ShelfPlacement& s, const GenParams& p);
/// Local footprint of a shelf.
Rect shelf_footprint(const RoomPlan& room, const ShelfPlacement& s, const GenParams& p);
/// Local rectangle in front of a door that must stay free of furniture.
Rect door_clearance(const RoomPlan& room, const Door& d);

/// Shelves needed for `book_count` books: ceil(book_count / capacity). Throws InputError for 0.
int required_shelves(int book_count, const ShelfSpec& spec);

/// Depth is fixed at two shelf depths plus the corridor; width fits ceil(n/2) shelf units plus margins.
RoomSize room_dimensions(int shelf_count, const GenParams& p);

/// Shelves standing on a long wall: north takes ceil(n/2), south floor(n/2).
int shelves_on_wall(int shelf_count, Direction wall);

/// room_dimensions, lengthened if needed so a door (with jambs) fits between the shelves on `bay_wall`.
RoomSize room_size(int shelf_count, std::optional<Direction> bay_wall, const GenParams& p);

/// Stretches of a bay wall where a door reservation may go: before the first shelf, between any two
/// shelves (which then move aside), or after the last. Slots are not merged; each one admits doors
/// anywhere inside it.
std::vector<Interval> bay_door_slots(int shelves_on_bay_wall, double wall_length, const GenParams& p);

/// Shelves alternate north then south, packed from the wall margin; books fill shelf 0 row 0 slot 0
/// first, row-major. Shelves on `door_wall` skip past `door_reserved`.
/// Throws InvariantError if the shelves do not fit `size`.
std::vector<ShelfPlacement> plan_shelves(const Category& category, RoomSize size, const ShelfSpec& spec,
                                         const GenParams& p, std::optional<Direction> door_wall = std::nullopt,
                                         std::optional<Interval> door_reserved = std::nullopt);

/// Exhibit pedestal at the center from 12 m² on, one table+chair pair per further full 20 m².
/// Pure function of (room, seed).
std::vector<DecorItem> plan_decor(const RoomPlan& room, std::uint64_t seed, const GenParams& p = {});

std::string_view to_string(DoorKind k);
std::string_view to_string(DecorKind k);
std::optional<DoorKind> parse_door_kind(std::string_view s);
std::optional<DecorKind> parse_decor_kind(std::string_view s);

/// SplitMix64 step, used to derive per-room seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace stacks
