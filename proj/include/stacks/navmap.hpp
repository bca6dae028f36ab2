#pragma once

#include "stacks/layout.hpp"

#include <string>
#include <vector>

namespace stacks {

struct NavEdge {
    int a = 0;
    int b = 0;
    int door_id = 0;  // connection id
    double weight = 0.0;  // distance between room centers

    friend bool operator==(const NavEdge&, const NavEdge&) = default;
};

struct NavGraph {
    std::vector<int> nodes;
    std::vector<NavEdge> edges;  // one per connection, in connection order
    std::vector<std::vector<std::size_t>> incident;  // node -> edge indices

    int other_end(const NavEdge& e, int node) const { return e.a == node ? e.b : e.a; }
};

NavGraph build_navgraph(const Layout& layout);

/// Minimum-weight path; among equal-weight paths the lexicographically smallest id sequence.
/// Throws InputError for unknown ids.
std::vector<int> shortest_path(const NavGraph& g, int from, int to);

double path_weight(const NavGraph& g, const std::vector<int>& path);

struct RoomOutline {
    int room_id = 0;
    Rect rect;
    std::string category;

    friend bool operator==(const RoomOutline&, const RoomOutline&) = default;
};

enum class MarkerKind : std::uint8_t { connection, entrance, exit };

struct DoorMarker {
    int door_id = kOutside;  // connection id, kOutside for the world entrance/exit
    MarkerKind kind = MarkerKind::connection;
    int room_id = 0;  // room carrying the door (room a for connections)
    Vec2 position;

    friend bool operator==(const DoorMarker&, const DoorMarker&) = default;
};

struct TeleportTarget {
    int room_id = 0;
    Vec2 spawn;  // world coordinates

    friend bool operator==(const TeleportTarget&, const TeleportTarget&) = default;
};

struct CategoryEntry {
    std::string category;
    int room_id = 0;

    friend bool operator==(const CategoryEntry&, const CategoryEntry&) = default;
};

struct MapModel {
    std::vector<RoomOutline> outlines;
    std::vector<DoorMarker> doors;
    std::vector<TeleportTarget> teleports;
    std::vector<CategoryEntry> category_index;  // alphabetical

    friend bool operator==(const MapModel&, const MapModel&) = default;
};

struct SignEntry {
    int door_id = kOutside;
    int neighbor = kOutside;
    std::string label;  // neighbor category, or "Entrance" / "Exit" for outside doors
    Direction wall = Direction::east;  // world wall carrying the door

    friend bool operator==(const SignEntry&, const SignEntry&) = default;
};

struct Signboard {
    int room_id = 0;
    std::vector<SignEntry> entries;  // one per door, in the room's door order

    friend bool operator==(const Signboard&, const Signboard&) = default;
};

/// Spawn point in world coordinates: the room center, moved east then north in 0.1 m steps until it
/// is at least 0.4 m from walls, shelves and decor. Throws InvariantError if the room has no such point.
Vec2 spawn_point(const RoomPlan& room, const GenParams& p);

/// World position of a door's center.
Vec2 door_position(const RoomPlan& room, const Door& d);

MapModel build_map(const Layout& layout);
std::vector<Signboard> build_signboards(const Layout& layout);

std::string_view to_string(MarkerKind k);
std::optional<MarkerKind> parse_marker_kind(std::string_view s);

}  // namespace stacks
