#include "stacks/scene.hpp"

#include "stacks/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace stacks {
namespace {

constexpr double kSignWidthM = 1.0;
constexpr double kSignHeightM = 0.25;
constexpr double kSignGapM = 0.05;
constexpr double kSpineFill = 0.75;  // spine height as a share of the row height
constexpr double kPlaqueWidthM = 0.4;

double yaw_of(Direction d) {
    switch (d) {
    case Direction::east: return 0.0;
    case Direction::north: return 90.0;
    case Direction::west: return 180.0;
    case Direction::south: return 270.0;
    }
    return 0.0;
}

Vec3 q(Vec3 v) { return {quantize(v.x), quantize(v.y), quantize(v.z)}; }

struct Builder {
    const RoomPlan& room;
    SceneChunk chunk;
    int counters[10] = {};

    Primitive& add(std::vector<Primitive>& into, PrimitiveKind kind, const Rect& world_xy, double z0, double z1) {
        Primitive p;
        p.id = primitive_id(room.id, kind, counters[static_cast<int>(kind)]++);
        p.kind = kind;
        const Vec2 c = world_xy.center();
        p.center = q({c.x, c.y, 0.5 * (z0 + z1)});
        p.size = q({world_xy.w, world_xy.h, z1 - z0});
        into.push_back(std::move(p));
        return into.back();
    }
};

/// World rectangle of a stretch of a local wall (zero thickness).
Rect wall_strip(const RoomPlan& room, Direction local, Interval along) {
    const Direction wdir = world_wall(room.heading, local);
    const Interval span = to_world_span(room, local, along);
    const double line = room.rect.wall_line(wdir);
    return axis_of(wdir) == Axis::x ? Rect::from_spans({line, line}, span) : Rect::from_spans(span, {line, line});
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string primitive_id(int room_id, PrimitiveKind kind, int index) {
    const std::string key = std::to_string(room_id) + "/" + std::string(to_string(kind)) + "/" + std::to_string(index);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
    return buf;
}

std::string category_color(std::string_view category) {
    const std::uint64_t h = fnv1a64(category);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<unsigned>(64 + (h & 0x7f)), static_cast<unsigned>(64 + ((h >> 8) & 0x7f)),
                  static_cast<unsigned>(64 + ((h >> 16) & 0x7f)));
    return buf;
}

int light_count(double area_m2) { return std::max(1, static_cast<int>(std::floor(area_m2 / dims::kLightAreaM2 + kEps))); }

std::vector<std::string> validate_ergonomics(const ErgonomicsConfig& c) {
    std::vector<std::string> out;
    if (c.body_text_dmm < c.min_text_dmm) out.push_back("body_text_dmm must be >= min_text_dmm");
    if (c.panel_curvature_deg < 50.0 || c.panel_curvature_deg > 70.0) out.push_back("panel_curvature_deg must lie in [50, 70]");
    return out;
}

SceneChunk instantiate_room(const RoomPlan& room, const Signboard& signs, const BookTitles& titles, const GenParams& p,
                            const ErgonomicsConfig& ergo) {
    Builder b{room, SceneChunk{room.id, {}, {}}, {}};
    auto& structure = b.chunk.structure;
    auto& interior = b.chunk.interior;
    const double h = room.height_m;

    b.add(structure, PrimitiveKind::floor, room.rect, 0.0, 0.0).color = "#8a7560";
    b.add(structure, PrimitiveKind::ceiling, room.rect, h, h).color = "#f2efe8";

    // Walls, cut around door openings, with a lintel above each opening.
    for (Direction local : {Direction::west, Direction::south, Direction::east, Direction::north}) {
        std::vector<Interval> solid{{0.0, wall_length(room, local)}};
        std::vector<const Door*> openings;
        for (const auto& d : room.doors)
            if (d.wall == local) {
                solid = subtract(solid, d.opening());
                openings.push_back(&d);
            }
        for (const auto& s : solid) {
            if (s.length() <= kEps) continue;
            b.add(structure, PrimitiveKind::wall, wall_strip(room, local, s), 0.0, h).color = "#e6dfd3";
        }
        for (const Door* d : openings) {
            auto& lintel = b.add(structure, PrimitiveKind::lintel, wall_strip(room, local, d->opening()), dims::kDoorHeightM, h);
            lintel.color = "#e6dfd3";
            lintel.door_id = d->id;
        }
    }

    const int lights = light_count(room.area());
    for (int k = 0; k < lights; ++k) {
        const double along = room.width_m * (k + 0.5) / lights;
        const Rect spot = to_world(room, Rect{along - 0.2, 0.5 * room.depth_m - 0.2, 0.4, 0.4});
        b.add(structure, PrimitiveKind::light, spot, h - 0.05, h).color = "#fff4d6";
    }

    // One sign above each door, on the inside face of the wall.
    const double sign_text = compute_text_height(ergo.body_text_dmm, viewing::kDoorSignM);
    for (std::size_t k = 0; k < room.doors.size(); ++k) {
        const Door& d = room.doors[k];
        const Interval along{d.center_offset_m - 0.5 * kSignWidthM, d.center_offset_m + 0.5 * kSignWidthM};
        const double z0 = dims::kDoorHeightM + kSignGapM;
        auto& sign = b.add(structure, PrimitiveKind::door_sign, wall_strip(room, d.wall, along), z0, z0 + kSignHeightM);
        sign.color = "#1f2a36";
        sign.yaw_deg = yaw_of(opposite(world_wall(room.heading, d.wall)));
        sign.text = k < signs.entries.size() ? signs.entries[k].label : std::string();
        sign.text_height_m = quantize(sign_text);
        sign.view_distance_m = viewing::kDoorSignM;
        sign.door_id = d.id;
    }

    // Shelves and one spine per assigned slot.
    const ShelfSpec spec = ShelfSpec::from(p);
    const double slot_w = p.unit_width_m / spec.slots_per_row;
    const double row_h = dims::kShelfHeightM / spec.rows;
    const double spine_h = row_h * kSpineFill;
    const std::string spine_color = category_color(room.category);
    const double spine_text = compute_text_height(ergo.body_text_dmm, viewing::kSpineM);
    for (const auto& s : room.shelves) {
        const Rect local = shelf_footprint(room, s, p);
        b.add(interior, PrimitiveKind::shelf, to_world(room, local), 0.0, dims::kShelfHeightM).color = "#6b4a2b";
        const Direction facing = world_wall(room.heading, opposite(s.wall));
        for (const auto& slot : s.assigned) {
            const Rect spine_local{s.offset_m + slot.slot * slot_w, local.y + 0.1 * p.shelf_depth_m, slot_w, 0.8 * p.shelf_depth_m};
            const double z0 = slot.row * row_h + 0.02;
            auto& spine = b.add(interior, PrimitiveKind::book_spine, to_world(room, spine_local), z0, z0 + spine_h);
            spine.color = spine_color;
            spine.yaw_deg = yaw_of(facing);
            auto t = titles.find(slot.book_id);
            spine.text = t != titles.end() ? t->second : slot.book_id;
            spine.text_height_m = quantize(spine_text);
            spine.view_distance_m = viewing::kSpineM;
            spine.book_id = slot.book_id;
        }
    }

    const double plaque_text = compute_text_height(ergo.body_text_dmm, viewing::kPlaqueM);
    for (const auto& item : room.decor) {
        double height = 0.75;
        if (item.kind == DecorKind::exhibit_pedestal) height = dims::kPedestalHeightM;
        if (item.kind == DecorKind::chair) height = 0.9;
        auto& box = b.add(interior, PrimitiveKind::decor, to_world(room, item.footprint()), 0.0, height);
        box.color = item.kind == DecorKind::exhibit_pedestal ? "#c9c2b3" : "#7a5a3a";
        box.text = std::string(to_string(item.kind));
        box.yaw_deg = quantize(std::fmod(item.rotation_deg + yaw_of(room.heading), 360.0));
        if (item.kind == DecorKind::exhibit_pedestal) {
            const Vec2 c = item.position;
            const Rect top{c.x - 0.5 * kPlaqueWidthM, c.y - 0.5 * kPlaqueWidthM, kPlaqueWidthM, kPlaqueWidthM};
            auto& plaque = b.add(interior, PrimitiveKind::plaque, to_world(room, top), height, height + 0.01);
            plaque.color = "#2d2a26";
            plaque.text = item.info_text;
            plaque.text_height_m = quantize(plaque_text);
            plaque.view_distance_m = viewing::kPlaqueM;
            plaque.yaw_deg = yaw_of(opposite(room.heading));
        }
    }
    return std::move(b.chunk);
}

std::vector<SceneChunk> instantiate_all(const Layout& layout, const std::vector<Signboard>& signs, const BookTitles& titles,
                                        const ErgonomicsConfig& ergo, unsigned threads) {
    const std::size_t n = layout.rooms.size();
    std::vector<SceneChunk> out(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    auto work = [&](unsigned t) {
        for (std::size_t i = t; i < n; i += threads)
            out[i] = instantiate_room(layout.rooms[i], signs.at(i), titles, layout.params, ergo);
    };
    if (threads <= 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
    return out;
}

VisibleSet visible_set(const Layout& layout, int current) {
    if (current < 0 || static_cast<std::size_t>(current) >= layout.rooms.size())
        throw InputError("unknown room id " + std::to_string(current));
    VisibleSet v{current, neighbors(layout, current), {current}};
    v.structure_visible.insert(std::lower_bound(v.structure_visible.begin(), v.structure_visible.end(), current), current);
    return v;
}

std::string_view to_string(PrimitiveKind k) {
    switch (k) {
    case PrimitiveKind::floor: return "floor";
    case PrimitiveKind::ceiling: return "ceiling";
    case PrimitiveKind::wall: return "wall";
    case PrimitiveKind::lintel: return "lintel";
    case PrimitiveKind::light: return "light";
    case PrimitiveKind::door_sign: return "door_sign";
    case PrimitiveKind::shelf: return "shelf";
    case PrimitiveKind::book_spine: return "book_spine";
    case PrimitiveKind::decor: return "decor";
    case PrimitiveKind::plaque: return "plaque";
    }
    return "?";
}

std::optional<PrimitiveKind> parse_primitive_kind(std::string_view s) {
    for (int i = 0; i < 10; ++i)
        if (to_string(static_cast<PrimitiveKind>(i)) == s) return static_cast<PrimitiveKind>(i);
    return std::nullopt;
}

}  // namespace stacks
