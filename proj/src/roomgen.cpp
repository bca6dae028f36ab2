#include "stacks/roomgen.hpp"

#include "stacks/errors.hpp"

#include <random>

namespace stacks {
namespace {

Vec2 origin_corner(const Rect& r, Direction heading) {
    switch (heading) {
    case Direction::east: return {r.x, r.y};
    case Direction::south: return {r.x, r.max_y()};
    case Direction::west: return {r.max_x(), r.max_y()};
    case Direction::north: return {r.max_x(), r.y};
    }
    return {};
}

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Local point on a wall at `along`.
Vec2 wall_point(const RoomPlan& room, Direction local, double along) {
    switch (local) {
    case Direction::north: return {along, room.depth_m};
    case Direction::south: return {along, 0.0};
    case Direction::east: return {room.width_m, along};
    case Direction::west: return {0.0, along};
    }
    return {};
}

bool hits_any(const Rect& r, const std::vector<Rect>& obstacles) {
    for (const auto& o : obstacles)
        if (interiors_overlap(r, o)) return true;
    return false;
}

}  // namespace

std::size_t RoomPlan::book_count() const {
    std::size_t n = 0;
    for (const auto& s : shelves) n += s.assigned.size();
    return n;
}

Rect world_footprint(Direction heading, RoomSize size, Vec2 min_corner) {
    const bool along_x = axis_of(heading) == Axis::x;
    return {min_corner.x, min_corner.y, along_x ? size.width_m : size.depth_m, along_x ? size.depth_m : size.width_m};
}

Vec2 to_world(const RoomPlan& room, Vec2 local) {
    const Vec2 o = origin_corner(room.rect, room.heading);
    return o + local.x * unit(room.heading) + local.y * unit(ccw(room.heading));
}

Vec2 to_local(const RoomPlan& room, Vec2 world) {
    const Vec2 d = world - origin_corner(room.rect, room.heading);
    return {dot(d, unit(room.heading)), dot(d, unit(ccw(room.heading)))};
}

Rect to_world(const RoomPlan& room, const Rect& local) {
    const Vec2 a = to_world(room, Vec2{local.x, local.y});
    const Vec2 b = to_world(room, Vec2{local.max_x(), local.max_y()});
    return Rect::from_spans({std::min(a.x, b.x), std::max(a.x, b.x)}, {std::min(a.y, b.y), std::max(a.y, b.y)});
}

double wall_length(const RoomPlan& room, Direction local) {
    return axis_of(local) == Axis::y ? room.width_m : room.depth_m;
}

Interval to_world_span(const RoomPlan& room, Direction local, Interval along) {
    const Axis axis = other(axis_of(world_wall(room.heading, local)));
    const double a = to_world(room, wall_point(room, local, along.lo))[axis];
    const double b = to_world(room, wall_point(room, local, along.hi))[axis];
    return {std::min(a, b), std::max(a, b)};
}

Interval to_local_span(const RoomPlan& room, Direction local, Interval world) {
    const Direction wdir = world_wall(room.heading, local);
    const Axis axis = other(axis_of(wdir));
    Vec2 pa, pb;
    pa[axis_of(wdir)] = pb[axis_of(wdir)] = room.rect.wall_line(wdir);
    pa[axis] = world.lo;
    pb[axis] = world.hi;
    const Vec2 la = to_local(room, pa);
    const Vec2 lb = to_local(room, pb);
    const Axis local_axis = other(axis_of(local));
    return {std::min(la[local_axis], lb[local_axis]), std::max(la[local_axis], lb[local_axis])};
}

Interval shelf_span(const ShelfPlacement& s, const GenParams& p) { return {s.offset_m, s.offset_m + p.unit_width_m}; }

Rect shelf_footprint(const RoomPlan& room, const ShelfPlacement& s, const GenParams& p) {
    const double y = s.wall == Direction::north ? room.depth_m - p.shelf_depth_m : 0.0;
    return {s.offset_m, y, p.unit_width_m, p.shelf_depth_m};
}

Rect door_clearance(const RoomPlan& room, const Door& d) {
    const Interval span{d.center_offset_m - 0.5 * d.width_m - GenParams::kDoorJambM,
                        d.center_offset_m + 0.5 * d.width_m + GenParams::kDoorJambM};
    const double depth = dims::kDoorSwingDepthM;
    switch (d.wall) {
    case Direction::west: return Rect::from_spans({0.0, depth}, span);
    case Direction::east: return Rect::from_spans({room.width_m - depth, room.width_m}, span);
    case Direction::south: return Rect::from_spans(span, {0.0, depth});
    case Direction::north: return Rect::from_spans(span, {room.depth_m - depth, room.depth_m});
    }
    return {};
}

int required_shelves(int book_count, const ShelfSpec& spec) {
    if (book_count <= 0) throw InputError("required_shelves: book_count must be at least 1");
    if (spec.capacity() <= 0) throw InputError("required_shelves: shelf capacity must be positive");
    return (book_count + spec.capacity() - 1) / spec.capacity();
}

RoomSize room_dimensions(int shelf_count, const GenParams& p) {
    if (shelf_count < 1) throw InputError("room_dimensions: shelf_count must be at least 1");
    const int per_wall = (shelf_count + 1) / 2;
    return {std::max(p.min_room_length_m, per_wall * p.unit_width_m + 2 * p.wall_margin_m),
            2 * p.shelf_depth_m + p.corridor_width_m};
}

int shelves_on_wall(int shelf_count, Direction wall) { return wall == Direction::north ? (shelf_count + 1) / 2 : shelf_count / 2; }

RoomSize room_size(int shelf_count, std::optional<Direction> bay_wall, const GenParams& p) {
    RoomSize size = room_dimensions(shelf_count, p);
    if (bay_wall) {
        const int on_bay_wall = shelves_on_wall(shelf_count, *bay_wall);
        size.width_m = std::max(size.width_m, 2 * p.wall_margin_m + on_bay_wall * p.unit_width_m + p.min_overlap_m());
    }
    return size;
}

std::vector<Interval> bay_door_slots(int shelves_on_bay_wall, double wall_length, const GenParams& p) {
    const double m = p.wall_margin_m;
    const double u = p.unit_width_m;
    const double need = p.min_overlap_m();
    if (shelves_on_bay_wall == 0) return {{0.0, wall_length}};
    std::vector<Interval> slots{{0.0, m + need}};
    for (int k = 1; k < shelves_on_bay_wall; ++k) slots.push_back({m + k * u, m + k * u + need});
    slots.push_back({m + shelves_on_bay_wall * u, wall_length});
    return slots;
}

std::vector<ShelfPlacement> plan_shelves(const Category& category, RoomSize size, const ShelfSpec& spec, const GenParams& p,
                                         std::optional<Direction> door_wall, std::optional<Interval> door_reserved) {
    const int count = required_shelves(static_cast<int>(category.books.size()), spec);
    std::vector<ShelfPlacement> shelves(static_cast<std::size_t>(count));
    double next[2] = {p.wall_margin_m, p.wall_margin_m};  // north, south
    for (int k = 0; k < count; ++k) {
        auto& s = shelves[static_cast<std::size_t>(k)];
        s.wall = k % 2 == 0 ? Direction::north : Direction::south;
        double& offset = next[k % 2];
        if (door_wall == s.wall && door_reserved && offset + spec.unit_width_m > door_reserved->lo + kEps &&
            offset < door_reserved->hi - kEps)
            offset = door_reserved->hi;
        s.offset_m = quantize(offset);
        offset += spec.unit_width_m;
        if (s.offset_m + spec.unit_width_m > size.width_m - p.wall_margin_m + kEps)
            throw InvariantError("plan_shelves: shelf " + std::to_string(k) + " does not fit a room of width " +
                                 std::to_string(size.width_m));
    }
    const auto cap = static_cast<std::size_t>(spec.capacity());
    for (std::size_t i = 0; i < category.books.size(); ++i) {
        const auto within = static_cast<int>(i % cap);
        shelves[i / cap].assigned.push_back({category.books[i].id, within / spec.slots_per_row, within % spec.slots_per_row});
    }
    return shelves;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<DecorItem> plan_decor(const RoomPlan& room, std::uint64_t seed, const GenParams& p) {
    std::vector<DecorItem> out;
    const double area = room.area();
    if (area + kEps < dims::kPedestalMinAreaM2) return out;

    const Rect bounds = room.local_bounds();
    std::vector<Rect> shelves;
    for (const auto& s : room.shelves) shelves.push_back(shelf_footprint(room, s, p));
    std::vector<Rect> doors;
    for (const auto& d : room.doors) doors.push_back(door_clearance(room, d));

    std::vector<Rect> keep_out;  // inflated footprints of placed decor
    DecorItem pedestal{DecorKind::exhibit_pedestal,
                       {0.5 * room.width_m, 0.5 * room.depth_m},
                       {dims::kPedestalLengthM, dims::kPedestalDepthM},
                       0.0,
                       room.category + ": " + std::to_string(room.book_count()) +
                           " books in this room. Turn the exhibit to read about the collection."};
    const Rect pz = pedestal.footprint().inflated(dims::kPedestalClearanceM);
    if (contains(bounds, pz) && !hits_any(pz, shelves) && !hits_any(pedestal.footprint(), doors)) {
        out.push_back(pedestal);
        keep_out.push_back(pz);
    }

    const int pairs = static_cast<int>(std::floor((area - dims::kPedestalMinAreaM2) / dims::kTablePairAreaM2 + kEps));
    if (pairs <= 0) return out;

    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(room.id)));
    const double step = dims::kSpawnStepM;
    const double clear = dims::kFurnitureClearanceM;
    const double offset = 0.5 * dims::kTableSizeM + dims::kChairGapM + 0.5 * dims::kChairSizeM;
    constexpr Direction sides[] = {Direction::east, Direction::west, Direction::north, Direction::south};

    struct Option {
        Vec2 table;
        Direction side;
    };
    for (int pair = 0; pair < pairs; ++pair) {
        std::vector<Option> options;
        const int nx = static_cast<int>(std::floor(room.width_m / step));
        const int ny = static_cast<int>(std::floor(room.depth_m / step));
        for (int ix = 1; ix < nx; ++ix) {
            for (int iy = 1; iy < ny; ++iy) {
                const Vec2 t{quantize(ix * step), quantize(iy * step)};
                for (Direction side : sides) {
                    const Vec2 c = t + offset * unit(side);
                    const Rect table{t.x - 0.5 * dims::kTableSizeM, t.y - 0.5 * dims::kTableSizeM, dims::kTableSizeM,
                                     dims::kTableSizeM};
                    const Rect chair{c.x - 0.5 * dims::kChairSizeM, c.y - 0.5 * dims::kChairSizeM, dims::kChairSizeM,
                                     dims::kChairSizeM};
                    const Rect group = Rect::from_spans({std::min(table.x, chair.x), std::max(table.max_x(), chair.max_x())},
                                                        {std::min(table.y, chair.y), std::max(table.max_y(), chair.max_y())});
                    const Rect padded = group.inflated(clear);
                    if (!contains(bounds, padded) || hits_any(padded, shelves) || hits_any(padded, doors) ||
                        hits_any(group, keep_out))
                        continue;
                    options.push_back({t, side});
                }
            }
        }
        if (options.empty()) break;
        const Option pick = options[rng() % options.size()];
        const Vec2 c = pick.table + offset * unit(pick.side);
        const double facing = static_cast<double>((static_cast<int>(opposite(pick.side)) * -90 + 360) % 360);
        DecorItem table{DecorKind::table, pick.table, {dims::kTableSizeM, dims::kTableSizeM}, 0.0, {}};
        DecorItem chair{DecorKind::chair, {quantize(c.x), quantize(c.y)}, {dims::kChairSizeM, dims::kChairSizeM}, facing, {}};
        keep_out.push_back(table.footprint().inflated(clear));
        keep_out.push_back(chair.footprint().inflated(clear));
        out.push_back(std::move(table));
        out.push_back(std::move(chair));
    }
    return out;
}

std::string_view to_string(DoorKind k) {
    switch (k) {
    case DoorKind::chain_entrance: return "chain_entrance";
    case DoorKind::chain_exit: return "chain_exit";
    case DoorKind::extra: return "extra";
    }
    return "?";
}

std::string_view to_string(DecorKind k) {
    switch (k) {
    case DecorKind::exhibit_pedestal: return "exhibit_pedestal";
    case DecorKind::table: return "table";
    case DecorKind::chair: return "chair";
    case DecorKind::plant: return "plant";
    }
    return "?";
}

std::optional<DoorKind> parse_door_kind(std::string_view s) {
    for (auto k : {DoorKind::chain_entrance, DoorKind::chain_exit, DoorKind::extra})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<DecorKind> parse_decor_kind(std::string_view s) {
    for (auto k : {DecorKind::exhibit_pedestal, DecorKind::table, DecorKind::chair, DecorKind::plant})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

}  // namespace stacks
