#include "stacks/layout.hpp"

#include "stacks/errors.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace stacks {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Length of wall the two rectangles share (0 when they do not touch).
double touch_length(const Rect& a, const Rect& b) {
    for (auto d : {Direction::east, Direction::south, Direction::west, Direction::north}) {
        if (std::abs(a.wall_line(d) - b.wall_line(opposite(d))) <= kEps) {
            const double len = overlap_length(a.wall_span(d), b.wall_span(opposite(d)));
            if (len > kEps) return len;
        }
    }
    return 0.0;
}

std::vector<Interval> merge(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + kEps)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

std::vector<Interval> intersect_sets(const std::vector<Interval>& a, const std::vector<Interval>& b) {
    std::vector<Interval> out;
    for (const auto& x : a)
        for (const auto& y : b)
            if (auto r = intersect(x, y)) out.push_back(*r);
    return merge(std::move(out));
}

/// Door center within `spans` (each must fit a full `need`-wide reservation) closest to `target`.
std::optional<double> choose_center(const std::vector<Interval>& spans, double target, double need) {
    std::optional<double> best;
    double best_dist = kInf;
    for (const auto& s : spans) {
        if (s.length() < need - kEps) continue;
        const double lo = s.lo + 0.5 * need;
        const double hi = std::max(lo, s.hi - 0.5 * need);
        const double c = std::clamp(target, lo, hi);
        const double dist = std::abs(c - target);
        if (dist < best_dist - kEps) {
            best = c;
            best_dist = dist;
        }
    }
    return best;
}

std::vector<Interval> to_world(const RoomPlan& room, Direction local, const std::vector<Interval>& spans) {
    std::vector<Interval> out;
    out.reserve(spans.size());
    for (const auto& s : spans) out.push_back(to_world_span(room, local, s));
    return merge(std::move(out));
}

/// Local door on `room` whose world opening is `opening`.
Door make_door(const RoomPlan& room, Direction world_dir, Interval opening, int id, DoorKind kind, int neighbor) {
    const Direction local = local_wall(room.heading, world_dir);
    const Interval along = to_local_span(room, local, opening);
    return Door{id, local, quantize(along.center()), quantize(along.length()), kind, neighbor};
}

std::optional<Direction> bay_for(Direction heading, std::optional<Direction> next) {
    if (!next) return std::nullopt;
    if (*next == cw(heading)) return Direction::south;
    if (*next == ccw(heading)) return Direction::north;
    return std::nullopt;
}

/// Along-wall spans of a local wall not covered by any other room, in local coordinates.
std::vector<Interval> exterior_spans(const Layout& layout, const RoomPlan& room, Direction local) {
    const Direction wdir = world_wall(room.heading, local);
    std::vector<Interval> spans = free_wall_spans(room, local, layout.params);
    for (const auto& other : layout.rooms) {
        if (other.id == room.id) continue;
        if (std::abs(other.rect.wall_line(opposite(wdir)) - room.rect.wall_line(wdir)) > kEps) continue;
        const auto shared = intersect(other.rect.wall_span(opposite(wdir)), room.rect.wall_span(wdir));
        if (!shared || shared->length() <= kEps) continue;
        spans = subtract(spans, to_local_span(room, local, *shared));
    }
    return spans;
}

constexpr Direction kExitWalls[] = {Direction::east, Direction::north, Direction::south, Direction::west};

bool add_outside_door(Layout& layout, RoomPlan& room, DoorKind kind) {
    const double need = layout.params.min_overlap_m();
    for (Direction local : kExitWalls) {
        const auto spans = exterior_spans(layout, room, local);
        if (auto c = choose_center(spans, 0.5 * wall_length(room, local), need)) {
            room.doors.push_back(Door{kOutside, local, quantize(*c), layout.params.door_width_m, kind, kOutside});
            return true;
        }
    }
    return false;
}

}  // namespace

Vec2 Connection::center() const {
    Vec2 c;
    c[axis_of(wall_a)] = line;
    c[other(axis_of(wall_a))] = opening.center();
    return c;
}

PlacementCursor PlacementCursor::next() const {
    PlacementCursor c = *this;
    if (++c.rooms_in_arm >= c.arm_limit) {
        c.direction = ccw ? stacks::ccw(direction) : cw(direction);
        c.rooms_in_arm = 0;
        if (++c.turns % 2 == 0) ++c.arm_limit;
    }
    return c;
}

double max_inward_slide(const Rect& candidate, std::span<const Rect> obstacles, Direction inward, const Rect& must_touch,
                        double min_overlap) {
    const Axis slide_axis = axis_of(inward);
    const Axis cross_axis = other(slide_axis);
    const bool positive = sign_of(inward) > 0;
    // Work in a coordinate that increases along `inward`.
    auto along = [positive](Interval iv) { return positive ? iv : Interval{-iv.hi, -iv.lo}; };

    const Interval cand = along(candidate.span(slide_axis));
    double limit = kInf;
    for (const auto& o : obstacles) {
        if (overlap_length(candidate.span(cross_axis), o.span(cross_axis)) <= kEps) continue;
        const Interval os = along(o.span(slide_axis));
        if (os.lo >= cand.hi - kEps)
            limit = std::min(limit, os.lo - cand.hi);
        else if (os.hi > cand.lo + kEps)
            limit = 0.0;  // already overlapping
    }

    const Interval touch = along(must_touch.span(slide_axis));
    if (overlap_length(cand, touch) < min_overlap - kEps) return 0.0;
    // Overlap shrinks once the candidate's trailing edge passes touch.hi - min_overlap.
    limit = std::min(limit, touch.hi - cand.lo - min_overlap);
    return std::max(0.0, limit);
}

std::optional<PlacementResult> place_next_room(std::span<const Rect> rooms, std::span<const Rect> keep_out,
                                               const Rect& previous, const PlacementRequest& req) {
    const Direction d = req.direction;
    const Axis place_axis = axis_of(d);
    const Axis wall_axis = other(place_axis);
    const Rect shape = world_footprint(d, req.size, {});
    const double ext_wall = shape.extent(wall_axis);
    const double ext_place = shape.extent(place_axis);
    const double m = req.min_overlap;

    const double p0 = sign_of(d) > 0 ? previous.wall_line(d) : previous.wall_line(d) - ext_place;
    auto at = [&](double c) {
        Vec2 corner;
        corner[place_axis] = p0;
        corner[wall_axis] = c;
        return world_footprint(d, req.size, corner);
    };

    const Interval wall = previous.span(wall_axis);
    const double c0 = sign_of(req.inward) > 0 ? wall.hi - ext_wall : wall.lo;

    // Positions keeping >= m of overlap with some door segment.
    std::vector<Interval> feasible;
    for (const auto& seg : req.door_segments) {
        if (seg.length() < m - kEps || ext_wall < m - kEps) continue;
        const Interval range{seg.lo + m - ext_wall, seg.hi - m};
        if (range.hi >= range.lo - kEps) feasible.push_back({range.lo, std::max(range.lo, range.hi)});
    }
    feasible = merge(std::move(feasible));

    const Interval place_span{p0, p0 + ext_place};
    auto cut = [&](const Rect& o) {
        if (overlap_length(place_span, o.span(place_axis)) <= kEps) return;
        const Interval os = o.span(wall_axis);
        feasible = subtract(feasible, {os.lo - ext_wall, os.hi});
    };
    for (const auto& r : rooms) cut(r);
    for (const auto& r : keep_out) cut(r);
    if (feasible.empty()) return std::nullopt;

    // Nearest feasible position to the flush start, preferring the inward side on ties.
    const double inward_sign = sign_of(req.inward);
    double c = 0.0;
    double best = kInf;
    for (const auto& iv : feasible) {
        const double p = std::clamp(c0, iv.lo, iv.hi);
        const double dist = std::abs(p - c0);
        if (dist < best - kEps || (std::abs(dist - best) <= kEps && (p - c) * inward_sign > 0)) {
            best = dist;
            c = p;
        }
    }
    c = quantize(c);

    auto best_segment = [&](const Rect& r) {
        std::optional<Interval> pick;
        for (const auto& seg : req.door_segments) {
            auto ov = intersect(r.span(wall_axis), seg);
            if (ov && ov->length() >= m - kEps && (!pick || ov->length() > pick->length() + kEps)) pick = ov;
        }
        return pick;
    };

    PlacementResult result{at(c), 0.0, {}};
    if (req.compress && best <= kEps) {
        auto seg = best_segment(result.rect);
        if (seg) {
            Rect must = previous;
            if (wall_axis == Axis::x) {
                must.x = seg->lo;
                must.w = seg->length();
            } else {
                must.y = seg->lo;
                must.h = seg->length();
            }
            std::vector<Rect> obstacles(rooms.begin(), rooms.end());
            obstacles.insert(obstacles.end(), keep_out.begin(), keep_out.end());
            const double t = max_inward_slide(result.rect, obstacles, req.inward, must, m);
            if (t > kEps) {
                const Rect moved = at(quantize(c + inward_sign * t));
                const bool contact = std::any_of(rooms.begin(), rooms.end(),
                                                 [&](const Rect& r) { return !(r == previous) && touch_length(moved, r) > kEps; });
                if (contact) {
                    result.rect = moved;
                    result.slide_m = t;
                }
            }
        }
    }

    auto span = best_segment(result.rect);
    if (!span) return std::nullopt;
    result.door_span = *span;
    return result;
}

std::optional<SharedWall> detect_adjacency(const Rect& a, const Rect& b, double min_overlap) {
    for (auto d : {Direction::east, Direction::south, Direction::west, Direction::north}) {
        if (std::abs(a.wall_line(d) - b.wall_line(opposite(d))) > kEps) continue;
        auto ov = intersect(a.wall_span(d), b.wall_span(opposite(d)));
        if (ov && ov->length() > kEps && ov->length() >= min_overlap - kEps) return SharedWall{d, opposite(d), a.wall_line(d), *ov};
    }
    return std::nullopt;
}

std::optional<SharedWall> detect_adjacency(const RoomPlan& a, const RoomPlan& b, double min_overlap) {
    return detect_adjacency(a.rect, b.rect, min_overlap);
}

int max_connections(const Rect& r) {
    const int raw = static_cast<int>(std::floor(r.perimeter() / 10.0 + 1e-9)) + 1;
    return std::clamp(raw, 2, 6);
}

int max_connections(const RoomPlan& room) { return max_connections(room.rect); }

std::vector<Interval> free_wall_spans(const RoomPlan& room, Direction local, const GenParams& p) {
    std::vector<Interval> spans{{0.0, wall_length(room, local)}};
    for (const auto& s : room.shelves)
        if (s.wall == local) spans = subtract(spans, shelf_span(s, p));
    for (const auto& d : room.doors)
        if (d.wall == local)
            spans = subtract(spans, {d.opening().lo - GenParams::kDoorJambM, d.opening().hi + GenParams::kDoorJambM});
    return spans;
}

Layout assign_extra_connections(Layout layout) {
    const GenParams& p = layout.params;
    const double need = p.min_overlap_m();
    const auto n = layout.rooms.size();

    std::vector<int> degree(n, 0);
    for (const auto& c : layout.connections) {
        ++degree[static_cast<std::size_t>(c.a)];
        ++degree[static_cast<std::size_t>(c.b)];
    }

    struct Candidate {
        int a, b;
        SharedWall wall;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j)
            if (auto sw = detect_adjacency(layout.rooms[i], layout.rooms[j], need))
                candidates.push_back({static_cast<int>(i), static_cast<int>(j), *sw});
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (std::abs(x.wall.overlap.length() - y.wall.overlap.length()) > kEps) return x.wall.overlap.length() > y.wall.overlap.length();
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });

    for (const auto& cand : candidates) {
        auto& ra = layout.rooms[static_cast<std::size_t>(cand.a)];
        auto& rb = layout.rooms[static_cast<std::size_t>(cand.b)];
        if (degree[static_cast<std::size_t>(cand.a)] >= max_connections(ra) ||
            degree[static_cast<std::size_t>(cand.b)] >= max_connections(rb))
            continue;
        const Direction la = local_wall(ra.heading, cand.wall.wall_a);
        const Direction lb = local_wall(rb.heading, cand.wall.wall_b);
        auto allowed = intersect_sets(to_world(ra, la, free_wall_spans(ra, la, p)), to_world(rb, lb, free_wall_spans(rb, lb, p)));
        allowed = intersect_sets(allowed, {cand.wall.overlap});
        auto center = choose_center(allowed, cand.wall.overlap.center(), need);
        if (!center) continue;

        const double c = quantize(*center);
        const Interval opening{c - 0.5 * p.door_width_m, c + 0.5 * p.door_width_m};
        const int id = static_cast<int>(layout.connections.size());
        layout.connections.push_back(
            Connection{id, cand.a, cand.b, ConnectionKind::extra, cand.wall.wall_a, cand.wall.line, cand.wall.overlap, opening});
        ra.doors.push_back(make_door(ra, cand.wall.wall_a, opening, id, DoorKind::extra, cand.b));
        rb.doors.push_back(make_door(rb, cand.wall.wall_b, opening, id, DoorKind::extra, cand.a));
        ++degree[static_cast<std::size_t>(cand.a)];
        ++degree[static_cast<std::size_t>(cand.b)];
    }
    return layout;
}

Layout generate_layout(const std::vector<Category>& categories, const GenParams& params, std::uint64_t seed) {
    if (categories.empty()) throw InputError("generate_layout: no categories");
    if (auto problems = validate_params(params); !problems.empty()) throw InputError("invalid parameters: " + problems.front());

    Layout layout;
    layout.seed = seed;
    layout.params = params;
    layout.params.seed = seed;
    const GenParams& p = layout.params;
    const ShelfSpec spec = ShelfSpec::from(p);
    const double need = p.min_overlap_m();
    const std::size_t n = categories.size();

    // Planned exit direction of every room, straight from the spiral walk.
    std::vector<Direction> planned;
    {
        PlacementCursor cursor{.ccw = p.ccw};
        for (std::size_t i = 0; i + 1 < n; ++i) {
            planned.push_back(cursor.direction);
            cursor = cursor.next();
        }
    }

    std::vector<int> shelf_counts;
    for (const auto& c : categories) shelf_counts.push_back(required_shelves(static_cast<int>(c.books.size()), spec));

    auto make_room = [&](std::size_t i, Direction heading) {
        RoomPlan room;
        room.id = static_cast<int>(i);
        room.category = categories[i].name;
        room.heading = heading;
        room.height_m = p.room_height_m;
        if (i + 1 < n) room.bay_wall = bay_for(heading, planned[i]);
        const RoomSize size = room_size(shelf_counts[i], room.bay_wall, p);
        room.width_m = size.width_m;
        room.depth_m = size.depth_m;
        room.rect = world_footprint(heading, size, {});
        room.shelves = plan_shelves(categories[i], size, spec, p);
        return room;
    };

    // World spans on `prev`'s wall facing `d` that can take the chain door to the next room.
    auto exit_segments = [&](const RoomPlan& prev, Direction d) {
        const Direction local = local_wall(prev.heading, d);
        std::vector<Interval> out;
        if (prev.bay_wall == local) {
            for (const auto& slot : bay_door_slots(shelves_on_wall(shelf_counts[static_cast<std::size_t>(prev.id)], local),
                                                   wall_length(prev, local), p))
                out.push_back(to_world_span(prev, local, slot));
        } else {
            for (const auto& s : to_world(prev, local, free_wall_spans(prev, local, p)))
                if (s.length() >= need - kEps) out.push_back(s);
        }
        return out;
    };

    std::vector<Rect> rects;
    std::vector<Rect> keep_out;

    layout.rooms.push_back(make_room(0, Direction::east));
    rects.push_back(layout.rooms[0].rect);
    {
        // Keep the world entrance in front of room 0's west wall clear of later rooms.
        const RoomPlan& r0 = layout.rooms[0];
        const double mid = 0.5 * r0.depth_m;
        keep_out.push_back(Rect::from_spans({-dims::kDoorSwingDepthM, 0.0}, {mid - 0.5 * need, mid + 0.5 * need}));
    }

    struct Option {
        Direction direction;
        bool slide;
    };
    struct Frame {
        std::vector<Option> options;
        std::size_t next = 0;
        std::vector<Rect> tried;
        std::vector<ShelfPlacement> prev_shelves;  // restored when the room placed from this frame is undone
    };
    auto frame_for = [&](std::size_t i) {
        Frame f;
        const Direction h = layout.rooms[i - 1].heading;
        std::vector<Direction> dirs;
        for (Direction d : {planned[i - 1], h, cw(h), ccw(h)})
            if (d != opposite(h) && std::find(dirs.begin(), dirs.end(), d) == dirs.end()) dirs.push_back(d);
        for (Direction d : dirs) {
            if (p.compress) f.options.push_back({d, true});
            f.options.push_back({d, false});
        }
        return f;
    };

    auto try_place = [&](std::size_t i, Frame& f, const Option& opt) {
        RoomPlan& prev = layout.rooms[i - 1];
        RoomPlan room = make_room(i, opt.direction);
        const Direction d = opt.direction;
        PlacementRequest req{d, p.ccw ? ccw(d) : cw(d), RoomSize{room.width_m, room.depth_m}, exit_segments(prev, d), need, opt.slide};
        const auto placed = place_next_room(rects, keep_out, prev.rect, req);
        if (!placed) return false;
        if (std::find(f.tried.begin(), f.tried.end(), placed->rect) != f.tried.end()) return false;
        f.tried.push_back(placed->rect);

        room.rect = placed->rect;
        const double c = quantize(placed->door_span.center());
        const Interval opening{c - 0.5 * p.door_width_m, c + 0.5 * p.door_width_m};
        const Axis wall_axis = other(axis_of(d));
        const auto overlap = *intersect(prev.rect.span(wall_axis), room.rect.span(wall_axis));
        const int id = static_cast<int>(layout.connections.size());

        f.prev_shelves = prev.shelves;
        const Direction exit_local = local_wall(prev.heading, d);
        if (prev.bay_wall == exit_local) {
            const Interval along = to_local_span(prev, exit_local, opening);
            prev.shelves = plan_shelves(categories[i - 1], {prev.width_m, prev.depth_m}, spec, p, exit_local,
                                        Interval{along.lo - GenParams::kDoorJambM, along.hi + GenParams::kDoorJambM});
        }
        layout.connections.push_back(Connection{id, prev.id, room.id, ConnectionKind::chain, d, prev.rect.wall_line(d), overlap, opening});
        prev.doors.push_back(make_door(prev, d, opening, id, DoorKind::chain_exit, room.id));
        room.doors.push_back(make_door(room, opposite(d), opening, id, DoorKind::chain_entrance, prev.id));
        rects.push_back(room.rect);
        layout.rooms.push_back(std::move(room));
        return true;
    };

    auto undo_last = [&](const Frame& f) {
        layout.rooms.pop_back();
        rects.pop_back();
        layout.connections.pop_back();
        RoomPlan& prev = layout.rooms.back();
        prev.doors.pop_back();
        prev.shelves = f.prev_shelves;
    };

    // The last room also needs a stretch of outside wall for the world exit.
    auto has_way_out = [&] {
        const RoomPlan& last = layout.rooms.back();
        for (Direction local : kExitWalls)
            if (choose_center(exterior_spans(layout, last, local), 0.0, need)) return true;
        return false;
    };

    // Depth-first over placement options: spiral direction first, then straight, then either turn;
    // each with and without the inward slide. Backtracks out of pockets the spiral has walled off.
    constexpr long kMaxAttempts = 200000;
    long attempts = 0;
    std::vector<Frame> frames;
    std::size_t i = 1;
    if (n > 1) frames.push_back(frame_for(1));
    while (i < n) {
        Frame& f = frames.back();
        bool ok = false;
        while (!ok && f.next < f.options.size()) {
            if (++attempts > kMaxAttempts) throw InvariantError("generate_layout: placement search exhausted at room " + std::to_string(i));
            ok = try_place(i, f, f.options[f.next++]);
            if (ok && i + 1 == n && !has_way_out()) {
                undo_last(f);
                ok = false;
            }
        }
        if (ok) {
            if (++i < n) frames.push_back(frame_for(i));
            continue;
        }
        frames.pop_back();
        if (frames.empty()) throw InvariantError("generate_layout: no valid position for room " + std::to_string(i));
        --i;
        undo_last(frames.back());
    }

    // World entrance on room 0 (kept clear by the keep-out zone) and world exit on the last room.
    {
        RoomPlan& first = layout.rooms.front();
        first.doors.insert(first.doors.begin(),
                           Door{kOutside, Direction::west, quantize(0.5 * first.depth_m), p.door_width_m, DoorKind::chain_entrance, kOutside});
        RoomPlan& last = layout.rooms.back();
        if (!add_outside_door(layout, last, DoorKind::chain_exit))
            throw InvariantError("generate_layout: no outside wall left for the world exit");
    }

    layout = assign_extra_connections(std::move(layout));

    for (auto& room : layout.rooms) room.decor = plan_decor(room, seed, p);

    Rect box = layout.rooms.front().rect;
    for (const auto& r : layout.rooms) {
        const double x0 = std::min(box.x, r.rect.x), y0 = std::min(box.y, r.rect.y);
        const double x1 = std::max(box.max_x(), r.rect.max_x()), y1 = std::max(box.max_y(), r.rect.max_y());
        box = Rect::from_spans({x0, x1}, {y0, y1});
    }
    layout.bbox = box;
    return layout;
}

std::string_view to_string(ConnectionKind k) { return k == ConnectionKind::chain ? "chain" : "extra"; }

std::optional<ConnectionKind> parse_connection_kind(std::string_view s) {
    if (s == "chain") return ConnectionKind::chain;
    if (s == "extra") return ConnectionKind::extra;
    return std::nullopt;
}

std::vector<int> neighbors(const Layout& layout, int room) {
    std::set<int> out;
    for (const auto& c : layout.connections) {
        if (c.a == room) out.insert(c.b);
        if (c.b == room) out.insert(c.a);
    }
    return {out.begin(), out.end()};
}

}  // namespace stacks
