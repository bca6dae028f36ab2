#include "stacks/navmap.hpp"

#include "stacks/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace stacks {
namespace {

std::size_t node_index(const NavGraph& g, int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= g.nodes.size()) throw InputError("unknown room id " + std::to_string(id));
    return static_cast<std::size_t>(id);
}

bool clear_of(const RoomPlan& room, Vec2 local, const GenParams& p) {
    const double c = dims::kSpawnClearanceM;
    if (!contains(room.local_bounds().inflated(-c), local, 0.0)) return false;
    for (const auto& s : room.shelves)
        if (distance(local, shelf_footprint(room, s, p)) < c - kEps) return false;
    for (const auto& d : room.decor)
        if (distance(local, d.footprint()) < c - kEps) return false;
    return true;
}

}  // namespace

NavGraph build_navgraph(const Layout& layout) {
    NavGraph g;
    for (const auto& r : layout.rooms) g.nodes.push_back(r.id);
    g.incident.resize(g.nodes.size());
    for (const auto& c : layout.connections) {
        const Vec2 ca = layout.rooms[static_cast<std::size_t>(c.a)].rect.center();
        const Vec2 cb = layout.rooms[static_cast<std::size_t>(c.b)].rect.center();
        g.incident[static_cast<std::size_t>(c.a)].push_back(g.edges.size());
        g.incident[static_cast<std::size_t>(c.b)].push_back(g.edges.size());
        g.edges.push_back({c.a, c.b, c.id, distance(ca, cb)});
    }
    return g;
}

std::vector<int> shortest_path(const NavGraph& g, int from, int to) {
    const std::size_t s = node_index(g, from);
    const std::size_t t = node_index(g, to);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Distances to the target, then a greedy walk that always takes the smallest id still on a shortest path.
    std::vector<double> dist(g.nodes.size(), kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[t] = 0.0;
    queue.push({0.0, t});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (std::size_t e : g.incident[u]) {
            const auto v = static_cast<std::size_t>(g.other_end(g.edges[e], static_cast<int>(u)));
            const double nd = d + g.edges[e].weight;
            if (nd < dist[v]) {
                dist[v] = nd;
                queue.push({nd, v});
            }
        }
    }
    if (dist[s] == kInf) throw InvariantError("shortest_path: room " + std::to_string(to) + " unreachable");

    std::vector<int> path{from};
    std::size_t u = s;
    while (u != t) {
        std::size_t best = u;
        for (std::size_t e : g.incident[u]) {
            const auto v = static_cast<std::size_t>(g.other_end(g.edges[e], static_cast<int>(u)));
            const double slack = std::abs(dist[u] - (g.edges[e].weight + dist[v]));
            if (slack <= 1e-9 * std::max(1.0, dist[u]) && dist[v] < dist[u] && (best == u || v < best)) best = v;
        }
        if (best == u) throw InvariantError("shortest_path: inconsistent distances");
        path.push_back(static_cast<int>(best));
        u = best;
    }
    return path;
}

double path_weight(const NavGraph& g, const std::vector<int>& path) {
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        double step = std::numeric_limits<double>::infinity();
        for (std::size_t e : g.incident[node_index(g, path[i])])
            if (g.other_end(g.edges[e], path[i]) == path[i + 1]) step = std::min(step, g.edges[e].weight);
        w += step;
    }
    return w;
}

Vec2 spawn_point(const RoomPlan& room, const GenParams& p) {
    const Vec2 center = room.rect.center();
    const double step = dims::kSpawnStepM;
    const int east_steps = static_cast<int>(std::ceil(room.rect.w / step));
    const int north_steps = static_cast<int>(std::ceil(room.rect.h / step));
    auto at = [&](int ex, int ny) { return Vec2{quantize(center.x + ex * step), quantize(center.y + ny * step)}; };

    for (int ny = 0; ny <= north_steps; ++ny)
        for (int ex = 0; ex <= east_steps; ++ex)
            if (const Vec2 w = at(ex, ny); clear_of(room, to_local(room, w), p)) return w;

    // Nothing east or north of the center: take the closest clear grid point anywhere.
    std::optional<Vec2> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int ny = -north_steps; ny <= north_steps; ++ny)
        for (int ex = -east_steps; ex <= east_steps; ++ex) {
            const Vec2 w = at(ex, ny);
            const double d = std::hypot(ex, ny);
            if (d < best_d && clear_of(room, to_local(room, w), p)) {
                best = w;
                best_d = d;
            }
        }
    if (!best) throw InvariantError("spawn_point: room " + std::to_string(room.id) + " has no clear floor");
    return *best;
}

Vec2 door_position(const RoomPlan& room, const Door& d) {
    Vec2 local;
    switch (d.wall) {
    case Direction::west: local = {0.0, d.center_offset_m}; break;
    case Direction::east: local = {room.width_m, d.center_offset_m}; break;
    case Direction::south: local = {d.center_offset_m, 0.0}; break;
    case Direction::north: local = {d.center_offset_m, room.depth_m}; break;
    }
    const Vec2 w = to_world(room, local);
    return {quantize(w.x), quantize(w.y)};
}

MapModel build_map(const Layout& layout) {
    MapModel m;
    for (const auto& r : layout.rooms) {
        m.outlines.push_back({r.id, r.rect, r.category});
        m.teleports.push_back({r.id, spawn_point(r, layout.params)});
        m.category_index.push_back({r.category, r.id});
        for (const auto& d : r.doors) {
            if (d.neighbor == kOutside)
                m.doors.push_back({kOutside, d.kind == DoorKind::chain_exit ? MarkerKind::exit : MarkerKind::entrance, r.id,
                                   door_position(r, d)});
        }
    }
    for (const auto& c : layout.connections) {
        const Vec2 p = c.center();
        m.doors.push_back({c.id, MarkerKind::connection, c.a, {quantize(p.x), quantize(p.y)}});
    }
    std::stable_sort(m.category_index.begin(), m.category_index.end(), [](const CategoryEntry& a, const CategoryEntry& b) {
        return std::tie(a.category, a.room_id) < std::tie(b.category, b.room_id);
    });
    return m;
}

std::vector<Signboard> build_signboards(const Layout& layout) {
    std::vector<Signboard> out;
    for (const auto& r : layout.rooms) {
        Signboard s{r.id, {}};
        for (const auto& d : r.doors) {
            std::string label;
            if (d.neighbor == kOutside)
                label = d.kind == DoorKind::chain_exit ? "Exit" : "Entrance";
            else
                label = layout.rooms[static_cast<std::size_t>(d.neighbor)].category;
            s.entries.push_back({d.id, d.neighbor, std::move(label), world_wall(r.heading, d.wall)});
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string_view to_string(MarkerKind k) {
    switch (k) {
    case MarkerKind::connection: return "connection";
    case MarkerKind::entrance: return "entrance";
    case MarkerKind::exit: return "exit";
    }
    return "?";
}

std::optional<MarkerKind> parse_marker_kind(std::string_view s) {
    for (auto k : {MarkerKind::connection, MarkerKind::entrance, MarkerKind::exit})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

}  // namespace stacks
