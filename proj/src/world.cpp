#include "stacks/world.hpp"

#include "stacks/errors.hpp"
#include "stacks/pagination.hpp"
#include "stacks/texts.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace stacks {

using json = nlohmann::json;

namespace {

// ---- canonical writer ----

void write_real(std::string& out, double v) {
    char buf[64];
    const double q = quantize(v);
    auto res = std::to_chars(buf, buf + sizeof buf, q, std::chars_format::fixed, 6);
    out.append(buf, res.ptr);
}

void write_canonical(std::string& out, const json& j);

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
    std::string out;
    write_canonical(out, j);
    return out;
}

namespace {

void write_canonical(std::string& out, const json& j) {
    switch (j.type()) {
    case json::value_t::object: {
        out.push_back('{');
        bool first = true;
        for (const auto& [k, v] : j.items()) {  // std::map ordering: sorted keys
            if (!first) out.push_back(',');
            first = false;
            out += json(k).dump();
            out.push_back(':');
            write_canonical(out, v);
        }
        out.push_back('}');
        break;
    }
    case json::value_t::array: {
        out.push_back('[');
        bool first = true;
        for (const auto& v : j) {
            if (!first) out.push_back(',');
            first = false;
            write_canonical(out, v);
        }
        out.push_back(']');
        break;
    }
    case json::value_t::number_float: write_real(out, j.get<double>()); break;
    default: out += j.dump(); break;
    }
}

// ---- field access with schema errors ----

const json& at(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("world: missing field '") + key + "'");
    return *it;
}

double real(const json& j, const char* key) {
    const json& v = at(j, key);
    if (!v.is_number()) throw InputError(std::string("world: field '") + key + "' must be a number");
    return v.get<double>();
}

template <class Int>
Int integer(const json& j, const char* key) {
    const json& v = at(j, key);
    if (!v.is_number_integer()) throw InputError(std::string("world: field '") + key + "' must be an integer");
    return v.get<Int>();
}

std::string text(const json& j, const char* key) {
    const json& v = at(j, key);
    if (!v.is_string()) throw InputError(std::string("world: field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string text_or(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? std::string() : it->get<std::string>();
}

const json& array(const json& j, const char* key) {
    const json& v = at(j, key);
    if (!v.is_array()) throw InputError(std::string("world: field '") + key + "' must be an array");
    return v;
}

template <class E, class Parse>
E enumerated(const json& j, const char* key, Parse parse) {
    const std::string s = text(j, key);
    auto v = parse(s);
    if (!v) throw InputError(std::string("world: bad value '") + s + "' for '" + key + "'");
    return *v;
}

}  // namespace

namespace wire {

json to_json(Vec2 v) { return {{"x", v.x}, {"y", v.y}}; }
json to_json(Vec3 v) { return {{"x", v.x}, {"y", v.y}, {"z", v.z}}; }
json to_json(const Rect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }
json to_json(const Interval& i) { return {{"lo", i.lo}, {"hi", i.hi}}; }

json to_json(const GenParams& p) {
    return {{"shelf_rows", p.shelf_rows},
            {"slots_per_row", p.slots_per_row},
            {"unit_width_m", p.unit_width_m},
            {"shelf_depth_m", p.shelf_depth_m},
            {"corridor_width_m", p.corridor_width_m},
            {"wall_margin_m", p.wall_margin_m},
            {"min_room_length_m", p.min_room_length_m},
            {"room_height_m", p.room_height_m},
            {"door_width_m", p.door_width_m},
            {"ccw", p.ccw},
            {"compress", p.compress},
            {"chars_per_page", p.chars_per_page},
            {"seed", p.seed}};
}

json to_json(const BookRecord& b) {
    return {{"id", b.id},         {"title", b.title},       {"author", b.author},          {"year", b.year},
            {"category", b.category}, {"text_uri", b.text_uri}, {"text_length", b.text_length}};
}

json to_json(const RoomPlan& r) {
    json shelves = json::array();
    for (const auto& s : r.shelves) {
        json slots = json::array();
        for (const auto& slot : s.assigned) slots.push_back({{"book_id", slot.book_id}, {"row", slot.row}, {"slot", slot.slot}});
        shelves.push_back({{"wall", to_string(s.wall)}, {"offset_m", s.offset_m}, {"slots", std::move(slots)}});
    }
    json doors = json::array();
    for (const auto& d : r.doors)
        doors.push_back({{"id", d.id},
                         {"wall", to_string(d.wall)},
                         {"center_offset_m", d.center_offset_m},
                         {"width_m", d.width_m},
                         {"kind", to_string(d.kind)},
                         {"neighbor", d.neighbor}});
    json decor = json::array();
    for (const auto& item : r.decor)
        decor.push_back({{"kind", to_string(item.kind)},
                         {"position", to_json(item.position)},
                         {"size", to_json(item.size)},
                         {"rotation_deg", item.rotation_deg},
                         {"info_text", item.info_text}});
    json out{{"id", r.id},
             {"category", r.category},
             {"rect", to_json(r.rect)},
             {"heading", to_string(r.heading)},
             {"width_m", r.width_m},
             {"depth_m", r.depth_m},
             {"height_m", r.height_m},
             {"shelves", std::move(shelves)},
             {"doors", std::move(doors)},
             {"decor", std::move(decor)}};
    if (r.bay_wall) out["bay_wall"] = to_string(*r.bay_wall);
    return out;
}

json to_json(const Connection& c) {
    return {{"id", c.id},
            {"a", c.a},
            {"b", c.b},
            {"kind", to_string(c.kind)},
            {"wall_a", to_string(c.wall_a)},
            {"line", c.line},
            {"overlap", to_json(c.overlap)},
            {"opening", to_json(c.opening)}};
}

json to_json(const Primitive& p) {
    json out{{"id", p.id},          {"kind", to_string(p.kind)}, {"center", to_json(p.center)},
             {"size", to_json(p.size)}, {"yaw_deg", p.yaw_deg},      {"color", p.color}};
    if (!p.text.empty()) {
        out["text"] = p.text;
        out["text_height_m"] = p.text_height_m;
        out["view_distance_m"] = p.view_distance_m;
    }
    if (!p.book_id.empty()) out["book_id"] = p.book_id;
    if (p.door_id) out["door_id"] = *p.door_id;
    return out;
}

json to_json(const ErgonomicsConfig& e) {
    return {{"body_text_dmm", e.body_text_dmm},
            {"min_text_dmm", e.min_text_dmm},
            {"font_style", e.font_style},
            {"panel_curvature_deg", e.panel_curvature_deg},
            {"panel_pitch_deg", e.panel_pitch_deg},
            {"content_zone",
             {{"fov_deg", e.content_zone.fov_deg},
              {"yaw_limit_deg", e.content_zone.yaw_limit_deg},
              {"pitch_up_deg", e.content_zone.pitch_up_deg},
              {"pitch_down_deg", e.content_zone.pitch_down_deg}}}};
}

json to_json(const Layout& l) {
    json rooms = json::array();
    for (const auto& r : l.rooms) rooms.push_back(to_json(r));
    json connections = json::array();
    for (const auto& c : l.connections) connections.push_back(to_json(c));
    const Rect& bb = l.bbox;
    return {{"rooms", std::move(rooms)},
            {"connections", std::move(connections)},
            {"bbox", {{"min_x", bb.x}, {"min_y", bb.y}, {"max_x", bb.max_x()}, {"max_y", bb.max_y()}}}};
}

json to_json(const MapModel& m) {
    json outlines = json::array(), markers = json::array(), teleports = json::array(), index = json::array();
    for (const auto& o : m.outlines) outlines.push_back({{"room_id", o.room_id}, {"rect", to_json(o.rect)}, {"category", o.category}});
    for (const auto& d : m.doors)
        markers.push_back({{"door_id", d.door_id}, {"kind", to_string(d.kind)}, {"room_id", d.room_id}, {"position", to_json(d.position)}});
    for (const auto& t : m.teleports) teleports.push_back({{"room_id", t.room_id}, {"spawn", to_json(t.spawn)}});
    for (const auto& c : m.category_index) index.push_back({{"category", c.category}, {"room_id", c.room_id}});
    return {{"outlines", std::move(outlines)}, {"doors", std::move(markers)}, {"teleports", std::move(teleports)}, {"category_index", std::move(index)}};
}

json to_json(const Signboard& s) {
    json entries = json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"door_id", e.door_id}, {"neighbor", e.neighbor}, {"label", e.label}, {"wall", to_string(e.wall)}});
    return {{"room_id", s.room_id}, {"entries", std::move(entries)}};
}

json to_json(const SceneChunk& c) {
    json structure = json::array(), interior = json::array();
    for (const auto& p : c.structure) structure.push_back(to_json(p));
    for (const auto& p : c.interior) interior.push_back(to_json(p));
    return {{"room_id", c.room_id}, {"structure", std::move(structure)}, {"interior", std::move(interior)}};
}

json to_json(const VisibleSet& v) {
    return {{"current", v.current}, {"structure", v.structure_visible}, {"interior", v.interior_visible}};
}

json to_json(const World& w) {
    json books = json::array();
    for (const auto& b : w.catalog.books) books.push_back(to_json(b));
    json signs = json::array();
    for (const auto& s : w.signboards) signs.push_back(to_json(s));
    json chunks = json::array();
    for (const auto& c : w.chunks) chunks.push_back(to_json(c));
    json pages = json::object();
    for (const auto& [id, n] : w.pagination.pages) pages[id] = n;

    return {{"format_version", w.format_version},
            {"seed", w.seed},
            {"params", to_json(w.params)},
            {"catalog", {{"source", w.catalog.source_name}, {"books", std::move(books)}}},
            {"layout", to_json(w.layout)},
            {"map", to_json(w.map)},
            {"signboards", std::move(signs)},
            {"chunks", std::move(chunks)},
            {"pagination", {{"chars_per_page", w.pagination.chars_per_page}, {"pages", std::move(pages)}}},
            {"reader", to_json(w.reader)}};
}

}  // namespace wire

namespace {

using namespace wire;

// ---- from json ----

Vec2 vec2(const json& j) { return {real(j, "x"), real(j, "y")}; }
Vec3 vec3(const json& j) { return {real(j, "x"), real(j, "y"), real(j, "z")}; }
Rect rect(const json& j) { return {real(j, "x"), real(j, "y"), real(j, "w"), real(j, "h")}; }
Interval interval(const json& j) { return {real(j, "lo"), real(j, "hi")}; }

GenParams params_from(const json& j) {
    GenParams p;
    p.shelf_rows = integer<int>(j, "shelf_rows");
    p.slots_per_row = integer<int>(j, "slots_per_row");
    p.unit_width_m = real(j, "unit_width_m");
    p.shelf_depth_m = real(j, "shelf_depth_m");
    p.corridor_width_m = real(j, "corridor_width_m");
    p.wall_margin_m = real(j, "wall_margin_m");
    p.min_room_length_m = real(j, "min_room_length_m");
    p.room_height_m = real(j, "room_height_m");
    p.door_width_m = real(j, "door_width_m");
    p.ccw = at(j, "ccw").get<bool>();
    p.compress = at(j, "compress").get<bool>();
    p.chars_per_page = integer<int>(j, "chars_per_page");
    p.seed = integer<std::uint64_t>(j, "seed");
    return p;
}

RoomPlan room_from(const json& j) {
    RoomPlan r;
    r.id = integer<int>(j, "id");
    r.category = text(j, "category");
    r.rect = rect(at(j, "rect"));
    r.heading = enumerated<Direction>(j, "heading", parse_direction);
    r.width_m = real(j, "width_m");
    r.depth_m = real(j, "depth_m");
    r.height_m = real(j, "height_m");
    if (j.contains("bay_wall")) r.bay_wall = enumerated<Direction>(j, "bay_wall", parse_direction);
    for (const auto& s : array(j, "shelves")) {
        ShelfPlacement sp;
        sp.wall = enumerated<Direction>(s, "wall", parse_direction);
        sp.offset_m = real(s, "offset_m");
        for (const auto& slot : array(s, "slots"))
            sp.assigned.push_back({text(slot, "book_id"), integer<int>(slot, "row"), integer<int>(slot, "slot")});
        r.shelves.push_back(std::move(sp));
    }
    for (const auto& d : array(j, "doors"))
        r.doors.push_back({integer<int>(d, "id"), enumerated<Direction>(d, "wall", parse_direction), real(d, "center_offset_m"),
                           real(d, "width_m"), enumerated<DoorKind>(d, "kind", parse_door_kind), integer<int>(d, "neighbor")});
    for (const auto& d : array(j, "decor"))
        r.decor.push_back({enumerated<DecorKind>(d, "kind", parse_decor_kind), vec2(at(d, "position")), vec2(at(d, "size")),
                           real(d, "rotation_deg"), text(d, "info_text")});
    return r;
}

Primitive primitive_from(const json& j) {
    Primitive p;
    p.id = text(j, "id");
    p.kind = enumerated<PrimitiveKind>(j, "kind", parse_primitive_kind);
    p.center = vec3(at(j, "center"));
    p.size = vec3(at(j, "size"));
    p.yaw_deg = real(j, "yaw_deg");
    p.color = text(j, "color");
    if (j.contains("text")) {
        p.text = text(j, "text");
        p.text_height_m = real(j, "text_height_m");
        p.view_distance_m = real(j, "view_distance_m");
    }
    p.book_id = text_or(j, "book_id");
    if (j.contains("door_id")) p.door_id = integer<int>(j, "door_id");
    return p;
}

World world_from(const json& j) {
    if (!j.is_object()) throw InputError("world: top level must be an object");
    World w;
    w.format_version = integer<int>(j, "format_version");
    if (w.format_version != kFormatVersion)
        throw InputError("world: unsupported format_version " + std::to_string(w.format_version));
    w.seed = integer<std::uint64_t>(j, "seed");
    w.params = params_from(at(j, "params"));

    const json& cat = at(j, "catalog");
    w.catalog.source_name = text(cat, "source");
    for (const auto& b : array(cat, "books"))
        w.catalog.books.push_back({text(b, "id"), text(b, "title"), text(b, "author"), integer<std::int64_t>(b, "year"),
                                   text(b, "category"), text(b, "text_uri"), integer<std::int64_t>(b, "text_length")});

    const json& lay = at(j, "layout");
    for (const auto& r : array(lay, "rooms")) w.layout.rooms.push_back(room_from(r));
    for (const auto& c : array(lay, "connections"))
        w.layout.connections.push_back({integer<int>(c, "id"), integer<int>(c, "a"), integer<int>(c, "b"),
                                        enumerated<ConnectionKind>(c, "kind", parse_connection_kind),
                                        enumerated<Direction>(c, "wall_a", parse_direction), real(c, "line"), interval(at(c, "overlap")),
                                        interval(at(c, "opening"))});
    const json& bb = at(lay, "bbox");
    w.layout.bbox = Rect::from_spans({real(bb, "min_x"), real(bb, "max_x")}, {real(bb, "min_y"), real(bb, "max_y")});
    w.layout.seed = w.seed;
    w.layout.params = w.params;

    const json& m = at(j, "map");
    for (const auto& o : array(m, "outlines")) w.map.outlines.push_back({integer<int>(o, "room_id"), rect(at(o, "rect")), text(o, "category")});
    for (const auto& d : array(m, "doors"))
        w.map.doors.push_back({integer<int>(d, "door_id"), enumerated<MarkerKind>(d, "kind", parse_marker_kind), integer<int>(d, "room_id"),
                               vec2(at(d, "position"))});
    for (const auto& t : array(m, "teleports")) w.map.teleports.push_back({integer<int>(t, "room_id"), vec2(at(t, "spawn"))});
    for (const auto& c : array(m, "category_index")) w.map.category_index.push_back({text(c, "category"), integer<int>(c, "room_id")});

    for (const auto& s : array(j, "signboards")) {
        Signboard sb{integer<int>(s, "room_id"), {}};
        for (const auto& e : array(s, "entries"))
            sb.entries.push_back({integer<int>(e, "door_id"), integer<int>(e, "neighbor"), text(e, "label"),
                                  enumerated<Direction>(e, "wall", parse_direction)});
        w.signboards.push_back(std::move(sb));
    }

    for (const auto& c : array(j, "chunks")) {
        SceneChunk chunk{integer<int>(c, "room_id"), {}, {}};
        for (const auto& p : array(c, "structure")) chunk.structure.push_back(primitive_from(p));
        for (const auto& p : array(c, "interior")) chunk.interior.push_back(primitive_from(p));
        w.chunks.push_back(std::move(chunk));
    }

    const json& pag = at(j, "pagination");
    w.pagination.chars_per_page = integer<int>(pag, "chars_per_page");
    const json& pages = at(pag, "pages");
    if (!pages.is_object()) throw InputError("world: field 'pages' must be an object");
    for (const auto& [id, n] : pages.items()) {
        if (!n.is_number_integer()) throw InputError("world: page count of '" + id + "' must be an integer");
        w.pagination.pages[id] = n.get<int>();
    }

    const json& r = at(j, "reader");
    w.reader.body_text_dmm = real(r, "body_text_dmm");
    w.reader.min_text_dmm = real(r, "min_text_dmm");
    w.reader.font_style = text(r, "font_style");
    w.reader.panel_curvature_deg = real(r, "panel_curvature_deg");
    w.reader.panel_pitch_deg = real(r, "panel_pitch_deg");
    const json& z = at(r, "content_zone");
    w.reader.content_zone = {real(z, "fov_deg"), real(z, "yaw_limit_deg"), real(z, "pitch_up_deg"), real(z, "pitch_down_deg")};
    return w;
}

}  // namespace

void validate_world(const World& w) {
    if (w.format_version != kFormatVersion) throw InputError("world: unsupported format_version " + std::to_string(w.format_version));

    std::unordered_set<std::string> books;
    for (const auto& b : w.catalog.books)
        if (!books.insert(b.id).second) throw InputError("duplicate book id '" + b.id + "' in catalog");

    const auto n = static_cast<int>(w.layout.rooms.size());
    auto room_ok = [n](int id) { return id >= 0 && id < n; };
    for (int i = 0; i < n; ++i)
        if (w.layout.rooms[static_cast<std::size_t>(i)].id != i)
            throw InputError("room at position " + std::to_string(i) + " has id " + std::to_string(w.layout.rooms[static_cast<std::size_t>(i)].id));

    const auto nc = static_cast<int>(w.layout.connections.size());
    for (int i = 0; i < nc; ++i) {
        const auto& c = w.layout.connections[static_cast<std::size_t>(i)];
        if (c.id != i) throw InputError("connection at position " + std::to_string(i) + " has id " + std::to_string(c.id));
        if (!room_ok(c.a) || !room_ok(c.b) || c.a == c.b) throw InputError("connection " + std::to_string(c.id) + " references unknown room");
    }

    std::unordered_set<std::string> shelved;
    for (const auto& r : w.layout.rooms) {
        for (const auto& d : r.doors) {
            if (d.neighbor != kOutside && !room_ok(d.neighbor))
                throw InputError("room " + std::to_string(r.id) + " door leads to unknown room " + std::to_string(d.neighbor));
            if (d.id != kOutside && (d.id < 0 || d.id >= nc)) throw InputError("room " + std::to_string(r.id) + " references unknown door " + std::to_string(d.id));
        }
        for (const auto& s : r.shelves)
            for (const auto& slot : s.assigned) {
                if (!books.count(slot.book_id)) throw InputError("room " + std::to_string(r.id) + " shelves unknown book '" + slot.book_id + "'");
                if (!shelved.insert(slot.book_id).second) throw InputError("duplicate book id '" + slot.book_id + "' on shelves");
            }
    }
    for (const auto& b : w.catalog.books)
        if (!shelved.count(b.id)) throw InputError("book '" + b.id + "' is not on any shelf");

    if (static_cast<int>(w.chunks.size()) != n) throw InputError("world: expected one chunk per room");
    std::unordered_set<std::string> spines, prim_ids;
    for (int i = 0; i < n; ++i) {
        const auto& c = w.chunks[static_cast<std::size_t>(i)];
        if (c.room_id != i) throw InputError("chunk at position " + std::to_string(i) + " has room id " + std::to_string(c.room_id));
        for (const auto* list : {&c.structure, &c.interior})
            for (const auto& p : *list) {
                if (!prim_ids.insert(p.id).second) throw InputError("duplicate primitive id '" + p.id + "'");
                if (p.kind != PrimitiveKind::book_spine) continue;
                if (!books.count(p.book_id)) throw InputError("chunk " + std::to_string(i) + " references unknown book '" + p.book_id + "'");
                if (!spines.insert(p.book_id).second) throw InputError("duplicate book id '" + p.book_id + "' among spines");
            }
    }
    for (const auto& b : w.catalog.books)
        if (!spines.count(b.id)) throw InputError("book '" + b.id + "' has no spine");

    if (static_cast<int>(w.map.outlines.size()) != n || static_cast<int>(w.map.teleports.size()) != n ||
        static_cast<int>(w.signboards.size()) != n)
        throw InputError("world: map and signboards must cover every room");
    for (const auto& t : w.map.teleports)
        if (!room_ok(t.room_id)) throw InputError("teleport to unknown room " + std::to_string(t.room_id));
    for (const auto& c : w.map.category_index)
        if (!room_ok(c.room_id)) throw InputError("category index references unknown room " + std::to_string(c.room_id));
    for (const auto& d : w.map.doors)
        if (!room_ok(d.room_id) || (d.door_id != kOutside && (d.door_id < 0 || d.door_id >= nc)))
            throw InputError("map door marker references unknown door " + std::to_string(d.door_id));
    for (const auto& [id, count] : w.pagination.pages) {
        if (!books.count(id)) throw InputError("pagination references unknown book '" + id + "'");
        if (count < 1) throw InputError("book '" + id + "' has no pages");
    }
}

std::string export_world(const World& w) {
    validate_world(w);
    std::string out;
    write_canonical(out, to_json(w));
    out.push_back('\n');
    return out;
}

World parse_world(std::string_view data) {
    json j;
    try {
        j = json::parse(data.begin(), data.end());
    } catch (const json::parse_error& e) {
        throw InputError(std::string("world: malformed JSON: ") + e.what());
    }
    World w;
    try {
        w = world_from(j);
    } catch (const json::exception& e) {
        throw InputError(std::string("world: ") + e.what());
    }
    validate_world(w);
    return w;
}

World build_world(const Catalog& catalog, const GenParams& params, const BuildOptions& options) {
    if (const auto report = validate_catalog(catalog); has_errors(report))
        for (const auto& f : report)
            if (f.severity == Severity::error) throw InputError("catalog: book '" + f.book_id + "': " + f.message);

    World w;
    w.seed = params.seed;
    w.params = params;
    w.catalog = catalog;
    w.pagination.chars_per_page = params.chars_per_page;
    for (auto& b : w.catalog.books) {
        const auto body = load_book_text(b, options.text_root);
        b.text_length = body ? utf8_length(*body) : 0;
        w.pagination.pages[b.id] = page_count(body ? *body : std::string_view{}, params.chars_per_page);
    }

    w.layout = generate_layout(group_by_category(w.catalog), params, params.seed);
    w.map = build_map(w.layout);
    w.signboards = build_signboards(w.layout);
    BookTitles titles;
    for (const auto& b : w.catalog.books) titles.emplace(b.id, b.title);
    w.chunks = instantiate_all(w.layout, w.signboards, titles, w.reader, options.threads);

    // Round-trip once so every real is at its printed precision.
    return parse_world(export_world(w));
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) throw InvariantError("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

}  // namespace stacks
