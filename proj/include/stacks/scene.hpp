#pragma once

#include "stacks/layout.hpp"
#include "stacks/navmap.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stacks {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

enum class PrimitiveKind : std::uint8_t { floor, ceiling, wall, lintel, light, door_sign, shelf, book_spine, decor, plaque };

/// Axis-aligned box in world coordinates (z up). Quads are boxes with one zero extent.
struct Primitive {
    std::string id;  // fnv1a64("room/kind/index") as 16 hex digits
    PrimitiveKind kind = PrimitiveKind::wall;
    Vec3 center;
    Vec3 size;
    double yaw_deg = 0.0;  // facing direction of text, counter-clockwise from +x
    std::string color;     // "#rrggbb"
    std::string text;  // decor boxes carry their decor kind here, unrendered (text height 0)
    double text_height_m = 0.0;
    double view_distance_m = 0.0;  // design distance the text height was sized for
    std::string book_id;           // spines only
    std::optional<int> door_id;    // door signs and lintels; kOutside for the world doors

    friend bool operator==(const Primitive&, const Primitive&) = default;
};

struct SceneChunk {
    int room_id = 0;
    std::vector<Primitive> structure;
    std::vector<Primitive> interior;

    friend bool operator==(const SceneChunk&, const SceneChunk&) = default;
};

struct VisibleSet {
    int current = 0;
    std::vector<int> structure_visible;  // ascending
    std::vector<int> interior_visible;

    friend bool operator==(const VisibleSet&, const VisibleSet&) = default;
};

struct ContentZone {
    double fov_deg = 90.0;
    double yaw_limit_deg = 30.0;
    double pitch_up_deg = 20.0;
    double pitch_down_deg = 12.0;

    friend bool operator==(const ContentZone&, const ContentZone&) = default;
};

struct ErgonomicsConfig {
    double body_text_dmm = 32.0;
    double min_text_dmm = 23.0;
    std::string font_style = "sans-serif";
    double panel_curvature_deg = 60.0;
    ContentZone content_zone;
    double panel_pitch_deg = -10.0;  // negative tilts the panel face downward

    friend bool operator==(const ErgonomicsConfig&, const ErgonomicsConfig&) = default;
};

/// Problems with an ergonomics config; empty when valid.
std::vector<std::string> validate_ergonomics(const ErgonomicsConfig& c);

/// Height in meters of text that subtends `dmm` at `viewing_distance_m` (1 dmm = 1 mm seen from 1 m).
constexpr double compute_text_height(double dmm, double viewing_distance_m) { return dmm / 1000.0 * viewing_distance_m; }

namespace viewing {
inline constexpr double kDoorSignM = 3.0;
inline constexpr double kPlaqueM = 1.0;
inline constexpr double kSpineM = 0.6;
}  // namespace viewing

using BookTitles = std::unordered_map<std::string, std::string>;

std::string primitive_id(int room_id, PrimitiveKind kind, int index);

/// Hex color derived from a category name.
std::string category_color(std::string_view category);

/// Lights: one per full 12 m² of floor, at least one.
int light_count(double area_m2);

SceneChunk instantiate_room(const RoomPlan& room, const Signboard& signs, const BookTitles& titles, const GenParams& p,
                            const ErgonomicsConfig& ergo = {});

/// All chunks in room-id order; rooms are built on up to `threads` workers (0 = hardware concurrency).
std::vector<SceneChunk> instantiate_all(const Layout& layout, const std::vector<Signboard>& signs, const BookTitles& titles,
                                        const ErgonomicsConfig& ergo = {}, unsigned threads = 0);

/// Structure of the current room and its door neighbors; interior of the current room only.
/// Throws InputError for an unknown room.
VisibleSet visible_set(const Layout& layout, int current);

std::string_view to_string(PrimitiveKind k);
std::optional<PrimitiveKind> parse_primitive_kind(std::string_view s);

std::uint64_t fnv1a64(std::string_view s);

}  // namespace stacks
