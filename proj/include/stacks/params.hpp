#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stacks {

/// Free parameters of world generation. Lengths in meters.
struct GenParams {
    int shelf_rows = 5;
    int slots_per_row = 20;
    double unit_width_m = 1.0;
    double shelf_depth_m = 0.3;
    double corridor_width_m = 2.4;
    double wall_margin_m = 0.5;
    double min_room_length_m = 4.0;
    double room_height_m = 3.0;
    double door_width_m = 1.2;
    bool ccw = false;
    bool compress = true;
    int chars_per_page = 1800;
    std::uint64_t seed = 0;

    friend bool operator==(const GenParams&, const GenParams&) = default;

    int shelf_capacity() const { return shelf_rows * slots_per_row; }

    /// Shared wall length two rooms need before a door fits: opening plus a 0.1 m jamb each side.
    double min_overlap_m() const { return door_width_m + 2 * kDoorJambM; }

    static constexpr double kDoorJambM = 0.1;
    static constexpr double kMinCorridorM = 1.5;
};

/// Human-readable invariant violations; empty when the parameters are usable.
std::vector<std::string> validate_params(const GenParams& p);

struct ShelfSpec {
    int rows = 5;
    int slots_per_row = 20;
    double unit_width_m = 1.0;
    double depth_m = 0.3;

    int capacity() const { return rows * slots_per_row; }

    static ShelfSpec from(const GenParams& p) { return {p.shelf_rows, p.slots_per_row, p.unit_width_m, p.shelf_depth_m}; }
};

/// Fixed furniture and ergonomics dimensions not exposed as parameters.
namespace dims {
inline constexpr double kShelfHeightM = 2.0;
inline constexpr double kDoorHeightM = 2.2;
inline constexpr double kDoorSwingDepthM = 1.0;
inline constexpr double kPedestalLengthM = 1.0;
inline constexpr double kPedestalDepthM = 0.8;
inline constexpr double kPedestalHeightM = 1.0;
inline constexpr double kPedestalClearanceM = 0.8;
inline constexpr double kTableSizeM = 0.8;
inline constexpr double kChairSizeM = 0.45;
inline constexpr double kChairGapM = 0.1;
inline constexpr double kFurnitureClearanceM = 0.4;
inline constexpr double kSpawnClearanceM = 0.4;
inline constexpr double kSpawnStepM = 0.1;
inline constexpr double kPedestalMinAreaM2 = 12.0;
inline constexpr double kTablePairAreaM2 = 20.0;
inline constexpr double kLightAreaM2 = 12.0;
}  // namespace dims

}  // namespace stacks
