#include "stacks/params.hpp"

namespace stacks {

std::vector<std::string> validate_params(const GenParams& p) {
    std::vector<std::string> out;
    auto positive = [&out](double v, const char* name) {
        if (!(v > 0.0)) out.push_back(std::string(name) + " must be > 0");
    };
    if (p.shelf_rows <= 0) out.push_back("shelf_rows must be > 0");
    if (p.slots_per_row <= 0) out.push_back("slots_per_row must be > 0");
    positive(p.unit_width_m, "unit_width_m");
    positive(p.shelf_depth_m, "shelf_depth_m");
    positive(p.corridor_width_m, "corridor_width_m");
    positive(p.wall_margin_m, "wall_margin_m");
    positive(p.min_room_length_m, "min_room_length_m");
    positive(p.room_height_m, "room_height_m");
    positive(p.door_width_m, "door_width_m");
    if (p.corridor_width_m < GenParams::kMinCorridorM)
        out.push_back("corridor_width_m must be >= 1.5 (walkable corridor between shelves)");
    if (p.chars_per_page <= 0) out.push_back("chars_per_page must be > 0");
    // Chain doors sit on the short walls; they must fit there.
    if (p.min_overlap_m() > 2 * p.shelf_depth_m + p.corridor_width_m)
        out.push_back("door_width_m plus jambs must fit the room depth");
    if (p.room_height_m <= 2.2) out.push_back("room_height_m must exceed the 2.2 m door height");
    return out;
}

}  // namespace stacks
