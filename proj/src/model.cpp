#include "stairgait/model.hpp"

#include <stdexcept>

namespace stairgait {

LegGeometry leg_geometry(const RobotModel& robot, int physical_leg)
{
    if (physical_leg == 0) {
        return {robot.l1, robot.l2, robot.l6, robot.l7};
    }
    if (physical_leg == 1) {
        return {robot.l3, robot.l4, robot.l8, robot.l9};
    }
    throw std::out_of_range("physical leg index must be 0 or 1");
}

std::string_view to_string(HipMode mode)
{
    switch (mode) {
    case HipMode::Brachistochrone: return "brach";
    case HipMode::CircularArc: return "arc";
    case HipMode::VirtualSlope: return "slope";
    }
    return "unknown";
}

std::optional<HipMode> parse_hip_mode(std::string_view text)
{
    if (text == "brach" || text == "brachistochrone") return HipMode::Brachistochrone;
    if (text == "arc" || text == "circular" || text == "circular_arc") return HipMode::CircularArc;
    if (text == "slope" || text == "virtual_slope") return HipMode::VirtualSlope;
    return std::nullopt;
}

}  // namespace stairgait
