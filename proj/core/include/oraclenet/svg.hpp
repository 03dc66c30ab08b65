#pragma once

#include <string>
#include <vector>

#include "oraclenet/env.hpp"

namespace oraclenet {

struct SvgOptions {
    int width_px = 600;
    /// Stroke colour for paths after the first; the first path is drawn black.
    std::string path_color = "#1f77b4";
    bool mark_endpoints = true;
};

/// Deterministic SVG scene.
///
/// Grid world: obstacles plus every path as one <line> per edge, start marked
/// red and goal green. Planar arm: the workspace with obstacles and one
/// <polyline> link chain per waypoint, the start pose red and the goal pose green.
[[nodiscard]] std::string render_svg(const Environment& env, const std::vector<Path>& paths,
                                     const SvgOptions& opts = {});

}  // namespace oraclenet
