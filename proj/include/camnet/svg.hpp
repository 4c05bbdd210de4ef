#pragma once

#include <string>

#include "camnet/network.hpp"

namespace camnet {

/// SVG rendering: per-label colors, branch points as crosses, joints as
/// dots, truncation discs as dashed circles.
std::string network_svg(const Network& net);
void write_file(const std::string& path, const std::string& content);

}  // namespace camnet
