#pragma once

#include <optional>
#include <string>

#include "snake/grid.hpp"

namespace snake {

enum class RenderFormat { ascii, svg };

struct RenderSpec {
  RenderFormat format = RenderFormat::ascii;
  int cell_px = 24;
  bool show_cycle = true;
};

/// ASCII: one line per row, top row is y = m. `@` head, `#` body, `A` apple,
/// `> < ^ v` the cycle successor of a free cell, `.` otherwise.
/// SVG: the same content as an SVG 1.1 document.
std::string render_board(const GridGraph& g, const Snake& snake, std::optional<Coord> apple,
                         const std::optional<CyclePath>& cycle, const RenderSpec& spec = {});

}  // namespace snake
