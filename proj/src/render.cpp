#include "snake/render.hpp"

#include <sstream>
#include <vector>

namespace snake {

namespace {

char arrow(Coord from, Coord to) {
  if (to.x > from.x) return '>';
  if (to.x < from.x) return '<';
  if (to.y > from.y) return '^';
  return 'v';
}

std::string ascii(const GridGraph& g, const Snake& snake, std::optional<Coord> apple,
                  const std::optional<CyclePath>& cycle, bool show_cycle) {
  std::vector<char> cells(static_cast<std::size_t>(g.cell_count()), '.');
  if (show_cycle && cycle && !cycle->empty()) {
    for (std::size_t i = 0; i < cycle->size(); ++i) {
      const Coord a = (*cycle)[i];
      const Coord b = (*cycle)[(i + 1) % cycle->size()];
      if (g.contains(a)) cells[static_cast<std::size_t>(g.index(a))] = arrow(a, b);
    }
  }
  for (Coord c : snake) cells[static_cast<std::size_t>(g.index(c))] = '#';
  if (!snake.empty()) cells[static_cast<std::size_t>(g.index(snake.back()))] = '@';
  if (apple) cells[static_cast<std::size_t>(g.index(*apple))] = 'A';

  std::string out;
  for (int y = g.m(); y >= 1; --y) {
    for (int x = 1; x <= g.n(); ++x) out.push_back(cells[static_cast<std::size_t>(g.index({x, y}))]);
    out.push_back('\n');
  }
  return out;
}

std::string svg(const GridGraph& g, const Snake& snake, std::optional<Coord> apple,
                const std::optional<CyclePath>& cycle, const RenderSpec& spec) {
  const int px = spec.cell_px;
  // Cell centre in SVG coordinates (y axis points down).
  auto cx = [&](Coord c) { return (c.x - 1) * px + px / 2; };
  auto cy = [&](Coord c) { return (g.m() - c.y) * px + px / 2; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << g.n() * px << "\" height=\""
    << g.m() * px << "\">\n"
    << "  <rect x=\"0\" y=\"0\" width=\"" << g.n() * px << "\" height=\"" << g.m() * px
    << "\" fill=\"#ffffff\" stroke=\"#999999\"/>\n";
  for (int x = 1; x <= g.n(); ++x) {
    for (int y = 1; y <= g.m(); ++y) {
      s << "  <rect x=\"" << (x - 1) * px << "\" y=\"" << (g.m() - y) * px << "\" width=\"" << px
        << "\" height=\"" << px << "\" fill=\"none\" stroke=\"#dddddd\"/>\n";
    }
  }
  if (spec.show_cycle && cycle && !cycle->empty()) {
    s << "  <polygon class=\"cycle\" fill=\"none\" stroke=\"#4a90d9\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < cycle->size(); ++i) {
      s << (i ? " " : "") << cx((*cycle)[i]) << ',' << cy((*cycle)[i]);
    }
    s << "\"/>\n";
  }
  for (std::size_t i = 0; i < snake.size(); ++i) {
    const bool head = i + 1 == snake.size();
    s << "  <rect class=\"" << (head ? "head" : "body") << "\" x=\"" << (snake[i].x - 1) * px + 2 << "\" y=\""
      << (g.m() - snake[i].y) * px + 2 << "\" width=\"" << px - 4 << "\" height=\"" << px - 4 << "\" fill=\""
      << (head ? "#1b5e20" : "#66bb6a") << "\"/>\n";
  }
  if (apple) {
    s << "  <circle class=\"apple\" cx=\"" << cx(*apple) << "\" cy=\"" << cy(*apple) << "\" r=\"" << px / 3
      << "\" fill=\"#d32f2f\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace

std::string render_board(const GridGraph& g, const Snake& snake, std::optional<Coord> apple,
                         const std::optional<CyclePath>& cycle, const RenderSpec& spec) {
  if (spec.format == RenderFormat::svg) return svg(g, snake, apple, cycle, spec);
  return ascii(g, snake, apple, cycle, spec.show_cycle);
}

}  // namespace snake
