#include "atp/svg.hpp"

#include <sstream>

namespace atp {

namespace {

struct Pt {
  int x = 0;
  int y = 0;
};

void line(std::ostringstream& out, Pt a, Pt b, const char* stroke, int width, const char* dash) {
  out << "  <line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\"" << b.y
      << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"";
  if (dash) out << " stroke-dasharray=\"" << dash << "\"";
  out << " stroke-linecap=\"round\"/>\n";
}

void text(std::ostringstream& out, int x, int y, const std::string& s) {
  out << "  <text x=\"" << x << "\" y=\"" << y
      << "\" font-family=\"monospace\" font-size=\"13\" fill=\"#333333\">" << s << "</text>\n";
}

}  // namespace

std::string emit_svg(const GridGraph& g, const Solution& sol, const SvgOptions& opts) {
  const int cell = opts.cell;
  const int margin = opts.margin;
  const auto pt = [&](NodeId n) {
    return Pt{margin + g.col_of(n) * cell, margin + g.row_of(n) * cell};
  };
  const int width = 2 * margin + (g.cols - 1) * cell;
  const int height = 2 * margin + (g.rows - 1) * cell;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (NodeId n = 0; n < g.node_count(); ++n) {
    if (!g.present[n] || g.is_entry(n) || g.is_runway(n)) continue;
    const Pt p = pt(n);
    out << "  <circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"3\" fill=\"#c8c8c8\"/>\n";
  }

  for (const Edge& e : opts.previous_tree)
    if (g.on_grid(e.from) && g.on_grid(e.to)) line(out, pt(e.from), pt(e.to), "#2e8b57", 3, "7,5");
  for (const Edge& e : sol.tree)
    if (g.on_grid(e.from) && g.on_grid(e.to)) line(out, pt(e.from), pt(e.to), "#1a1a1a", 3, nullptr);

  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    const Pt p = pt(g.entries[i]);
    out << "  <rect x=\"" << p.x - 6 << "\" y=\"" << p.y - 6
        << "\" width=\"12\" height=\"12\" fill=\"#1f77b4\"/>\n";
    const std::string name =
        i < opts.entry_names.size() ? opts.entry_names[i] : "E" + std::to_string(i);
    text(out, p.x + 9, p.y - 9, name);
  }

  if (g.on_grid(g.runway)) {
    const Pt p = pt(g.runway);
    out << "  <polygon points=\"" << p.x << "," << p.y - 9 << " " << p.x + 9 << "," << p.y << " "
        << p.x << "," << p.y + 9 << " " << p.x - 9 << "," << p.y
        << "\" fill=\"#d62728\"/>\n";
    text(out, p.x + 11, p.y + 5, "RWY");
  }

  for (const auto& [node, label] : opts.node_labels) {
    if (!g.on_grid(node)) continue;
    const Pt p = pt(node);
    out << "  <circle cx=\"" << p.x << "\" cy=\"" << p.y
        << "\" r=\"7\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\"/>\n";
    text(out, p.x + 10, p.y + 14, label);
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace atp
