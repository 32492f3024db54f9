#pragma once

#include <string>
#include <utility>
#include <vector>

#include "atp/grid.hpp"
#include "atp/solution.hpp"

namespace atp {

struct SvgOptions {
  std::vector<Edge> previous_tree;  // drawn dashed green underneath the tree
  std::vector<std::string> entry_names;  // parallel to GridGraph::entries
  std::vector<std::pair<NodeId, std::string>> node_labels;  // merge points etc.
  int cell = 48;    // pixels between neighbouring nodes
  int margin = 56;  // canvas border around the outermost nodes
};

// Standalone vector drawing of the grid with the solution tree in solid
// strokes, entries, the runway, optional labels and an optional previous-tree
// overlay. Pure function of its inputs: identical calls yield identical
// bytes, and an empty tree yields the bare grid.
std::string emit_svg(const GridGraph& g, const Solution& sol, const SvgOptions& opts = {});

}  // namespace atp
