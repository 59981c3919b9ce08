#include "lnc/dofmap.hpp"

#include <stdexcept>

namespace lnc {

namespace {

// incident cell labels of a vertex; slots outside the padded extent read
// as Exterior
void incident_labels(const GridDomain& grid, int vx, int vy, Label out[4], int& count) {
  count = 0;
  const int dim = grid.dim();
  for (int oy = (dim > 1 ? -1 : 0); oy <= 0; ++oy) {
    for (int ox = -1; ox <= 0; ++ox) {
      out[count++] = grid.label_at(vx + ox, dim > 1 ? vy + oy : 0);
    }
  }
}

}  // namespace

DofMap build_dofmap(const GridDomain& grid, int block, bool eliminate_boundary) {
  if (block < 1) throw std::invalid_argument("build_dofmap: block must be >= 1");
  DofMap m;
  m.dim = grid.dim();
  m.block = block;
  m.vertex_slot.assign(grid.vertex_count(), -1);
  m.cell_slot.assign(grid.cell_count(), -1);

  for (int v = 0; v < grid.vertex_count(); ++v) {
    const auto [vx, vy] = grid.vertex_coords(v);
    Label inc[4];
    int count = 0;
    incident_labels(grid, vx, vy, inc, count);
    bool touches_local = false, touches_exterior = false;
    for (int k = 0; k < count; ++k) {
      touches_local = touches_local || inc[k] == Label::Local;
      touches_exterior = touches_exterior || inc[k] == Label::Exterior;
    }
    if (!touches_local) continue;
    if (eliminate_boundary && touches_exterior) continue;  // on the Dirichlet part of the boundary
    m.vertex_slot[v] = static_cast<int>(m.entities.size());
    m.entities.push_back({DofKind::Vertex, v, grid.vertex_position(v)});
  }
  m.vertex_entities_ = static_cast<int>(m.entities.size());

  for (int c : grid.cells_with(Label::Nonlocal)) {
    m.cell_slot[c] = static_cast<int>(m.entities.size());
    m.entities.push_back({DofKind::Cell, c, grid.cell_center(c)});
  }
  return m;
}

void cell_corner_slots(const GridDomain& grid, const DofMap& map, int cell, int out_slots[4]) {
  const auto [ix, iy] = grid.cell_coords(cell);
  const int dim = grid.dim();
  int k = 0;
  for (int oy = 0; oy <= (dim > 1 ? 1 : 0); ++oy)
    for (int ox = 0; ox <= 1; ++ox)
      out_slots[k++] = map.vertex_slot[grid.vertex_index(ix + ox, dim > 1 ? iy + oy : 0)];
  for (; k < 4; ++k) out_slots[k] = -1;
}

TraceStencil cell_trace(const GridDomain& grid, const DofMap& map, int local_cell) {
  TraceStencil t;
  int slots[4];
  cell_corner_slots(grid, map, local_cell, slots);
  const int corners = grid.dim() == 1 ? 2 : 4;
  const double w = 1.0 / corners;
  for (int k = 0; k < corners; ++k) {
    if (slots[k] < 0) continue;  // eliminated vertex: datum value 0
    t.slot[t.count] = slots[k];
    t.weight[t.count] = w;
    ++t.count;
  }
  return t;
}

TraceStencil facet_trace(const GridDomain& grid, const DofMap& map, const Facet& facet) {
  TraceStencil t;
  const int dim = grid.dim();
  const auto [ix, iy] = grid.cell_coords(facet.local_cell);
  if (dim == 1) {
    const int vx = facet.normal[0] > 0 ? ix + 1 : ix;
    const int s = map.vertex_slot[grid.vertex_index(vx, 0)];
    if (s >= 0) {
      t.slot[0] = s;
      t.weight[0] = 1.0;
      t.count = 1;
    }
    return t;
  }
  // 2D: the shared edge has two endpoints
  int v0, v1;
  if (facet.normal[0] != 0) {
    const int vx = facet.normal[0] > 0 ? ix + 1 : ix;
    v0 = grid.vertex_index(vx, iy);
    v1 = grid.vertex_index(vx, iy + 1);
  } else {
    const int vy = facet.normal[1] > 0 ? iy + 1 : iy;
    v0 = grid.vertex_index(ix, vy);
    v1 = grid.vertex_index(ix + 1, vy);
  }
  for (int v : {v0, v1}) {
    const int s = map.vertex_slot[v];
    if (s < 0) continue;
    t.slot[t.count] = s;
    t.weight[t.count] = 0.5;
    ++t.count;
  }
  return t;
}

}  // namespace lnc
