#pragma once

#include "lnc/geometry.hpp"

namespace lnc {

enum class DofKind : std::uint8_t { Vertex, Cell };

struct DofEntity {
  DofKind kind;
  int grid_id;  // vertex or cell index in the grid
  Point coord;
};

/// Unknown layout: multilinear vertex values on the closure of the local
/// region (boundary vertices eliminated unless disabled) followed by
/// cell-centered values on nonlocal cells. Vector problems interleave
/// `block` components per entity.
class DofMap {
public:
  DofMap() = default;

  int dim = 1;
  int block = 1;
  std::vector<DofEntity> entities;
  std::vector<int> vertex_slot;  // grid vertex -> entity slot or -1
  std::vector<int> cell_slot;    // grid cell -> entity slot or -1

  int entity_count() const { return static_cast<int>(entities.size()); }
  int size() const { return entity_count() * block; }
  int dof(int slot, int comp) const { return slot * block + comp; }
  int vertex_dof_count() const { return vertex_entities_ * block; }
  int vertex_entity_count() const { return vertex_entities_; }

  friend DofMap build_dofmap(const GridDomain& grid, int block, bool eliminate_boundary);

private:
  int vertex_entities_ = 0;
};

/// Vertices adjacent to at least one local cell become unknowns; a vertex
/// is eliminated (held at the homogeneous datum) when any of its incident
/// cell slots is exterior, i.e. when it lies on the boundary of Omega.
DofMap build_dofmap(const GridDomain& grid, int block, bool eliminate_boundary = true);

/// Trace stencil: entity slots and interpolation weights that evaluate the
/// local field at a point; eliminated vertices are omitted (their value is
/// the homogeneous datum 0).
struct TraceStencil {
  static constexpr int kMax = 4;
  int count = 0;
  int slot[kMax] = {-1, -1, -1, -1};
  double weight[kMax] = {0, 0, 0, 0};
};

// value of the multilinear local field at the center of a local cell
// (the average of the cell's corner vertices)
TraceStencil cell_trace(const GridDomain& grid, const DofMap& map, int local_cell);
// value of the local field at a facet center (average over facet vertices)
TraceStencil facet_trace(const GridDomain& grid, const DofMap& map, const Facet& facet);
// corner vertices of a cell, ordered x-fastest; entries may be -1 when the
// vertex carries no unknown
void cell_corner_slots(const GridDomain& grid, const DofMap& map, int cell, int out_slots[4]);

}  // namespace lnc
