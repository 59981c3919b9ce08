#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lnc {

// Spatial point; dim <= 2 for grids (unused axes are zero).
using Point = std::array<double, 2>;

double distance(const Point& a, const Point& b);

enum class Label : std::uint8_t { Local, Nonlocal, Exterior };

/// Uniform Cartesian grid with per-cell region labels and a ring of
/// exterior padding cells around the bounding box. Cells are ordered
/// row-major (x fastest); the ordering is part of the contract.
class GridDomain {
public:
  GridDomain() = default;

  int dim() const { return dim_; }
  double h() const { return h_; }
  int pad() const { return pad_; }

  // extent per axis, padding included
  int extent(int axis) const { return ext_[axis]; }
  // interior (bbox) cell count per axis
  int interior(int axis) const { return n_[axis]; }
  double lo(int axis) const { return lo_[axis]; }

  int cell_count() const { return static_cast<int>(labels_.size()); }
  Label label(int cell) const { return labels_[cell]; }
  Point cell_center(int cell) const;

  int cell_index(int ix, int iy) const { return ix + ext_[0] * iy; }
  std::array<int, 2> cell_coords(int cell) const;

  // vertex lattice: extent(axis)+1 points per axis, same row-major order
  int vertex_count() const;
  int vertex_index(int vx, int vy) const { return vx + (ext_[0] + 1) * vy; }
  std::array<int, 2> vertex_coords(int vertex) const;
  Point vertex_position(int vertex) const;

  // label of the cell at (ix,iy); out-of-extent slots read as Exterior
  Label label_at(int ix, int iy) const;

  const std::vector<int>& cells_with(Label l) const;

  friend GridDomain build_grid(int dim, const std::array<std::array<double, 2>, 2>& bbox,
                               double h, const std::function<Label(const Point&)>& labeler,
                               int pad);

private:
  int dim_ = 1;
  double h_ = 0;
  int pad_ = 0;
  std::array<int, 2> n_{1, 1};    // interior cells per axis
  std::array<int, 2> ext_{1, 1};  // padded cells per axis
  std::array<double, 2> lo_{0, 0};
  std::vector<Label> labels_;
  std::vector<int> local_cells_, nonlocal_cells_, exterior_cells_;
};

/// Build a grid from a bounding box and a labeling function evaluated at
/// cell centers. The labeler is consulted only inside the bbox; pad layers
/// are exterior by construction. Throws std::invalid_argument on bad
/// inputs (h <= 0, pad < 0, bbox not resolved by h, empty domain).
GridDomain build_grid(int dim, const std::array<std::array<double, 2>, 2>& bbox, double h,
                      const std::function<Label(const Point&)>& labeler, int pad);

/// One facet of the discrete interface Gamma: it separates a Local cell
/// from a Nonlocal cell and lies inside Omega.
struct Facet {
  int local_cell = -1;
  int nonlocal_cell = -1;
  Point normal{0, 0};  // unit, points from the local into the nonlocal side
  Point center{0, 0};
  double measure = 1.0;  // h^(dim-1)
};

struct FacetSet {
  std::vector<Facet> facets;
  bool empty() const { return facets.empty(); }
  std::size_t size() const { return facets.size(); }
};

FacetSet extract_gamma(const GridDomain& grid);

/// Partition of a cell set into delta-connected components: two cells
/// belong to one component iff a chain of member cells exists with
/// consecutive center distances strictly below delta. Components are
/// sorted by smallest member index; members ascending.
std::vector<std::vector<int>> delta_connected_components(const std::vector<int>& cells,
                                                         const GridDomain& grid, double delta);

enum class CouplingMode { Source, Flux };

struct AdmissibilityReport {
  double delta = 0;
  bool local_connected = false;
  std::vector<std::vector<int>> nl_components;
  double dist_local_nonlocal = 0;   // +inf when a side is empty
  double dist_gamma_nonlocal = 0;   // +inf when no facets / no nonlocal cells
  bool pass_local_connected = false;   // condition (1)
  bool pass_nl_delta_connected = false;  // condition (2)
  bool pass_p1 = false;
  bool pass_p2 = false;
  bool generalized_graph_connected = false;
  bool touches_exterior = false;
  // conjunction of the conditions the requested coupling mode needs
  bool required_ok = false;
};

/// Evaluate conditions (1), (2), (P1), (P2) on the discrete geometry.
/// All distances are center-to-center (facet centers for P2). Empty
/// regions make the coupling conditions vacuously true.
AdmissibilityReport check_admissibility(const GridDomain& grid, const FacetSet& gamma,
                                        double delta, CouplingMode mode);

/// Multi-component variant: connectivity of the graph whose nodes are the
/// face-connected components of the local region and the delta-connected
/// components of the nonlocal region, with edges between components closer
/// than delta. touches_exterior records whether some component can see the
/// homogeneous exterior datum (within delta of an exterior cell, or with a
/// facet on the domain boundary).
AdmissibilityReport check_generalized_admissibility(const GridDomain& grid, double delta);

/// Parse a raster mask: rows of characters {L,N,E}, row-major, one row per
/// line. Returns the labels together with the row/column counts.
struct MaskRaster {
  int nx = 0, ny = 0;       // ny == 1 for a single-line (1D) mask
  std::vector<Label> cells; // row-major, first line is row 0
};
MaskRaster parse_mask(const std::string& text);

}  // namespace lnc
