#include "lnc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace lnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class UnionFind {
public:
  explicit UnionFind(int n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    if (parent_[x] != x) parent_[x] = find(parent_[x]);
    return parent_[x];
  }

  void unite(int x, int y) {
    int px = find(x), py = find(y);
    if (px == py) return;
    if (rank_[px] < rank_[py]) std::swap(px, py);
    parent_[py] = px;
    if (rank_[px] == rank_[py]) rank_[px]++;
  }

private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

// groups member indices by union-find root, ordered by smallest member
std::vector<std::vector<int>> collect_components(UnionFind& uf, const std::vector<int>& members) {
  std::vector<std::vector<int>> out;
  std::vector<int> root_slot(members.size(), -1);
  // map root -> slot in first-seen order; members are ascending already when
  // the caller passes sorted ids, which keeps output deterministic
  std::vector<std::pair<int, int>> seen;  // (root, slot)
  for (std::size_t k = 0; k < members.size(); ++k) {
    int r = uf.find(static_cast<int>(k));
    int slot = -1;
    for (auto& [root, s] : seen)
      if (root == r) slot = s;
    if (slot < 0) {
      slot = static_cast<int>(out.size());
      seen.emplace_back(r, slot);
      out.emplace_back();
    }
    out[slot].push_back(members[k]);
  }
  return out;
}

double set_distance(const GridDomain& grid, const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() || b.empty()) return kInf;
  double best = kInf;
  for (int ca : a) {
    const Point pa = grid.cell_center(ca);
    for (int cb : b) best = std::min(best, distance(pa, grid.cell_center(cb)));
  }
  return best;
}

// face-adjacency components of a cell set
std::vector<std::vector<int>> face_components(const GridDomain& grid, const std::vector<int>& cells) {
  if (cells.empty()) return {};
  UnionFind uf(static_cast<int>(cells.size()));
  std::vector<int> slot(grid.cell_count(), -1);
  for (std::size_t k = 0; k < cells.size(); ++k) slot[cells[k]] = static_cast<int>(k);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto [ix, iy] = grid.cell_coords(cells[k]);
    const int dim = grid.dim();
    const int dx[4] = {1, 0, -1, 0};
    const int dy[4] = {0, 1, 0, -1};
    for (int d = 0; d < 2 * dim; ++d) {
      const int jx = ix + dx[d], jy = iy + dy[d];
      if (jx < 0 || jx >= grid.extent(0) || jy < 0 || (dim > 1 && jy >= grid.extent(1))) continue;
      const int j = grid.cell_index(jx, dim > 1 ? jy : 0);
      if (slot[j] >= 0) uf.unite(static_cast<int>(k), slot[j]);
    }
  }
  return collect_components(uf, cells);
}

bool cell_on_domain_boundary(const GridDomain& grid, int cell) {
  const auto [ix, iy] = grid.cell_coords(cell);
  const int dim = grid.dim();
  const int dx[4] = {1, 0, -1, 0};
  const int dy[4] = {0, 1, 0, -1};
  for (int d = 0; d < 2 * dim; ++d) {
    if (grid.label_at(ix + dx[d], iy + dy[d]) == Label::Exterior) return true;
  }
  return false;
}

}  // namespace

double distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

Point GridDomain::cell_center(int cell) const {
  const auto [ix, iy] = cell_coords(cell);
  Point p{0, 0};
  p[0] = lo_[0] + (ix - pad_ + 0.5) * h_;
  if (dim_ > 1) p[1] = lo_[1] + (iy - pad_ + 0.5) * h_;
  return p;
}

std::array<int, 2> GridDomain::cell_coords(int cell) const {
  return {cell % ext_[0], cell / ext_[0]};
}

int GridDomain::vertex_count() const {
  int n = ext_[0] + 1;
  if (dim_ > 1) n *= ext_[1] + 1;
  return n;
}

std::array<int, 2> GridDomain::vertex_coords(int vertex) const {
  return {vertex % (ext_[0] + 1), vertex / (ext_[0] + 1)};
}

Point GridDomain::vertex_position(int vertex) const {
  const auto [vx, vy] = vertex_coords(vertex);
  Point p{0, 0};
  p[0] = lo_[0] + (vx - pad_) * h_;
  if (dim_ > 1) p[1] = lo_[1] + (vy - pad_) * h_;
  return p;
}

Label GridDomain::label_at(int ix, int iy) const {
  if (ix < 0 || ix >= ext_[0]) return Label::Exterior;
  if (dim_ > 1 && (iy < 0 || iy >= ext_[1])) return Label::Exterior;
  return labels_[cell_index(ix, dim_ > 1 ? iy : 0)];
}

const std::vector<int>& GridDomain::cells_with(Label l) const {
  switch (l) {
    case Label::Local: return local_cells_;
    case Label::Nonlocal: return nonlocal_cells_;
    default: return exterior_cells_;
  }
}

GridDomain build_grid(int dim, const std::array<std::array<double, 2>, 2>& bbox, double h,
                      const std::function<Label(const Point&)>& labeler, int pad) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_grid: dim must be 1 or 2");
  if (!(h > 0)) throw std::invalid_argument("build_grid: h must be positive");
  if (pad < 0) throw std::invalid_argument("build_grid: pad must be >= 0");

  GridDomain g;
  g.dim_ = dim;
  g.h_ = h;
  g.pad_ = pad;
  for (int a = 0; a < dim; ++a) {
    const double len = bbox[a][1] - bbox[a][0];
    if (!(len > 0)) throw std::invalid_argument("build_grid: empty bbox interval");
    const int n = static_cast<int>(std::llround(len / h));
    if (n < 1 || std::abs(n * h - len) > 1e-9 * std::max(1.0, std::abs(len)))
      throw std::invalid_argument("build_grid: bbox length is not a multiple of h");
    g.n_[a] = n;
    g.ext_[a] = n + 2 * pad;
    g.lo_[a] = bbox[a][0];
  }
  if (dim == 1) {
    g.n_[1] = 1;
    g.ext_[1] = 1;
  }

  const int total = g.ext_[0] * g.ext_[1];
  g.labels_.resize(total);
  for (int c = 0; c < total; ++c) {
    const auto [ix, iy] = g.cell_coords(c);
    const bool inside = ix >= pad && ix < pad + g.n_[0] && (dim == 1 || (iy >= pad && iy < pad + g.n_[1]));
    Label l = Label::Exterior;
    if (inside) l = labeler(g.cell_center(c));
    g.labels_[c] = l;
    switch (l) {
      case Label::Local: g.local_cells_.push_back(c); break;
      case Label::Nonlocal: g.nonlocal_cells_.push_back(c); break;
      case Label::Exterior: g.exterior_cells_.push_back(c); break;
    }
  }
  if (g.local_cells_.empty() && g.nonlocal_cells_.empty())
    throw std::invalid_argument("build_grid: domain has no local or nonlocal cells");
  return g;
}

FacetSet extract_gamma(const GridDomain& grid) {
  FacetSet out;
  const int dim = grid.dim();
  for (int c : grid.cells_with(Label::Local)) {
    const auto [ix, iy] = grid.cell_coords(c);
    const Point pc = grid.cell_center(c);
    const int dx[4] = {1, 0, -1, 0};
    const int dy[4] = {0, 1, 0, -1};
    for (int d = 0; d < 2 * dim; ++d) {
      const int jx = ix + dx[d], jy = iy + dy[d];
      if (grid.label_at(jx, jy) != Label::Nonlocal) continue;
      Facet f;
      f.local_cell = c;
      f.nonlocal_cell = grid.cell_index(jx, dim > 1 ? jy : 0);
      f.normal = {static_cast<double>(dx[d]), static_cast<double>(dy[d])};
      f.center = pc;
      f.center[0] += 0.5 * grid.h() * dx[d];
      if (dim > 1) f.center[1] += 0.5 * grid.h() * dy[d];
      f.measure = dim == 1 ? 1.0 : grid.h();
      out.facets.push_back(f);
    }
  }
  return out;
}

std::vector<std::vector<int>> delta_connected_components(const std::vector<int>& cells,
                                                         const GridDomain& grid, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("delta_connected_components: delta must be positive");
  if (cells.empty()) return {};

  std::vector<int> sorted = cells;
  std::sort(sorted.begin(), sorted.end());

  std::vector<int> slot(grid.cell_count(), -1);
  for (std::size_t k = 0; k < sorted.size(); ++k) slot[sorted[k]] = static_cast<int>(k);

  UnionFind uf(static_cast<int>(sorted.size()));
  const int dim = grid.dim();
  const int w = static_cast<int>(std::ceil(delta / grid.h())) + 1;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto [ix, iy] = grid.cell_coords(sorted[k]);
    const Point pk = grid.cell_center(sorted[k]);
    const int wy = dim > 1 ? w : 0;
    for (int oy = -wy; oy <= wy; ++oy) {
      for (int ox = -w; ox <= w; ++ox) {
        if (ox == 0 && oy == 0) continue;
        const int jx = ix + ox, jy = iy + oy;
        if (jx < 0 || jx >= grid.extent(0)) continue;
        if (dim > 1 && (jy < 0 || jy >= grid.extent(1))) continue;
        const int j = grid.cell_index(jx, dim > 1 ? jy : 0);
        if (slot[j] < 0) continue;
        // strict inequality: ties at exactly delta do not connect
        if (distance(pk, grid.cell_center(j)) < delta) uf.unite(static_cast<int>(k), slot[j]);
      }
    }
  }
  return collect_components(uf, sorted);
}

namespace {

struct ComponentGraph {
  std::vector<std::vector<int>> nodes;  // cell sets
  std::vector<bool> touches;            // per node: sees the exterior datum
  bool connected = false;
  bool any_touches = false;
};

ComponentGraph build_component_graph(const GridDomain& grid, double delta) {
  ComponentGraph g;
  auto local = face_components(grid, grid.cells_with(Label::Local));
  auto nl = delta_connected_components(grid.cells_with(Label::Nonlocal), grid, delta);
  for (auto& c : local) g.nodes.push_back(std::move(c));
  for (auto& c : nl) g.nodes.push_back(std::move(c));

  const std::size_t n = g.nodes.size();
  g.touches.assign(n, false);
  const auto& exterior = grid.cells_with(Label::Exterior);
  for (std::size_t i = 0; i < n; ++i) {
    bool t = set_distance(grid, g.nodes[i], exterior) < delta;
    if (!t) {
      for (int c : g.nodes[i])
        if (cell_on_domain_boundary(grid, c)) { t = true; break; }
    }
    g.touches[i] = t;
    g.any_touches = g.any_touches || t;
  }

  if (n == 0) return g;
  // BFS over component-distance edges
  std::vector<bool> visited(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  visited[0] = true;
  std::size_t seen = 1;
  while (!q.empty()) {
    const std::size_t i = q.front();
    q.pop();
    for (std::size_t j = 0; j < n; ++j) {
      if (visited[j]) continue;
      if (set_distance(grid, g.nodes[i], g.nodes[j]) < delta) {
        visited[j] = true;
        q.push(j);
        ++seen;
      }
    }
  }
  g.connected = seen == n;
  return g;
}

}  // namespace

AdmissibilityReport check_admissibility(const GridDomain& grid, const FacetSet& gamma,
                                        double delta, CouplingMode mode) {
  if (!(delta > 0)) throw std::invalid_argument("check_admissibility: delta must be positive");
  AdmissibilityReport r;
  r.delta = delta;

  const auto& local = grid.cells_with(Label::Local);
  const auto& nl = grid.cells_with(Label::Nonlocal);

  const auto local_comps = face_components(grid, local);
  r.local_connected = local_comps.size() <= 1;
  r.pass_local_connected = r.local_connected;

  r.nl_components = delta_connected_components(nl, grid, delta);
  r.pass_nl_delta_connected = r.nl_components.size() <= 1;

  r.dist_local_nonlocal = set_distance(grid, local, nl);

  r.dist_gamma_nonlocal = kInf;
  for (const Facet& f : gamma.facets)
    for (int c : nl) r.dist_gamma_nonlocal = std::min(r.dist_gamma_nonlocal, distance(f.center, grid.cell_center(c)));

  // coupling conditions are vacuous when a side is missing
  r.pass_p1 = nl.empty() || local.empty() || r.dist_local_nonlocal < delta;
  r.pass_p2 = nl.empty() || gamma.empty() || r.dist_gamma_nonlocal < delta;

  const auto cg = build_component_graph(grid, delta);
  r.generalized_graph_connected = cg.connected;
  r.touches_exterior = cg.any_touches;

  r.required_ok = r.pass_local_connected && r.pass_nl_delta_connected &&
                  (mode == CouplingMode::Source ? r.pass_p1 : r.pass_p2);
  return r;
}

AdmissibilityReport check_generalized_admissibility(const GridDomain& grid, double delta) {
  if (!(delta > 0))
    throw std::invalid_argument("check_generalized_admissibility: delta must be positive");
  AdmissibilityReport r;
  r.delta = delta;

  const auto& local = grid.cells_with(Label::Local);
  const auto& nl = grid.cells_with(Label::Nonlocal);
  const auto local_comps = face_components(grid, local);
  r.local_connected = local_comps.size() <= 1;
  r.pass_local_connected = r.local_connected;
  r.nl_components = delta_connected_components(nl, grid, delta);
  r.pass_nl_delta_connected = r.nl_components.size() <= 1;
  r.dist_local_nonlocal = set_distance(grid, local, nl);
  r.dist_gamma_nonlocal = kInf;
  r.pass_p1 = nl.empty() || local.empty() || r.dist_local_nonlocal < delta;
  r.pass_p2 = false;

  const auto cg = build_component_graph(grid, delta);
  r.generalized_graph_connected = cg.connected;
  r.touches_exterior = cg.any_touches;
  r.required_ok = cg.connected && cg.any_touches;
  return r;
}

MaskRaster parse_mask(const std::string& text) {
  MaskRaster m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (m.nx == 0) m.nx = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != m.nx)
      throw std::invalid_argument("mask: ragged rows");
    for (char ch : line) {
      switch (ch) {
        case 'L': m.cells.push_back(Label::Local); break;
        case 'N': m.cells.push_back(Label::Nonlocal); break;
        case 'E': m.cells.push_back(Label::Exterior); break;
        default: throw std::invalid_argument(std::string("mask: invalid character '") + ch + "'");
      }
    }
    ++m.ny;
  }
  if (m.nx == 0) throw std::invalid_argument("mask: empty");
  return m;
}

}  // namespace lnc
