#include "smp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace smp {

MatX Mesh::elem_coords(int e) const {
  const int nn = nodes_of(e);
  MatX x(nn, 3);
  for (int i = 0; i < nn; ++i) x.row(i) = nodes[elems[e][i]].transpose();
  return x;
}

std::vector<int> Mesh::facet_node_ids(const Facet& f) const {
  const ElemKind k = kinds[f.elem];
  const int* local = face_nodes(k, f.face);
  std::vector<int> ids(face_node_count(k, f.face));
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = elems[f.elem][local[i]];
  return ids;
}

std::vector<int> Mesh::region_nodes(int region) const {
  std::set<int> s;
  for (const Facet& f : facets) {
    if (f.region != region) continue;
    for (int id : facet_node_ids(f)) s.insert(id);
  }
  return {s.begin(), s.end()};
}

double Mesh::volume() const {
  double v = 0.0;
  for (int e = 0; e < n_elems(); ++e) {
    const MatX x = elem_coords(e);
    const QuadratureRule& rule = volume_rule(kinds[e]);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      v += rule.weights[q] * physical_gradients(kinds[e], rule.points[q], x).detJ;
    }
  }
  return v;
}

void Mesh::validate() const {
  for (int e = 0; e < n_elems(); ++e) {
    const int nn = nodes_of(e);
    for (int i = 0; i < nn; ++i) {
      const int id = elems[e][i];
      if (id < 0 || id >= n_nodes())
        throw std::runtime_error("mesh: node index out of bounds in element " +
                                 std::to_string(e));
    }
    const MatX x = elem_coords(e);
    const QuadratureRule& rule = volume_rule(kinds[e]);
    for (const Vec3& p : rule.points) {
      physical_gradients(kinds[e], p, x);  // throws on detJ <= 0
    }
  }
  for (const Facet& f : facets) {
    if (f.elem < 0 || f.elem >= n_elems())
      throw std::runtime_error("mesh: facet references missing element");
    if (f.face < 0 || f.face >= face_count(kinds[f.elem]))
      throw std::runtime_error("mesh: facet face id out of range");
  }
}

Mesh make_box(int nx, int ny, int nz, double lx, double ly, double lz) {
  if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("box subdivisions");
  Mesh m;
  const auto node_id = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        m.nodes.emplace_back(lx * i / nx, ly * j / ny, lz * k / nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::array<int, 8> c = {node_id(i, j, k),         node_id(i + 1, j, k),
                                node_id(i + 1, j + 1, k), node_id(i, j + 1, k),
                                node_id(i, j, k + 1),     node_id(i + 1, j, k + 1),
                                node_id(i + 1, j + 1, k + 1),
                                node_id(i, j + 1, k + 1)};
        m.elems.push_back(c);
        m.kinds.push_back(ElemKind::Hex8);
        m.elem_region.push_back(0);
        const int e = m.n_elems() - 1;
        if (i == 0) m.facets.push_back({e, 0, 0});
        if (i == nx - 1) m.facets.push_back({e, 1, 1});
        if (j == 0) m.facets.push_back({e, 2, 2});
        if (j == ny - 1) m.facets.push_back({e, 3, 3});
        if (k == 0) m.facets.push_back({e, 4, 4});
        if (k == nz - 1) m.facets.push_back({e, 5, 5});
      }
  return m;
}

Mesh make_tube(double r_outer, double thickness, double length, int n_circ,
               int n_axial, int n_thick) {
  if (n_circ < 3 || n_axial < 1 || n_thick < 1)
    throw std::invalid_argument("tube subdivisions");
  if (!(r_outer > thickness && thickness > 0.0 && length > 0.0))
    throw std::invalid_argument("tube dimensions");
  Mesh m;
  const double r_inner = r_outer - thickness;
  const auto node_id = [&](int c, int r, int a) {
    // circumferential c (periodic), radial r, axial a
    return (a * (n_thick + 1) + r) * n_circ + c;
  };
  for (int a = 0; a <= n_axial; ++a)
    for (int r = 0; r <= n_thick; ++r)
      for (int c = 0; c < n_circ; ++c) {
        const double rad = r_inner + thickness * r / n_thick;
        const double ang = 2.0 * std::numbers::pi * c / n_circ;
        m.nodes.emplace_back(rad * std::cos(ang), rad * std::sin(ang),
                             length * a / n_axial);
      }
  for (int a = 0; a < n_axial; ++a)
    for (int r = 0; r < n_thick; ++r)
      for (int c = 0; c < n_circ; ++c) {
        const int c1 = (c + 1) % n_circ;
        // local xi = radial, eta = circumferential, zeta = axial (right-handed)
        std::array<int, 8> cn = {node_id(c, r, a),      node_id(c, r + 1, a),
                                 node_id(c1, r + 1, a), node_id(c1, r, a),
                                 node_id(c, r, a + 1),  node_id(c, r + 1, a + 1),
                                 node_id(c1, r + 1, a + 1),
                                 node_id(c1, r, a + 1)};
        m.elems.push_back(cn);
        m.kinds.push_back(ElemKind::Hex8);
        m.elem_region.push_back(0);
        const int e = m.n_elems() - 1;
        if (a == 0) m.facets.push_back({e, 4, 0});
        if (a == n_axial - 1) m.facets.push_back({e, 5, 1});
        if (r == 0) m.facets.push_back({e, 0, 2});
        if (r == n_thick - 1) m.facets.push_back({e, 1, 3});
      }
  m.validate();
  return m;
}

Mesh make_solid_cylinder(double radius, double length, int nx, int ny, int nz) {
  if (nx < 2 || ny < 2 || nz < 1)
    throw std::invalid_argument("cylinder subdivisions");
  Mesh m;
  const auto node_id = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const double X = 2.0 * i / nx - 1.0;
        const double Y = 2.0 * j / ny - 1.0;
        // elliptical square-to-disk map: the square boundary lands exactly on
        // the unit circle
        const double x = X * std::sqrt(1.0 - 0.5 * Y * Y);
        const double y = Y * std::sqrt(1.0 - 0.5 * X * X);
        m.nodes.emplace_back(radius * x, radius * y, length * k / nz);
      }
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::array<int, 8> c = {node_id(i, j, k),         node_id(i + 1, j, k),
                                node_id(i + 1, j + 1, k), node_id(i, j + 1, k),
                                node_id(i, j, k + 1),     node_id(i + 1, j, k + 1),
                                node_id(i + 1, j + 1, k + 1),
                                node_id(i, j + 1, k + 1)};
        m.elems.push_back(c);
        m.kinds.push_back(ElemKind::Hex8);
        m.elem_region.push_back(0);
        const int e = m.n_elems() - 1;
        if (k == 0) m.facets.push_back({e, 4, 0});
        if (k == nz - 1) m.facets.push_back({e, 5, 1});
        if (i == 0) m.facets.push_back({e, 0, 2});
        if (i == nx - 1) m.facets.push_back({e, 1, 2});
        if (j == 0) m.facets.push_back({e, 2, 2});
        if (j == ny - 1) m.facets.push_back({e, 3, 2});
      }
  m.validate();
  return m;
}

}  // namespace smp
