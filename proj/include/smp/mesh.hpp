// Undeformed-configuration mesh: nodes, volume elements, boundary facets with
// region tags, plus built-in generators and a Gmsh MSH v2 ASCII reader.

#ifndef SMP_MESH_HPP
#define SMP_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "smp/element.hpp"
#include "smp/types.hpp"

namespace smp {

// A boundary facet referenced as (element, local face id).
struct Facet {
  int elem;
  int face;
  int region;
};

struct Mesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 8>> elems;  // tet4 uses slots 0..3, rest -1
  std::vector<ElemKind> kinds;
  std::vector<int> elem_region;
  std::vector<Facet> facets;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elems() const { return static_cast<int>(elems.size()); }
  int nodes_of(int e) const { return elem_node_count(kinds[e]); }

  MatX elem_coords(int e) const;
  std::vector<int> facet_node_ids(const Facet& f) const;
  // Unique, sorted node ids of all facets carrying the region tag.
  std::vector<int> region_nodes(int region) const;
  double volume() const;

  // Checks node-index bounds, positive Jacobians at all quadrature points and
  // that every facet face id is valid. Throws on violation.
  void validate() const;
};

// Box [0,lx]x[0,ly]x[0,lz], nx x ny x nz hex elements.
// Facet regions: 0 x=0, 1 x=lx, 2 y=0, 3 y=ly, 4 z=0, 5 z=lz.
Mesh make_box(int nx, int ny, int nz, double lx, double ly, double lz);

// Cylindrical tube, axis along z from 0 to length.
// Facet regions: 0 z=0, 1 z=length, 2 inner wall, 3 outer wall.
Mesh make_tube(double r_outer, double thickness, double length, int n_circ,
               int n_axial, int n_thick);

// Solid cylinder, axis along z: an nx x ny grid mapped onto the disk by the
// elliptical square-to-disk map, extruded in nz layers.
// Facet regions: 0 z=0, 1 z=length, 2 lateral wall.
Mesh make_solid_cylinder(double radius, double length, int nx, int ny, int nz);

// Gmsh MSH version 2 ASCII. Volume element types 4 (tet4) and 5 (hex8) carry
// their physical tag as elem_region; surface types 2 (tri3) and 3 (quad4) are
// matched to element faces and become facets with their physical tag. When no
// surface elements are present, the free boundary is extracted with region 0.
Mesh read_gmsh_msh2(const std::string& path);

}  // namespace smp

#endif
