#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smp/mesh.hpp"

namespace smp {

namespace {

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

Mesh read_gmsh_msh2(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);

  Mesh m;
  std::map<long, int> node_map;  // gmsh node id -> dense index
  struct Surf {
    std::vector<int> nodes;
    int phys;
  };
  std::vector<Surf> surfaces;

  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::getline(in, line);
      std::istringstream fs(line);
      double version = 0.0;
      fs >> version;
      if (version < 2.0 || version >= 3.0)
        throw std::runtime_error("unsupported MSH version (need 2.x ASCII)");
      std::getline(in, line);  // $EndMeshFormat
    } else if (line.rfind("$Nodes", 0) == 0) {
      std::getline(in, line);
      const long count = std::stol(line);
      for (long i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream ns(line);
        long id;
        double x, y, z;
        if (!(ns >> id >> x >> y >> z))
          throw std::runtime_error("malformed node line: " + line);
        node_map[id] = m.n_nodes();
        m.nodes.emplace_back(x, y, z);
      }
    } else if (line.rfind("$Elements", 0) == 0) {
      std::getline(in, line);
      const long count = std::stol(line);
      for (long i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream es(line);
        long id;
        int type, ntags;
        if (!(es >> id >> type >> ntags))
          throw std::runtime_error("malformed element line: " + line);
        int phys = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag;
          es >> tag;
          if (t == 0) phys = tag;
        }
        const auto read_nodes = [&](int n) {
          std::vector<int> ids(n);
          for (int q = 0; q < n; ++q) {
            long nid;
            if (!(es >> nid))
              throw std::runtime_error("truncated element line: " + line);
            const auto it = node_map.find(nid);
            if (it == node_map.end())
              throw std::runtime_error("element references unknown node");
            ids[q] = it->second;
          }
          return ids;
        };
        if (type == 4 || type == 5) {  // tet4 / hex8 volume elements
          const int nn = type == 4 ? 4 : 8;
          const std::vector<int> ids = read_nodes(nn);
          std::array<int, 8> c;
          c.fill(-1);
          std::copy(ids.begin(), ids.end(), c.begin());
          m.elems.push_back(c);
          m.kinds.push_back(type == 4 ? ElemKind::Tet4 : ElemKind::Hex8);
          m.elem_region.push_back(phys);
        } else if (type == 2 || type == 3) {  // tri3 / quad4 boundary facets
          surfaces.push_back({read_nodes(type == 2 ? 3 : 4), phys});
        }
        // other element types (points, lines, higher order) are skipped
      }
    }
  }
  if (m.n_elems() == 0) throw std::runtime_error("mesh has no volume elements");

  // Index all element faces by their sorted node set.
  std::map<std::vector<int>, std::pair<int, int>> face_index;
  std::map<std::vector<int>, int> face_multiplicity;
  for (int e = 0; e < m.n_elems(); ++e) {
    const ElemKind k = m.kinds[e];
    for (int f = 0; f < face_count(k); ++f) {
      const int* local = face_nodes(k, f);
      std::vector<int> ids(face_node_count(k, f));
      for (std::size_t q = 0; q < ids.size(); ++q) ids[q] = m.elems[e][local[q]];
      const std::vector<int> key = sorted(ids);
      face_index[key] = {e, f};
      ++face_multiplicity[key];
    }
  }

  if (!surfaces.empty()) {
    for (const Surf& s : surfaces) {
      const auto it = face_index.find(sorted(s.nodes));
      if (it == face_index.end())
        throw std::runtime_error("surface element does not match any volume face");
      m.facets.push_back({it->second.first, it->second.second, s.phys});
    }
  } else {
    // free boundary: faces seen exactly once
    for (const auto& [key, mult] : face_multiplicity) {
      if (mult == 1) {
        const auto [e, f] = face_index[key];
        m.facets.push_back({e, f, 0});
      }
    }
  }

  m.validate();
  return m;
}

}  // namespace smp
