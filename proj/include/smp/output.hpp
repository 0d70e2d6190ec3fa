// Deterministic artefact writers: CSV tables at 17 significant digits with
// '.' decimal points, legacy ASCII VTK unstructured grids and JSONL step
// lines. Identical data produce byte-identical files.

#ifndef SMP_OUTPUT_HPP
#define SMP_OUTPUT_HPP

#include <ostream>
#include <string>
#include <vector>

#include "smp/mesh.hpp"

namespace smp {

// Shortest-of-17-significant-digits, locale-independent (round-trips doubles).
std::string format_g17(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Throws unless row.size() == header.size().
  void append(std::vector<double> row);
  int col(const std::string& name) const;  // throws on unknown name
};

// Column subset of t, in the order requested.
Table select(const Table& t, const std::vector<std::string>& cols);

// Comma-separated, header line first, '\n' endings; an empty table writes
// just the header. Throws on IO failure, naming the path.
void write_csv(const std::string& path, const Table& t);

// Nodal or per-cell field; data is index-major with components interleaved,
// so data.size() == components * (n_nodes or n_elems).
struct VtkField {
  std::string name;
  int components = 1;  // 1 (SCALARS) or 3 (VECTORS)
  std::vector<double> data;
};

// Legacy ASCII VTK UNSTRUCTURED_GRID with POINT_DATA / CELL_DATA sections.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkField>& point_fields = {},
               const std::vector<VtkField>& cell_fields = {});

// One JSONL line: {"step":..,"t":..,"dt":..,"iterations":..,"cuts":..,
// "residuals":[..]}.
void write_step_line(std::ostream& os, int step, double t, double dt,
                     int iterations, int cuts,
                     const std::vector<double>& residuals);

}  // namespace smp

#endif
