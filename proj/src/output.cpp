#include "smp/output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace smp {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("output: cannot open '" + path + "'");
  return os;
}

void close_or_throw(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw std::runtime_error("output: write failed for '" + path + "'");
}

int vtk_cell_type(ElemKind k) {
  switch (k) {
    case ElemKind::Hex8: return 12;
    case ElemKind::Tet4: return 10;
  }
  throw std::logic_error("write_vtk: unknown element kind");
}

void write_vtk_field(std::ofstream& os, const VtkField& f, int n_entities) {
  if (f.components != 1 && f.components != 3)
    throw std::invalid_argument("write_vtk: field '" + f.name +
                                "' must have 1 or 3 components");
  if (static_cast<int>(f.data.size()) != f.components * n_entities)
    throw std::invalid_argument("write_vtk: field '" + f.name +
                                "' size does not match the mesh");
  if (f.components == 1) {
    os << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < n_entities; ++i) os << format_g17(f.data[i]) << "\n";
  } else {
    os << "VECTORS " << f.name << " double\n";
    for (int i = 0; i < n_entities; ++i)
      os << format_g17(f.data[3 * i]) << " " << format_g17(f.data[3 * i + 1])
         << " " << format_g17(f.data[3 * i + 2]) << "\n";
  }
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void Table::append(std::vector<double> row) {
  if (row.size() != header.size())
    throw std::invalid_argument("Table: row width " +
                                std::to_string(row.size()) +
                                " != header width " +
                                std::to_string(header.size()));
  rows.push_back(std::move(row));
}

int Table::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("Table: no column named '" + name + "'");
}

Table select(const Table& t, const std::vector<std::string>& cols) {
  std::vector<int> idx;
  for (const std::string& c : cols) idx.push_back(t.col(c));
  Table out;
  out.header = cols;
  out.rows.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    std::vector<double> row;
    row.reserve(idx.size());
    for (int i : idx) row.push_back(r[i]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream os = open_or_throw(path);
  for (std::size_t i = 0; i < t.header.size(); ++i)
    os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size())
      throw std::invalid_argument("write_csv: ragged table");
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_g17(row[i]);
    os << "\n";
  }
  close_or_throw(os, path);
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields) {
  std::ofstream os = open_or_throw(path);
  os << "# vtk DataFile Version 3.0\n";
  os << "smp scenario snapshot\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.n_nodes() << " double\n";
  for (const Vec3& x : mesh.nodes)
    os << format_g17(x[0]) << " " << format_g17(x[1]) << " "
       << format_g17(x[2]) << "\n";
  int list_size = 0;
  for (int e = 0; e < mesh.n_elems(); ++e) list_size += 1 + mesh.nodes_of(e);
  os << "CELLS " << mesh.n_elems() << " " << list_size << "\n";
  for (int e = 0; e < mesh.n_elems(); ++e) {
    os << mesh.nodes_of(e);
    for (int i = 0; i < mesh.nodes_of(e); ++i) os << " " << mesh.elems[e][i];
    os << "\n";
  }
  os << "CELL_TYPES " << mesh.n_elems() << "\n";
  for (int e = 0; e < mesh.n_elems(); ++e)
    os << vtk_cell_type(mesh.kinds[e]) << "\n";
  if (!point_fields.empty()) {
    os << "POINT_DATA " << mesh.n_nodes() << "\n";
    for (const VtkField& f : point_fields)
      write_vtk_field(os, f, mesh.n_nodes());
  }
  if (!cell_fields.empty()) {
    os << "CELL_DATA " << mesh.n_elems() << "\n";
    for (const VtkField& f : cell_fields)
      write_vtk_field(os, f, mesh.n_elems());
  }
  close_or_throw(os, path);
}

void write_step_line(std::ostream& os, int step, double t, double dt,
                     int iterations, int cuts,
                     const std::vector<double>& residuals) {
  nlohmann::ordered_json j;
  j["step"] = step;
  j["t"] = t;
  j["dt"] = dt;
  j["iterations"] = iterations;
  j["cuts"] = cuts;
  j["residuals"] = residuals;
  os << j.dump() << "\n";
}

}  // namespace smp
