#include "cutloc/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cutloc {

namespace {

// Next non-empty, non-comment line split into tokens.
bool next_tokens(std::istream& in, std::vector<std::string>* toks) {
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    toks->clear();
    std::string t;
    while (ls >> t) toks->push_back(t);
    if (!toks->empty()) return true;
  }
  return false;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

}  // namespace

TriangleMesh read_off(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> toks;
  if (!next_tokens(in, &toks) || toks[0] != "OFF")
    throw IoError(path + ": missing OFF header");
  // Counts may share the header line or follow it.
  if (toks.size() == 1 && !next_tokens(in, &toks))
    throw IoError(path + ": missing OFF counts");
  size_t off = toks[0] == "OFF" ? 1 : 0;
  if (toks.size() - off < 3) throw IoError(path + ": malformed OFF counts");
  int nv = std::stoi(toks[off]), nf = std::stoi(toks[off + 1]);
  if (nv <= 0 || nf <= 0) throw IoError(path + ": empty OFF mesh");

  Eigen::MatrixX3d P(nv, 3);
  for (int v = 0; v < nv; ++v) {
    if (!next_tokens(in, &toks) || toks.size() < 3)
      throw IoError(path + ": truncated OFF vertices");
    for (int k = 0; k < 3; ++k) P(v, k) = std::stod(toks[k]);
  }
  Eigen::MatrixX3i F(nf, 3);
  for (int f = 0; f < nf; ++f) {
    if (!next_tokens(in, &toks) || toks.size() < 4)
      throw IoError(path + ": truncated OFF faces");
    if (std::stoi(toks[0]) != 3)
      throw IoError(path + ": only triangle faces are supported");
    for (int k = 0; k < 3; ++k) F(f, k) = std::stoi(toks[k + 1]);
  }
  return TriangleMesh::from_embedded(std::move(P), std::move(F));
}

void write_off(const std::string& path, const TriangleMesh& mesh) {
  if (!mesh.has_positions())
    throw IoError("mesh has no positions; use the intrinsic format");
  std::ofstream out = open_output(path);
  const auto& P = mesh.positions();
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.face_count() << " 0\n";
  for (int v = 0; v < mesh.vertex_count(); ++v)
    out << P(v, 0) << ' ' << P(v, 1) << ' ' << P(v, 2) << '\n';
  for (int f = 0; f < mesh.face_count(); ++f)
    out << "3 " << mesh.faces()(f, 0) << ' ' << mesh.faces()(f, 1) << ' '
        << mesh.faces()(f, 2) << '\n';
}

TriangleMesh read_intrinsic(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> toks;
  if (!next_tokens(in, &toks) || toks[0] != "INTRINSIC" || toks.size() < 4)
    throw IoError(path + ": missing INTRINSIC header");
  int nv = std::stoi(toks[1]), nf = std::stoi(toks[2]), ne = std::stoi(toks[3]);
  Eigen::MatrixX3i F(nf, 3);
  for (int f = 0; f < nf; ++f) {
    if (!next_tokens(in, &toks) || toks.size() < 3)
      throw IoError(path + ": truncated face list");
    for (int k = 0; k < 3; ++k) F(f, k) = std::stoi(toks[k]);
  }
  std::vector<std::tuple<int, int, double>> lengths;
  lengths.reserve(ne);
  for (int e = 0; e < ne; ++e) {
    if (!next_tokens(in, &toks) || toks.size() < 3)
      throw IoError(path + ": truncated edge list");
    lengths.emplace_back(std::stoi(toks[0]), std::stoi(toks[1]),
                         std::stod(toks[2]));
  }
  return TriangleMesh::from_intrinsic(nv, std::move(F), lengths);
}

void write_intrinsic(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out = open_output(path);
  out << "INTRINSIC " << mesh.vertex_count() << ' ' << mesh.face_count() << ' '
      << mesh.edge_count() << '\n';
  for (int f = 0; f < mesh.face_count(); ++f)
    out << mesh.faces()(f, 0) << ' ' << mesh.faces()(f, 1) << ' '
        << mesh.faces()(f, 2) << '\n';
  for (const Edge& e : mesh.edges())
    out << e.i << ' ' << e.j << ' ' << e.length << '\n';
}

TriangleMesh read_mesh(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> toks;
  if (!next_tokens(in, &toks)) throw IoError(path + ": empty file");
  if (toks[0] == "OFF") return read_off(path);
  if (toks[0] == "INTRINSIC") return read_intrinsic(path);
  throw IoError(path + ": unrecognized mesh header '" + toks[0] + "'");
}

void write_vtk(const std::string& path, const TriangleMesh& mesh,
               const std::vector<std::pair<std::string, VertexField>>& fields) {
  if (!mesh.has_positions())
    throw IoError("VTK output needs vertex positions (or output coords)");
  std::ofstream out = open_output(path);
  const auto& P = mesh.positions();
  out << "# vtk DataFile Version 3.0\nvertex fields\nASCII\n"
      << "DATASET POLYDATA\nPOINTS " << mesh.vertex_count() << " double\n";
  for (int v = 0; v < mesh.vertex_count(); ++v)
    out << P(v, 0) << ' ' << P(v, 1) << ' ' << P(v, 2) << '\n';
  out << "POLYGONS " << mesh.face_count() << ' ' << 4 * mesh.face_count()
      << '\n';
  for (int f = 0; f < mesh.face_count(); ++f)
    out << "3 " << mesh.faces()(f, 0) << ' ' << mesh.faces()(f, 1) << ' '
        << mesh.faces()(f, 2) << '\n';
  out << "POINT_DATA " << mesh.vertex_count() << '\n';
  for (const auto& [name, field] : fields) {
    if (field.size() != mesh.vertex_count())
      throw IoError("field '" + name + "' does not match the vertex count");
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < field.size(); ++v) out << field[v] << '\n';
  }
}

void write_field_csv(const std::string& path, const VertexField& field) {
  std::ofstream out = open_output(path);
  out << "vertex_id,value\n";
  for (int v = 0; v < field.size(); ++v) out << v << ',' << field[v] << '\n';
}

VertexField read_field_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("vertex_id", 0) != 0)
    throw IoError(path + ": missing vertex_id,value header");
  std::vector<std::pair<int, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path + ": malformed CSV row");
    rows.emplace_back(std::stoi(line.substr(0, comma)),
                      std::stod(line.substr(comma + 1)));
  }
  VertexField f = VertexField::Zero(rows.size());
  for (auto [v, val] : rows) {
    if (v < 0 || v >= f.size()) throw IoError(path + ": vertex id out of range");
    f[v] = val;
  }
  return f;
}

void write_face_csv(const std::string& path, const Eigen::VectorXd& values) {
  std::ofstream out = open_output(path);
  out << "face_id,value\n";
  for (int f = 0; f < values.size(); ++f) out << f << ',' << values[f] << '\n';
}

}  // namespace cutloc
