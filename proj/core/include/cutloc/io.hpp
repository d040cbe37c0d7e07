#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cutloc/mesh.hpp"

namespace cutloc {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// ASCII OFF reader (embedded meshes).
TriangleMesh read_off(const std::string& path);
void write_off(const std::string& path, const TriangleMesh& mesh);

/// Plain-text intrinsic format: header "INTRINSIC nv nf ne", then nf face
/// lines "i j k", then ne edge lines "i j length". Lines starting with '#'
/// are comments.
TriangleMesh read_intrinsic(const std::string& path);
void write_intrinsic(const std::string& path, const TriangleMesh& mesh);

/// Reads either format, dispatching on the header.
TriangleMesh read_mesh(const std::string& path);

/// Legacy ASCII VTK with one POINT_DATA scalar per named field.
void write_vtk(const std::string& path, const TriangleMesh& mesh,
               const std::vector<std::pair<std::string, VertexField>>& fields);

/// Two-column CSV with a "vertex_id,value" header.
void write_field_csv(const std::string& path, const VertexField& field);
VertexField read_field_csv(const std::string& path);

/// Two-column CSV with a "face_id,value" header.
void write_face_csv(const std::string& path, const Eigen::VectorXd& values);

}  // namespace cutloc
