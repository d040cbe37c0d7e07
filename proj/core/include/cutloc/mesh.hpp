#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutloc {

using Vec3 = Eigen::Vector3d;
using VertexField = Eigen::VectorXd;

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Undirected mesh edge with its two endpoints (i < j) and incident faces.
struct Edge {
  int i = -1, j = -1;
  double length = 0.0;
  int face0 = -1, face1 = -1;  // face1 == -1 on the boundary
};

/// Triangulated surface, either embedded in R^3 or purely intrinsic
/// (per-edge lengths). Immutable after construction.
class TriangleMesh {
 public:
  /// Embedded mesh from vertex positions and CCW faces.
  static TriangleMesh from_embedded(Eigen::MatrixX3d positions,
                                    Eigen::MatrixX3i faces);

  /// Intrinsic mesh: connectivity plus per-edge lengths keyed by the
  /// unordered vertex pair. Optional positions are kept for output only.
  static TriangleMesh from_intrinsic(
      int vertex_count, Eigen::MatrixX3i faces,
      const std::vector<std::tuple<int, int, double>>& edge_lengths,
      std::optional<Eigen::MatrixX3d> positions = std::nullopt);

  int vertex_count() const { return vertex_count_; }
  int face_count() const { return static_cast<int>(faces_.rows()); }
  const Eigen::MatrixX3i& faces() const { return faces_; }
  bool is_embedded() const { return embedded_; }
  bool has_positions() const { return positions_.has_value(); }
  const Eigen::MatrixX3d& positions() const;

  /// Parameterization coordinates for intrinsic meshes (output only; they do
  /// not have to reproduce the intrinsic edge lengths).
  void set_output_coords(Eigen::MatrixX3d coords);

  /// Length of the edge opposite corner k of face f
  /// (i.e. the edge joining corners k+1 and k+2).
  double opposite_length(int f, int k) const { return corner_lengths_(f, k); }
  double face_area(int f) const { return face_areas_[f]; }
  double total_area() const { return total_area_; }

  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  /// Index into edges() for the unordered pair (i, j); -1 if absent.
  int edge_index(int i, int j) const;

  const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }
  const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
  /// Neighboring face across the edge opposite corner k of face f (-1 if none).
  int face_neighbor(int f, int k) const { return face_neighbors_(f, k); }

  bool has_boundary() const { return has_boundary_; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
  const std::vector<char>& boundary_vertices() const { return boundary_vertex_; }

  std::optional<int> basepoint() const { return basepoint_; }
  void set_basepoint(int b);

  /// Longest edge; the "h" used in mesh-dependent tolerances.
  double max_edge_length() const { return max_edge_length_; }
  double mean_edge_length() const { return mean_edge_length_; }

  /// Corner angle at corner k of face f, from the law of cosines.
  double corner_angle(int f, int k) const;

  bool is_connected() const;

  /// Quality warnings collected at construction (near-degenerate angles).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  TriangleMesh() = default;
  void build_topology();
  void validate() const;
  void finalize_geometry();

  int vertex_count_ = 0;
  bool embedded_ = false;
  Eigen::MatrixX3i faces_;
  std::optional<Eigen::MatrixX3d> positions_;
  Eigen::MatrixX3d corner_lengths_;  // (f, k) = length of edge opposite corner k
  std::vector<double> face_areas_;
  double total_area_ = 0.0;

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<std::vector<int>> vertex_edges_;
  Eigen::MatrixX3i face_neighbors_;
  std::vector<char> boundary_vertex_;
  bool has_boundary_ = false;
  std::optional<int> basepoint_;
  double max_edge_length_ = 0.0;
  double mean_edge_length_ = 0.0;
  std::vector<std::string> warnings_;
};

}  // namespace cutloc
