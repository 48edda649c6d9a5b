#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ppes/common.hpp"
#include "ppes/sbp.hpp"

namespace ppes {

/// Boundary condition codes carried by boundary faces.
enum class Bc : int { FarField = 0, NoSlipWall = 1, SlipWall = 2, Outflow = 3 };

const char* bc_name(Bc b);
Bc bc_from_name(const std::string& s);

/// Local face numbering: 2*d is the xi_d = -1 face, 2*d+1 the xi_d = +1 face.
inline constexpr int kFaces = 6;

struct Element {
  long id = 0;
  std::array<Vec3, 8> vertices{};   // vertex a + 2b + 4c sits at xi = (2a-1, 2b-1, 2c-1)
  std::array<long, 8> vertexIds{};  // logical ids (periodic images share an id)
  std::vector<double> x;            // npts * 3
  std::vector<double> J;            // npts
  std::vector<double> ahat;         // npts * 9, ahat[pt*9 + 3*l + m] = J dxi_l/dx_m
  std::array<long, kFaces> nbr{};   // neighbour element or -1
  std::array<Bc, kFaces> bc{};      // valid where nbr == -1
  double h = 0.0;                   // smallest mean edge length over active directions
  double volume = 0.0;

  const double* a(int pt, int l) const { return &ahat[pt * 9 + 3 * l]; }
};

/// Conforming face pair. perm maps face point q of the left side to the
/// matching face point of the right side.
struct Face {
  long elemL = -1;
  int faceL = -1;
  long elemR = -1;
  int faceR = -1;
  Bc bc = Bc::FarField;
  std::vector<int> perm;
};

struct BoxSpec {
  std::array<int, 3> K{1, 1, 1};
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};
  std::array<bool, 3> periodic{false, false, false};
  std::array<bool, 3> collapsed{false, false, false};
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::array<Bc, kFaces> side_bc{Bc::FarField, Bc::FarField, Bc::FarField,
                                 Bc::FarField, Bc::FarField, Bc::FarField};
  /// Optional lattice-cell mask; removed cells turn adjacent faces into mask_bc walls.
  std::function<bool(int, int, int)> keep;
  Bc mask_bc = Bc::SlipWall;
  /// Optional map applied to lattice vertices before the tri-linear mapping.
  std::function<Vec3(const Vec3&)> vertex_map;
};

struct Mesh {
  int p = 1;
  std::array<bool, 3> collapsed{false, false, false};
  TensorOps ops;
  std::vector<Element> elements;
  std::vector<std::vector<long>> vertexIncidence;  // logical vertex id -> elements
  std::vector<Face> faces;                         // interior and periodic pairs
  std::vector<Face> boundaryFaces;

  int npts() const { return ops.npts; }
  bool active(int d) const { return !collapsed[d]; }
  /// Number of points on a face normal to direction d.
  int face_points(int d) const { return ops.npts / ops.n[d]; }
  /// Point index of face point q on local face f.
  int face_node(int f, int q) const;
  double total_volume() const;
};

TensorOps tensor_ops_for(int p, const std::array<bool, 3>& collapsed);

Mesh build_box_mesh(const BoxSpec& spec, int p);

/// Fills x, J and ahat from the element vertices (tri-linear mapping).
void compute_metrics(Element& e, const TensorOps& ops, const std::array<bool, 3>& collapsed);

/// max_m max_pt |sum_l D_l ahat^l_m|
double gcl_residual(const Element& e, const TensorOps& ops);

/// Largest mismatch of the normal metric on shared faces.
double face_metric_mismatch(const Mesh& mesh);

/// Rebuilds face lists from element neighbour data.
void rebuild_faces(Mesh& mesh);

void write_mesh(const Mesh& mesh, std::ostream& os);
Mesh read_mesh(std::istream& is);

/// Legacy VTK unstructured grid of solution points with named point fields.
struct PointField {
  std::string name;
  std::vector<double> values;  // one per solution point, element-major
};
void write_vtk(const Mesh& mesh, const std::vector<PointField>& fields, std::ostream& os);

/// Tri-linear interpolation of 8 vertex values to every solution point.
void trilinear_to_nodes(const std::array<double, 8>& v, const TensorOps& ops, double* out);

}  // namespace ppes
