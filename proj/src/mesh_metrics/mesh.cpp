#include "ppes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace ppes {

const char* bc_name(Bc b) {
  switch (b) {
    case Bc::FarField: return "farfield";
    case Bc::NoSlipWall: return "noslip_wall";
    case Bc::SlipWall: return "slip_wall";
    case Bc::Outflow: return "outflow";
  }
  return "?";
}

Bc bc_from_name(const std::string& s) {
  if (s == "farfield") return Bc::FarField;
  if (s == "noslip_wall") return Bc::NoSlipWall;
  if (s == "slip_wall") return Bc::SlipWall;
  if (s == "outflow") return Bc::Outflow;
  throw ConfigError("unknown boundary condition: " + s);
}

TensorOps tensor_ops_for(int p, const std::array<bool, 3>& collapsed) {
  const OperatorSet& full = operators(p);
  const OperatorSet& one = operators(0);
  return TensorOps(collapsed[0] ? one : full, collapsed[1] ? one : full, collapsed[2] ? one : full);
}

int Mesh::face_node(int f, int q) const {
  const int d = f / 2;
  const int t0 = d == 0 ? 1 : 0;
  const int t1 = d == 2 ? 1 : 2;
  int idx[3];
  idx[d] = (f % 2) ? ops.n[d] - 1 : 0;
  idx[t0] = q % ops.n[t0];
  idx[t1] = q / ops.n[t0];
  return ops.index(idx[0], idx[1], idx[2]);
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (const auto& e : elements) v += e.volume;
  return v;
}

namespace {

// tri-linear map and its reference derivatives at xi
void trilinear(const std::array<Vec3, 8>& v, const Vec3& xi, Vec3& x, std::array<Vec3, 3>& dx) {
  x = {0, 0, 0};
  dx = {};
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) {
        const double s0 = a ? 1.0 : -1.0, s1 = b ? 1.0 : -1.0, s2 = c ? 1.0 : -1.0;
        const double f0 = 0.5 * (1 + s0 * xi[0]), f1 = 0.5 * (1 + s1 * xi[1]), f2 = 0.5 * (1 + s2 * xi[2]);
        const Vec3& p = v[a + 2 * b + 4 * c];
        const double w = f0 * f1 * f2;
        const double w0 = 0.5 * s0 * f1 * f2, w1 = 0.5 * s1 * f0 * f2, w2 = 0.5 * s2 * f0 * f1;
        for (int k = 0; k < 3; ++k) {
          x[k] += w * p[k];
          dx[0][k] += w0 * p[k];
          dx[1][k] += w1 * p[k];
          dx[2][k] += w2 * p[k];
        }
      }
}

}  // namespace

void trilinear_to_nodes(const std::array<double, 8>& v, const TensorOps& ops, double* out) {
  for (int k = 0; k < ops.n[2]; ++k)
    for (int j = 0; j < ops.n[1]; ++j)
      for (int i = 0; i < ops.n[0]; ++i) {
        const double xi[3] = {ops.op[0]->nodes[i], ops.op[1]->nodes[j], ops.op[2]->nodes[k]};
        double s = 0.0;
        for (int c = 0; c < 2; ++c)
          for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a)
              s += v[a + 2 * b + 4 * c] * 0.125 * (1 + (a ? 1 : -1) * xi[0]) * (1 + (b ? 1 : -1) * xi[1]) *
                   (1 + (c ? 1 : -1) * xi[2]);
        out[ops.index(i, j, k)] = s;
      }
}

void compute_metrics(Element& e, const TensorOps& ops, const std::array<bool, 3>& collapsed) {
  const int np = ops.npts;
  e.x.assign(np * 3, 0.0);
  e.J.assign(np, 0.0);
  e.ahat.assign(np * 9, 0.0);
  // dX[d][pt*3 + k] = d x_k / d xi_d
  std::array<std::vector<double>, 3> dX;
  for (auto& v : dX) v.assign(np * 3, 0.0);
  std::vector<std::array<Vec3, 3>> exact(np);
  for (int k = 0; k < ops.n[2]; ++k)
    for (int j = 0; j < ops.n[1]; ++j)
      for (int i = 0; i < ops.n[0]; ++i) {
        const int pt = ops.index(i, j, k);
        const Vec3 xi{ops.op[0]->nodes[i], ops.op[1]->nodes[j], ops.op[2]->nodes[k]};
        Vec3 x;
        trilinear(e.vertices, xi, x, exact[pt]);
        for (int c = 0; c < 3; ++c) e.x[pt * 3 + c] = x[c];
      }
  for (int d = 0; d < 3; ++d) {
    if (collapsed[d]) {
      for (int pt = 0; pt < np; ++pt)
        for (int c = 0; c < 3; ++c) dX[d][pt * 3 + c] = exact[pt][d][c];
    } else {
      ops.apply_derivative(d, e.x, dX[d], 3);
    }
  }
  auto col = [&](int d, int pt) { return Vec3{dX[d][pt * 3], dX[d][pt * 3 + 1], dX[d][pt * 3 + 2]}; };
  for (int pt = 0; pt < np; ++pt) e.J[pt] = dot3(col(0, pt), cross3(col(1, pt), col(2, pt)));

  const bool full3d = !collapsed[0] && !collapsed[1] && !collapsed[2];
  if (!full3d) {
    // extruded directions are straight, so the cross-product form is GCL exact
    for (int pt = 0; pt < np; ++pt) {
      for (int l = 0; l < 3; ++l) {
        const Vec3 a = cross3(col((l + 1) % 3, pt), col((l + 2) % 3, pt));
        for (int m = 0; m < 3; ++m) e.ahat[pt * 9 + 3 * l + m] = a[m];
      }
    }
  } else {
    // conservative curl form: ahat^i_n = -(curl G)_i, G = (X_l grad X_m - X_m grad X_l)/2
    std::vector<double> G(np * 3), tmp(np);
    std::vector<double> curl(np * 3);
    for (int n = 0; n < 3; ++n) {
      const int m = (n + 1) % 3, l = (n + 2) % 3;
      for (int pt = 0; pt < np; ++pt)
        for (int k = 0; k < 3; ++k)
          G[pt * 3 + k] = 0.5 * (e.x[pt * 3 + l] * dX[k][pt * 3 + m] - e.x[pt * 3 + m] * dX[k][pt * 3 + l]);
      std::fill(curl.begin(), curl.end(), 0.0);
      // (curl G)_i = d_{i+1} G_{i+2} - d_{i+2} G_{i+1}
      std::vector<double> comp(np), deriv(np);
      for (int i = 0; i < 3; ++i) {
        const int a = (i + 1) % 3, b = (i + 2) % 3;
        for (int pt = 0; pt < np; ++pt) comp[pt] = G[pt * 3 + b];
        ops.apply_derivative(a, comp, deriv, 1);
        for (int pt = 0; pt < np; ++pt) curl[pt * 3 + i] += deriv[pt];
        for (int pt = 0; pt < np; ++pt) comp[pt] = G[pt * 3 + a];
        ops.apply_derivative(b, comp, deriv, 1);
        for (int pt = 0; pt < np; ++pt) curl[pt * 3 + i] -= deriv[pt];
      }
      for (int pt = 0; pt < np; ++pt)
        for (int i = 0; i < 3; ++i) e.ahat[pt * 9 + 3 * i + n] = -curl[pt * 3 + i];
    }
  }

  double minJ = e.J[0];
  for (double j : e.J) minJ = std::min(minJ, j);
  if (!(minJ > 0.0)) throw MeshError(fmt::format("nonpositive Jacobian {:.3e} in element {}", minJ, e.id));

  e.volume = 0.0;
  for (int pt = 0; pt < np; ++pt) e.volume += ops.weights[pt] * e.J[pt];
  e.h = 1e300;
  for (int d = 0; d < 3; ++d) {
    if (collapsed[d]) continue;
    double len = 0.0;
    for (int a = 0; a < 8; ++a) {
      if (a & (1 << d)) continue;
      const Vec3& p0 = e.vertices[a];
      const Vec3& p1 = e.vertices[a | (1 << d)];
      len += std::sqrt((p1[0] - p0[0]) * (p1[0] - p0[0]) + (p1[1] - p0[1]) * (p1[1] - p0[1]) +
                       (p1[2] - p0[2]) * (p1[2] - p0[2]));
    }
    e.h = std::min(e.h, len / 4.0);
  }
}

double gcl_residual(const Element& e, const TensorOps& ops) {
  const int np = ops.npts;
  std::vector<double> a(np * 3), out(np * 3, 0.0);
  for (int l = 0; l < 3; ++l) {
    for (int pt = 0; pt < np; ++pt)
      for (int m = 0; m < 3; ++m) a[pt * 3 + m] = e.ahat[pt * 9 + 3 * l + m];
    ops.apply_derivative_acc(l, a.data(), out.data(), 3, 1.0);
  }
  double r = 0.0;
  for (double v : out) r = std::max(r, std::abs(v));
  return r;
}

void rebuild_faces(Mesh& mesh) {
  mesh.faces.clear();
  mesh.boundaryFaces.clear();
  for (const auto& e : mesh.elements) {
    for (int d = 0; d < 3; ++d) {
      if (mesh.collapsed[d]) continue;
      const int nq = mesh.face_points(d);
      std::vector<int> identity(nq);
      for (int q = 0; q < nq; ++q) identity[q] = q;
      for (int side = 0; side < 2; ++side) {
        const int f = 2 * d + side;
        if (e.nbr[f] < 0) {
          Face bf;
          bf.elemL = e.id;
          bf.faceL = f;
          bf.bc = e.bc[f];
          bf.perm = identity;
          mesh.boundaryFaces.push_back(std::move(bf));
        } else if (side == 1) {
          Face fc;
          fc.elemL = e.id;
          fc.faceL = f;
          fc.elemR = e.nbr[f];
          fc.faceR = 2 * d;
          fc.perm = identity;
          mesh.faces.push_back(std::move(fc));
        }
      }
    }
  }
  long nv = 0;
  for (const auto& e : mesh.elements)
    for (long v : e.vertexIds) nv = std::max(nv, v + 1);
  mesh.vertexIncidence.assign(nv, {});
  for (const auto& e : mesh.elements) {
    std::array<long, 8> ids = e.vertexIds;
    std::sort(ids.begin(), ids.end());
    const auto end = std::unique(ids.begin(), ids.end());
    for (auto it = ids.begin(); it != end; ++it) mesh.vertexIncidence[*it].push_back(e.id);
  }
}

Mesh build_box_mesh(const BoxSpec& spec, int p) {
  for (int d = 0; d < 3; ++d) {
    if (spec.K[d] < 1) throw ConfigError("elements per direction must be >= 1");
    if (spec.collapsed[d] && (spec.K[d] != 1 || !spec.periodic[d]))
      throw ConfigError("a collapsed direction needs one periodic element layer");
    if (!(spec.hi[d] > spec.lo[d])) throw ConfigError("box extents must be increasing");
  }
  if (spec.alpha < 0.0 || spec.alpha >= 0.25) throw MeshError("perturbation amplitude must lie in [0, 0.25)");

  Mesh mesh;
  mesh.p = p;
  mesh.collapsed = spec.collapsed;
  mesh.ops = tensor_ops_for(p, spec.collapsed);

  const std::array<int, 3> nv{spec.K[0] + 1, spec.K[1] + 1, spec.K[2] + 1};
  const long nvert = static_cast<long>(nv[0]) * nv[1] * nv[2];
  std::vector<Vec3> pos(nvert);
  std::array<double, 3> h;
  for (int d = 0; d < 3; ++d) h[d] = (spec.hi[d] - spec.lo[d]) / spec.K[d];
  auto vid = [&](int i, int j, int k) { return i + static_cast<long>(nv[0]) * (j + static_cast<long>(nv[1]) * k); };

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Vec3> disp(nvert, Vec3{0, 0, 0});
  for (long v = 0; v < nvert; ++v)
    for (int d = 0; d < 3; ++d) disp[v][d] = spec.collapsed[d] ? 0.0 : spec.alpha * h[d] * uni(rng);
  for (int k = 0; k < nv[2]; ++k)
    for (int j = 0; j < nv[1]; ++j)
      for (int i = 0; i < nv[0]; ++i) {
        const int idx[3] = {i, j, k};
        // periodic images reuse the displacement of index 0
        int src[3] = {i, j, k};
        for (int d = 0; d < 3; ++d)
          if (spec.periodic[d] && idx[d] == spec.K[d]) src[d] = 0;
        Vec3 dd = disp[vid(src[0], src[1], src[2])];
        for (int d = 0; d < 3; ++d)
          if (!spec.periodic[d] && (idx[d] == 0 || idx[d] == spec.K[d])) dd[d] = 0.0;
        Vec3 x;
        for (int d = 0; d < 3; ++d) x[d] = spec.lo[d] + idx[d] * h[d] + dd[d];
        pos[vid(i, j, k)] = spec.vertex_map ? spec.vertex_map(x) : x;
      }
  auto logical = [&](int i, int j, int k) {
    int idx[3] = {i, j, k};
    for (int d = 0; d < 3; ++d)
      if (spec.periodic[d] && idx[d] == spec.K[d]) idx[d] = 0;
    return vid(idx[0], idx[1], idx[2]);
  };

  auto kept = [&](int i, int j, int k) { return !spec.keep || spec.keep(i, j, k); };
  std::vector<long> cellId(static_cast<long>(spec.K[0]) * spec.K[1] * spec.K[2], -1);
  auto cid = [&](int i, int j, int k) { return i + static_cast<long>(spec.K[0]) * (j + static_cast<long>(spec.K[1]) * k); };
  long ne = 0;
  for (int k = 0; k < spec.K[2]; ++k)
    for (int j = 0; j < spec.K[1]; ++j)
      for (int i = 0; i < spec.K[0]; ++i)
        if (kept(i, j, k)) cellId[cid(i, j, k)] = ne++;

  mesh.elements.resize(ne);
  for (int k = 0; k < spec.K[2]; ++k)
    for (int j = 0; j < spec.K[1]; ++j)
      for (int i = 0; i < spec.K[0]; ++i) {
        const long id = cellId[cid(i, j, k)];
        if (id < 0) continue;
        Element& e = mesh.elements[id];
        e.id = id;
        for (int c = 0; c < 2; ++c)
          for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a) {
              e.vertices[a + 2 * b + 4 * c] = pos[vid(i + a, j + b, k + c)];
              e.vertexIds[a + 2 * b + 4 * c] = logical(i + a, j + b, k + c);
            }
        const int idx[3] = {i, j, k};
        for (int d = 0; d < 3; ++d)
          for (int side = 0; side < 2; ++side) {
            const int f = 2 * d + side;
            int nb[3] = {i, j, k};
            nb[d] += side ? 1 : -1;
            bool outside = false;
            if (nb[d] < 0 || nb[d] >= spec.K[d]) {
              if (spec.periodic[d]) nb[d] = (nb[d] + spec.K[d]) % spec.K[d];
              else outside = true;
            }
            (void)idx;
            if (outside) {
              e.nbr[f] = -1;
              e.bc[f] = spec.side_bc[f];
            } else {
              const long n = cellId[cid(nb[0], nb[1], nb[2])];
              e.nbr[f] = n;
              e.bc[f] = n < 0 ? spec.mask_bc : Bc::FarField;
            }
          }
        compute_metrics(e, mesh.ops, mesh.collapsed);
      }
  rebuild_faces(mesh);
  return mesh;
}

double face_metric_mismatch(const Mesh& mesh) {
  double worst = 0.0;
  for (const Face& f : mesh.faces) {
    const Element& L = mesh.elements[f.elemL];
    const Element& R = mesh.elements[f.elemR];
    const int d = f.faceL / 2;
    for (int q = 0; q < static_cast<int>(f.perm.size()); ++q) {
      const int pl = mesh.face_node(f.faceL, q);
      const int pr = mesh.face_node(f.faceR, f.perm[q]);
      for (int m = 0; m < 3; ++m)
        worst = std::max(worst, std::abs(L.ahat[pl * 9 + 3 * d + m] - R.ahat[pr * 9 + 3 * d + m]));
    }
  }
  return worst;
}

void write_mesh(const Mesh& mesh, std::ostream& os) {
  fmt::print(os, "ppes-mesh 1\n");
  fmt::print(os, "order {}\n", mesh.p);
  fmt::print(os, "collapsed {} {} {}\n", int(mesh.collapsed[0]), int(mesh.collapsed[1]), int(mesh.collapsed[2]));
  fmt::print(os, "elements {}\n", mesh.elements.size());
  for (const auto& e : mesh.elements) {
    for (int a = 0; a < 8; ++a)
      fmt::print(os, "{} {:.17g} {:.17g} {:.17g}\n", e.vertexIds[a], e.vertices[a][0], e.vertices[a][1],
                 e.vertices[a][2]);
    for (int f = 0; f < kFaces; ++f) fmt::print(os, "{} {}{}", e.nbr[f], static_cast<int>(e.bc[f]), f + 1 < kFaces ? " " : "\n");
  }
}

Mesh read_mesh(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "ppes-mesh" || version != 1) throw MeshError("not a ppes-mesh version 1 stream");
  Mesh mesh;
  std::string key;
  is >> key >> mesh.p;
  int c0, c1, c2;
  is >> key >> c0 >> c1 >> c2;
  mesh.collapsed = {c0 != 0, c1 != 0, c2 != 0};
  long ne = 0;
  is >> key >> ne;
  if (!is || ne < 0) throw MeshError("malformed mesh header");
  mesh.ops = tensor_ops_for(mesh.p, mesh.collapsed);
  mesh.elements.resize(ne);
  for (long id = 0; id < ne; ++id) {
    Element& e = mesh.elements[id];
    e.id = id;
    for (int a = 0; a < 8; ++a) is >> e.vertexIds[a] >> e.vertices[a][0] >> e.vertices[a][1] >> e.vertices[a][2];
    for (int f = 0; f < kFaces; ++f) {
      int b;
      is >> e.nbr[f] >> b;
      e.bc[f] = static_cast<Bc>(b);
    }
    if (!is) throw MeshError("truncated mesh stream");
    compute_metrics(e, mesh.ops, mesh.collapsed);
  }
  rebuild_faces(mesh);
  return mesh;
}

void write_vtk(const Mesh& mesh, const std::vector<PointField>& fields, std::ostream& os) {
  const long np = mesh.npts();
  const long total = np * static_cast<long>(mesh.elements.size());
  fmt::print(os, "# vtk DataFile Version 3.0\nppes solution points\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  fmt::print(os, "POINTS {} double\n", total);
  for (const auto& e : mesh.elements)
    for (long pt = 0; pt < np; ++pt)
      fmt::print(os, "{:.12g} {:.12g} {:.12g}\n", e.x[pt * 3], e.x[pt * 3 + 1], e.x[pt * 3 + 2]);
  fmt::print(os, "CELLS {} {}\n", total, 2 * total);
  for (long i = 0; i < total; ++i) fmt::print(os, "1 {}\n", i);
  fmt::print(os, "CELL_TYPES {}\n", total);
  for (long i = 0; i < total; ++i) fmt::print(os, "1\n");
  if (fields.empty()) return;
  fmt::print(os, "POINT_DATA {}\n", total);
  for (const auto& f : fields) {
    if (static_cast<long>(f.values.size()) != total) throw ContractViolation("write_vtk: field size mismatch");
    fmt::print(os, "SCALARS {} double 1\nLOOKUP_TABLE default\n", f.name);
    for (double v : f.values) fmt::print(os, "{:.12g}\n", v);
  }
}

}  // namespace ppes
