#include "ppes/sensors_av.hpp"

#include <algorithm>
#include <cmath>

namespace ppes {

double sensor_exponent(int p) {
  if (p <= 1) return 1.0;
  return std::max(1.0, (p - 1.0) / (p - 1.5));
}

SensorValue sensor_from_residual(double rmax, int p, double delta) {
  SensorValue s;
  s.rmax = std::clamp(rmax, 0.0, 1.0);
  s.Sn0 = std::pow(s.rmax, sensor_exponent(p));
  s.Sn = s.Sn0 >= std::max(0.2, delta) ? s.Sn0 : 0.0;
  return s;
}

double element_scale(const Mesh& mesh, const Element& e) { return e.h / (mesh.p + 1); }

SensorValue entropy_residual_sensor(const Mesh& mesh, const Element& e, const double* U, const double* rhsInv,
                                    const GasModel& gas, double h, double delta) {
  const TensorOps& ops = mesh.ops;
  const int np = ops.npts;
  std::vector<double> ws(np * 5);
  std::vector<double> S(np);
  std::vector<double> div(np, 0.0);
  std::vector<double> flux(np);
  double smax = 0.0, lmax = 0.0;
  std::vector<Vec3> FS(np);
  for (int pt = 0; pt < np; ++pt) {
    const State s = State::from(U + 5 * pt);
    const Primitive q = primitive(s, gas, e.id, pt);
    S[pt] = -q.rho * specific_entropy(q.rho, q.p, gas);
    for (int m = 0; m < 3; ++m) FS[pt][m] = S[pt] * q.V[m];
    const Vec5 w = entropy_vars(s, gas).w;
    for (int c = 0; c < 5; ++c) ws[pt * 5 + c] = w[c];
    smax = std::max(smax, std::abs(S[pt]));
    lmax = std::max(lmax, std::sqrt(dot3(q.V, q.V)) + q.c);
  }
  for (int l = 0; l < 3; ++l) {
    if (!ops.active(l)) continue;
    for (int pt = 0; pt < np; ++pt) flux[pt] = dot3(Vec3{e.a(pt, l)[0], e.a(pt, l)[1], e.a(pt, l)[2]}, FS[pt]);
    ops.apply_derivative_acc(l, flux.data(), div.data(), 1, 1.0);
  }
  const double norm = h / std::max(smax * lmax, 1e-30);
  double rmax = 0.0;
  for (int pt = 0; pt < np; ++pt) {
    double wr = 0.0;
    for (int c = 0; c < 5; ++c) wr += ws[pt * 5 + c] * rhsInv[pt * 5 + c];
    rmax = std::max(rmax, std::abs(wr + div[pt] / e.J[pt]) * norm);
  }
  return sensor_from_residual(rmax, mesh.p, delta);
}

double pair_jump(const State& a, const State& b, const Vec3& n, const GasModel& gas) {
  const Primitive qa = primitive(a, gas), qb = primitive(b, gas);
  const double nn = std::sqrt(dot3(n, n));
  if (nn == 0.0) return 0.0;
  const Vec3 dv{qb.V[0] - qa.V[0], qb.V[1] - qa.V[1], qb.V[2] - qa.V[2]};
  const double rho = 0.5 * (qa.rho + qb.rho);
  const double c = 0.5 * (qa.c + qb.c);
  return rho * std::abs(dot3(dv, n)) / nn + std::abs(qb.p - qa.p) / c;
}

double element_mu_max(const Mesh& mesh, const Element& e, const double* U,
                      const std::array<const double*, kFaces>& traces, const GasModel& gas, double C_av) {
  const TensorOps& ops = mesh.ops;
  double jmax = 0.0;
  for (int d = 0; d < 3; ++d) {
    if (!ops.active(d)) continue;
    const int stride = d == 0 ? 1 : (d == 1 ? ops.n[0] : ops.n[0] * ops.n[1]);
    for (int pt = 0; pt < ops.npts; ++pt) {
      const int i = (pt / stride) % ops.n[d];
      if (i + 1 >= ops.n[d]) continue;
      const int nb = pt + stride;
      const Vec3 n{e.x[nb * 3] - e.x[pt * 3], e.x[nb * 3 + 1] - e.x[pt * 3 + 1], e.x[nb * 3 + 2] - e.x[pt * 3 + 2]};
      jmax = std::max(jmax, pair_jump(State::from(U + 5 * pt), State::from(U + 5 * nb), n, gas));
    }
    for (int side = 0; side < 2; ++side) {
      const int f = 2 * d + side;
      if (!traces[f]) continue;
      for (int q = 0; q < mesh.face_points(d); ++q) {
        const int pt = mesh.face_node(f, q);
        const double* a = e.a(pt, d);
        jmax = std::max(jmax, pair_jump(State::from(U + 5 * pt), State::from(traces[f] + 5 * q),
                                        Vec3{a[0], a[1], a[2]}, gas));
      }
    }
  }
  return C_av * element_scale(mesh, e) * jmax;
}

std::vector<double> vertex_max(const Mesh& mesh, const std::vector<double>& elementValue) {
  std::vector<double> v(mesh.vertexIncidence.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (long k : mesh.vertexIncidence[i]) v[i] = std::max(v[i], elementValue[k]);
  return v;
}

std::vector<double> interpolate_vertices(const Mesh& mesh, const std::vector<double>& vertexValue) {
  const int np = mesh.npts();
  std::vector<double> out(np * mesh.elements.size());
  for (const auto& e : mesh.elements) {
    std::array<double, 8> v;
    for (int a = 0; a < 8; ++a) v[a] = vertexValue[e.vertexIds[a]];
    trilinear_to_nodes(v, mesh.ops, out.data() + e.id * np);
  }
  return out;
}

std::vector<std::uint8_t> vertex_chi(const Mesh& mesh, const std::vector<std::uint8_t>& limited) {
  std::vector<std::uint8_t> chi(mesh.vertexIncidence.size(), 0);
  for (std::size_t i = 0; i < chi.size(); ++i)
    for (long k : mesh.vertexIncidence[i])
      if (limited[k]) chi[i] = 1;
  return chi;
}

void smooth_and_split(const Mesh& mesh, AvFields& av) {
  const std::size_t ne = mesh.elements.size();
  std::vector<double> elem(ne);
  for (std::size_t k = 0; k < ne; ++k) elem[k] = av.Sn[k] * av.muMax[k];
  av.muVertex = vertex_max(mesh, elem);
  av.mu = interpolate_vertices(mesh, av.muVertex);
  if (av.limited.size() != ne) av.limited.assign(ne, 0);
  av.chiVertex = vertex_chi(mesh, av.limited);
  std::vector<double> vp(av.muVertex.size());
  for (std::size_t i = 0; i < vp.size(); ++i) vp[i] = av.chiVertex[i] ? 0.0 : av.muVertex[i];
  av.muP = interpolate_vertices(mesh, vp);
}

void mu_bar_line(int N, const double* mu, const double* muP, int stride, double* out) {
  auto lo = [&](int i) { return mu[i * stride] - muP[i * stride]; };
  out[0] = lo(0);
  out[N] = lo(N - 1);
  for (int i = 1; i < N; ++i) out[i] = 0.5 * (lo(i - 1) + lo(i));
}

double sigma_bar(bool chiBoundary, double sigmaMin, double muBar, double rhoL, double rhoR, double c_rho) {
  return std::max(chiBoundary ? sigmaMin : 0.0, c_rho * muBar / std::sqrt(rhoL * rhoR));
}

double sigma_min(const State& L, const State& R, const Vec3& a, double Jbar, double delta, const GasModel& gas) {
  const double an = std::sqrt(dot3(a, a));
  const Primitive qL = primitive(L, gas), qR = primitive(R, gas);
  const double lam = std::max(std::abs(dot3(qL.V, a)) / an + qL.c, std::abs(dot3(qR.V, a)) / an + qR.c);
  return 0.5 * lam * Jbar * delta / an;
}

}  // namespace ppes
