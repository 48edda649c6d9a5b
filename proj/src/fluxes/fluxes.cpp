#include "ppes/fluxes.hpp"

#include <algorithm>
#include <cmath>

namespace ppes {

Vec5 euler_flux(const State& U, int m, const GasModel& gas) {
  require(m >= 0 && m < 3, "euler_flux: direction out of range");
  Vec3 n{0.0, 0.0, 0.0};
  n[m] = 1.0;
  return euler_flux_n(U, n, gas);
}

Vec5 euler_flux_n(const State& U, const Vec3& n, const GasModel& gas) {
  const Primitive q = primitive(U, gas);
  const double vn = dot3(q.V, n);
  const double mf = q.rho * vn;
  return {mf, mf * q.V[0] + q.p * n[0], mf * q.V[1] + q.p * n[1], mf * q.V[2] + q.p * n[2], mf * q.H};
}

double log_mean(double a, double b) {
  if (b > a) std::swap(a, b);  // bitwise symmetric in its arguments
  const double d = a - b;
  const double s = a + b;
  if (std::abs(d) < 1e-4 * b) {
    const double f = d / s;
    const double u = f * f;
    return 0.5 * s / (1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0))));
  }
  return d / std::log1p(d / b);
}

FluxPoint FluxPoint::from(const State& U, const GasModel& gas, long element, long point) {
  const Primitive q = primitive(U, gas, element, point);
  FluxPoint f;
  f.rho = q.rho;
  f.p = q.p;
  f.beta = 0.5 * q.rho / q.p;
  f.V = q.V;
  f.v2 = dot3(q.V, q.V);
  return f;
}

Vec5 ec_flux_n(const FluxPoint& a, const FluxPoint& b, const Vec3& n, const GasModel& gas) {
  const double rho_ln = log_mean(a.rho, b.rho);
  const double beta_ln = log_mean(a.beta, b.beta);
  const Vec3 V{0.5 * (a.V[0] + b.V[0]), 0.5 * (a.V[1] + b.V[1]), 0.5 * (a.V[2] + b.V[2])};
  const double p_tilde = 0.5 * (a.rho + b.rho) / (a.beta + b.beta);
  const double v2_avg = 0.5 * (a.v2 + b.v2);
  const double fr = rho_ln * dot3(V, n);
  Vec5 f;
  f[0] = fr;
  f[1] = p_tilde * n[0] + V[0] * fr;
  f[2] = p_tilde * n[1] + V[1] * fr;
  f[3] = p_tilde * n[2] + V[2] * fr;
  f[4] = (0.5 / ((gas.gamma - 1.0) * beta_ln) - 0.5 * v2_avg) * fr + V[0] * f[1] + V[1] * f[2] +
         V[2] * f[3];
  return f;
}

Vec5 ec_flux_n(const State& U1, const State& U2, const Vec3& n, const GasModel& gas) {
  return ec_flux_n(FluxPoint::from(U1, gas), FluxPoint::from(U2, gas), n, gas);
}

Vec5 ec_flux(const State& U1, const State& U2, const GasModel& gas, int m) {
  require(m >= 0 && m < 3, "ec_flux: direction out of range");
  Vec3 n{0.0, 0.0, 0.0};
  n[m] = 1.0;
  return ec_flux_n(U1, U2, n, gas);
}

Vec5 roe_matrix_dissipation(const State& UL, const State& UR, const Vec3& n, const GasModel& gas) {
  const double nn = std::sqrt(dot3(n, n));
  require(nn > 0.0, "merriam_roe_flux: zero metric vector");
  const Vec3 nh{n[0] / nn, n[1] / nn, n[2] / nn};
  const EntropyVars eL = entropy_vars(UL, gas);
  const EntropyVars eR = entropy_vars(UR, gas);
  Vec5 dw;
  for (int k = 0; k < 5; ++k) dw[k] = eR.w[k] - eL.w[k];

  const Primitive qL = primitive(UL, gas), qR = primitive(UR, gas);
  const double g = gas.gamma;
  const double rho = 0.5 * (qL.rho + qR.rho);
  const double p = 0.5 * (qL.p + qR.p);
  const Vec3 V{0.5 * (qL.V[0] + qR.V[0]), 0.5 * (qL.V[1] + qR.V[1]), 0.5 * (qL.V[2] + qR.V[2])};
  const double v2 = dot3(V, V);
  const double c = std::sqrt(g * p / rho);
  const double H = c * c / (g - 1.0) + 0.5 * v2;
  const double vn = dot3(V, nh);

  constexpr double floor = 1e-12;
  const double l1 = std::max(std::abs(vn - c), floor);
  const double l2 = std::max(std::abs(vn), floor);
  const double l5 = std::max(std::abs(vn + c), floor);

  // right eigenvectors; acoustic and entropy waves scaled so R R^T = dU/dw
  const double sa = rho / (2.0 * g * gas.R);
  const double se = (g - 1.0) * rho / (g * gas.R);
  const double st = p / gas.R;
  const Vec5 r1{1.0, V[0] - c * nh[0], V[1] - c * nh[1], V[2] - c * nh[2], H - vn * c};
  const Vec5 r2{1.0, V[0], V[1], V[2], 0.5 * v2};
  const Vec5 r5{1.0, V[0] + c * nh[0], V[1] + c * nh[1], V[2] + c * nh[2], H + vn * c};
  auto proj = [&](const Vec5& r) {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += r[k] * dw[k];
    return s;
  };
  const double a1 = l1 * sa * proj(r1);
  const double a2 = l2 * se * proj(r2);
  const double a5 = l5 * sa * proj(r5);
  // shear waves: projector onto the tangent plane, independent of tangent basis
  Vec3 dv{dw[1], dw[2], dw[3]};
  const double dvn = dot3(dv, nh);
  Vec3 dvt{dv[0] - dvn * nh[0], dv[1] - dvn * nh[1], dv[2] - dvn * nh[2]};
  const double vnn = dot3(V, nh);
  Vec3 Vt{V[0] - vnn * nh[0], V[1] - vnn * nh[1], V[2] - vnn * nh[2]};
  // tangent block acts on (dv_t + V_t dw5)
  Vec3 tv{dvt[0] + Vt[0] * dw[4], dvt[1] + Vt[1] * dw[4], dvt[2] + Vt[2] * dw[4]};
  const double at = l2 * st;

  Vec5 d;
  for (int k = 0; k < 5; ++k) d[k] = a1 * r1[k] + a2 * r2[k] + a5 * r5[k];
  d[1] += at * tv[0];
  d[2] += at * tv[1];
  d[3] += at * tv[2];
  d[4] += at * dot3(Vt, tv);
  for (int k = 0; k < 5; ++k) d[k] *= 0.5 * nn;
  return d;
}

Vec5 rusanov_dissipation(const State& UL, const State& UR, const Vec3& n, const GasModel& gas) {
  const Primitive qL = primitive(UL, gas), qR = primitive(UR, gas);
  const double nn = std::sqrt(dot3(n, n));
  const double lam = std::max(std::abs(dot3(qL.V, n)) + qL.c * nn, std::abs(dot3(qR.V, n)) + qR.c * nn);
  const Vec5 a = UL.vec(), b = UR.vec();
  Vec5 d;
  for (int k = 0; k < 5; ++k) d[k] = 0.5 * lam * (b[k] - a[k]);
  return d;
}

Vec5 mr_dissipation(const State& UL, const State& UR, const Vec3& n, const GasModel& gas) {
  const double phi = strong_jump_weight(UL, UR, gas);
  if (phi == 0.0) return roe_matrix_dissipation(UL, UR, n, gas);
  const Vec5 r = rusanov_dissipation(UL, UR, n, gas);
  if (phi == 1.0) return r;
  const Vec5 m = roe_matrix_dissipation(UL, UR, n, gas);
  Vec5 d;
  for (int k = 0; k < 5; ++k) d[k] = (1.0 - phi) * m[k] + phi * r[k];
  return d;
}

Vec5 merriam_roe_flux(const State& UL, const State& UR, const GasModel& gas, const Vec3& n) {
  Vec5 f = ec_flux_n(UL, UR, n, gas);
  const Vec5 d = mr_dissipation(UL, UR, n, gas);
  for (int k = 0; k < 5; ++k) f[k] -= d[k];
  return f;
}

std::vector<Vec3> flux_point_metrics(const OperatorSet& ops, std::span<const Vec3> metric) {
  const int N = ops.N;
  require(static_cast<int>(metric.size()) == N, "flux_point_metrics: metric length must be N");
  std::vector<Vec3> out(N + 1, Vec3{0.0, 0.0, 0.0});
  out[0] = metric[0];
  out[N] = metric[N - 1];
  // recursion over interior flux points i (between nodes i-1 and i)
  Vec3 acc{0.0, 0.0, 0.0};
  for (int i = 1; i < N; ++i) {
    const int r = i - 1;  // node entering the left set
    for (int l = 0; l < r; ++l)
      for (int c = 0; c < 3; ++c) acc[c] -= ops.q(l, r) * (metric[l][c] + metric[r][c]);
    for (int j = r + 1; j < N; ++j)
      for (int c = 0; c < 3; ++c) acc[c] += ops.q(r, j) * (metric[r][c] + metric[j][c]);
    out[i] = acc;
  }
  return out;
}

std::vector<Vec5> telescoped_volume_flux(const OperatorSet& ops, std::span<const State> line,
                                         std::span<const Vec3> metric, const GasModel& gas) {
  const int N = ops.N;
  require(static_cast<int>(line.size()) == N && static_cast<int>(metric.size()) == N,
          "telescoped_volume_flux: line length must be N");
  std::vector<FluxPoint> fp(N);
  for (int i = 0; i < N; ++i) fp[i] = FluxPoint::from(line[i], gas, -1, i);
  // two-point fluxes F(l,j) for l < j, contracted with the averaged metric
  std::vector<Vec5> F(N * N);
  for (int l = 0; l < N; ++l)
    for (int j = l + 1; j < N; ++j) {
      const Vec3 a{0.5 * (metric[l][0] + metric[j][0]), 0.5 * (metric[l][1] + metric[j][1]),
                   0.5 * (metric[l][2] + metric[j][2])};
      F[l * N + j] = ec_flux_n(fp[l], fp[j], a, gas);
    }
  std::vector<Vec5> out(N + 1, Vec5{});
  out[0] = euler_flux_n(line[0], metric[0], gas);
  out[N] = euler_flux_n(line[N - 1], metric[N - 1], gas);
  Vec5 acc{};
  for (int i = 1; i < N; ++i) {
    const int r = i - 1;
    for (int l = 0; l < r; ++l)
      for (int c = 0; c < 5; ++c) acc[c] -= 2.0 * ops.q(l, r) * F[l * N + r][c];
    for (int j = r + 1; j < N; ++j)
      for (int c = 0; c < 5; ++c) acc[c] += 2.0 * ops.q(r, j) * F[r * N + j][c];
    out[i] = acc;
  }
  return out;
}

}  // namespace ppes
