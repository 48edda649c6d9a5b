#include "ppes/dissipation.hpp"

#include <algorithm>
#include <vector>

namespace ppes {

ViscousCoeffs physical_coeffs(const Primitive& q, const GasModel& gas) {
  ViscousCoeffs c;
  c.mu = gas.mu(q.T);
  c.kappa = gas.kappa(q.T);
  return c;
}

ViscousCoeffs brenner_coeffs(const Primitive& q, double muAD, const GasModel& gas, const AdConstants& ad) {
  require(muAD >= 0.0, "brenner_coeffs: negative artificial viscosity");
  ViscousCoeffs c;
  c.mu = muAD;
  c.kappa = ad.c_T(gas) * muAD;
  c.sigma = ad.c_rho * muAD / q.rho;
  return c;
}

Grad viscous_flux(const Primitive& q, const Grad& theta, const ViscousCoeffs& c) {
  const double T = q.T;
  double g[3][3];  // g[i][j] = dV_i/dx_j
  double dT[3];
  double drho[3];
  const double E = (q.IE + q.KE) / q.rho;
  for (int j = 0; j < 3; ++j) {
    const Vec5& t = theta[j];
    dT[j] = T * T * t[4];
    for (int i = 0; i < 3; ++i) g[i][j] = T * (t[i + 1] + q.V[i] * t[4]);
  }
  // d rho = (rho/R)(t0 + V.t + E t4); R = p/(rho T)
  const double rhoOverR = q.rho * q.rho * T / q.p;
  for (int j = 0; j < 3; ++j) {
    const Vec5& t = theta[j];
    drho[j] = rhoOverR * (t[0] + q.V[0] * t[1] + q.V[1] * t[2] + q.V[2] * t[3] + E * t[4]);
  }
  const double div = g[0][0] + g[1][1] + g[2][2];
  Grad f;
  for (int m = 0; m < 3; ++m) {
    double tau[3];
    for (int i = 0; i < 3; ++i) tau[i] = c.mu * (g[i][m] + g[m][i] - (i == m ? 2.0 / 3.0 * div : 0.0));
    const double s = c.sigma * drho[m];
    f[m][0] = s;
    f[m][1] = tau[0] + s * q.V[0];
    f[m][2] = tau[1] + s * q.V[1];
    f[m][3] = tau[2] + s * q.V[2];
    f[m][4] = tau[0] * q.V[0] + tau[1] * q.V[1] + tau[2] * q.V[2] + c.kappa * dT[m] + s * E;
  }
  return f;
}

Vec5 contract(const Vec3& a, const Grad& f) {
  Vec5 r;
  for (int c = 0; c < 5; ++c) r[c] = a[0] * f[0][c] + a[1] * f[1][c] + a[2] * f[2][c];
  return r;
}

std::array<double, 225> viscous_tensor(const Primitive& q, const ViscousCoeffs& c) {
  std::array<double, 225> C{};
  for (int j = 0; j < 3; ++j)
    for (int b = 0; b < 5; ++b) {
      Grad theta{};
      theta[j][b] = 1.0;
      const Grad f = viscous_flux(q, theta, c);
      for (int m = 0; m < 3; ++m)
        for (int a = 0; a < 5; ++a) C[(m * 5 + a) * 15 + j * 5 + b] = f[m][a];
    }
  return C;
}

void ldg_gradient(const Mesh& mesh, const Element& e, const double* w,
                  const std::array<const double*, kFaces>& traces, double* theta) {
  const TensorOps& ops = mesh.ops;
  const int np = ops.npts;
  std::fill(theta, theta + np * 15, 0.0);
  std::vector<double> dw(np * 5);
  for (int l = 0; l < 3; ++l) {
    if (!ops.active(l)) continue;
    const double* lo = traces[2 * l];
    const double* hi = traces[2 * l + 1];
    if (!lo || !hi) throw ContractViolation("ldg_gradient: missing neighbour trace");
    std::fill(dw.begin(), dw.end(), 0.0);
    ops.apply_derivative_acc(l, w, dw.data(), 5, 1.0);
    const OperatorSet& o = *ops.op[l];
    const int N = o.N;
    const int nq = mesh.face_points(l);
    for (int q = 0; q < nq; ++q) {
      const int p0 = mesh.face_node(2 * l, q);
      const int p1 = mesh.face_node(2 * l + 1, q);
      for (int c = 0; c < 5; ++c) {
        dw[p0 * 5 + c] += o.Pinv[0] * 0.5 * (w[p0 * 5 + c] - lo[q * 5 + c]);
        dw[p1 * 5 + c] += o.Pinv[N - 1] * 0.5 * (hi[q * 5 + c] - w[p1 * 5 + c]);
      }
    }
    for (int pt = 0; pt < np; ++pt) {
      const double* a = e.a(pt, l);
      const double invJ = 1.0 / e.J[pt];
      for (int j = 0; j < 3; ++j) {
        const double s = a[j] * invJ;
        for (int c = 0; c < 5; ++c) theta[pt * 15 + 5 * j + c] += s * dw[pt * 5 + c];
      }
    }
  }
}

namespace {

Primitive mean_primitive(const State& L, const State& R, const GasModel& gas) {
  State m;
  m.rho = 0.5 * (L.rho + R.rho);
  for (int k = 0; k < 3; ++k) m.m[k] = 0.5 * (L.m[k] + R.m[k]);
  m.Et = 0.5 * (L.Et + R.Et);
  return primitive(m, gas);
}

}  // namespace

Vec5 low_order_viscous_flux(const State& L, const State& R, const Vec3& a, double Jbar, double delta,
                            double muAD, const GasModel& gas, const AdConstants& ad) {
  if (muAD == 0.0) return Vec5{};
  const double s = 1.0 / (Jbar * delta);
  const double phi = strong_jump_weight(L, R, gas);
  Vec5 jump{};
  if (phi > 0.0) {
    // scalar diffusion of U: a convex-combination update under the diffusive step bound
    const double nu = muAD * std::max(4.0 / 3.0, gas.gamma / gas.Pr) / std::min(L.rho, R.rho);
    const Vec5 a0 = L.vec(), a1 = R.vec();
    for (int k = 0; k < 5; ++k) jump[k] = phi * nu * s * dot3(a, a) * (a1[k] - a0[k]);
    if (phi == 1.0) return jump;
  }
  const Primitive q = mean_primitive(L, R, gas);
  ViscousCoeffs c = brenner_coeffs(q, muAD, gas, ad);
  c.sigma = 0.0;  // mass diffusion is carried by the density-jump term
  const Vec5 wl = entropy_vars(L, gas).w;
  const Vec5 wr = entropy_vars(R, gas).w;
  Grad theta;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 5; ++k) theta[j][k] = s * a[j] * (wr[k] - wl[k]);
  Vec5 f = contract(a, viscous_flux(q, theta, c));
  for (int k = 0; k < 5; ++k) f[k] = (1.0 - phi) * f[k] + jump[k];
  return f;
}

Vec5 low_order_mass_diffusion(const State& L, const State& R, double sigma, double coef) {
  const double d = sigma * coef * (R.rho - L.rho);
  if (d == 0.0) return Vec5{};
  // mass leaves the denser side carrying that side's specific momentum and energy,
  // so the donor is only rescaled and the receiver gains internal energy
  const State& s = d > 0.0 ? R : L;
  const double r = d / s.rho;
  return {d, r * s.m[0], r * s.m[1], r * s.m[2], r * s.Et};
}

}  // namespace ppes
