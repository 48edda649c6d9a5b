#include "ppes/sbp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ppes/common.hpp"
#include "ppes/kernels.hpp"

namespace ppes {

void legendre(int n, double x, double& L, double& dL) {
  double l0 = 1.0, l1 = x;
  if (n == 0) {
    L = 1.0;
    dL = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double l2 = ((2.0 * k - 1.0) * x * l1 - (k - 1.0) * l0) / k;
    l0 = l1;
    l1 = l2;
  }
  L = l1;
  // derivative from the three-term identity; endpoints use the closed form
  if (std::abs(std::abs(x) - 1.0) < 1e-300) {
    dL = (x > 0 ? 1.0 : (n % 2 ? 1.0 : -1.0)) * 0.5 * n * (n + 1.0);
  } else {
    dL = n * (x * l1 - l0) / (x * x - 1.0);
  }
}

namespace {

void finish(OperatorSet& s) {
  const int N = s.N;
  s.Pinv.resize(N);
  for (int i = 0; i < N; ++i) s.Pinv[i] = 1.0 / s.P[i];
  s.B.assign(N * N, 0.0);
  s.B[0] -= 1.0;
  s.B[N * N - 1] += 1.0;
  s.Delta.assign(N * (N + 1), 0.0);
  for (int i = 0; i < N; ++i) {
    s.Delta[i * (N + 1) + i] = -1.0;
    s.Delta[i * (N + 1) + i + 1] = 1.0;
  }
  s.fluxNodes.resize(N + 1);
  s.fluxNodes[0] = -1.0;
  for (int i = 1; i < N; ++i) s.fluxNodes[i] = s.fluxNodes[i - 1] + s.P[i - 1];
  s.fluxNodes[N] = 1.0;
}

}  // namespace

OperatorSet build_lgl(int p) {
  if (p < 1 || p > kMaxOrder) throw ConfigError("polynomial order must satisfy 1 <= p <= 12");
  OperatorSet s;
  s.p = p;
  s.N = p + 1;
  const int N = s.N;
  s.nodes.resize(N);
  // Newton on (1 - x^2) L'_p from Chebyshev-Gauss-Lobatto guesses. The update
  // x <- x - (x L_p - L_{p-1}) / (N L_p) is that Newton step written with the
  // Legendre recurrence.
  for (int j = 0; j < N; ++j) {
    double x = -std::cos(std::numbers::pi * j / p);
    if (j == 0 || j == p) {
      s.nodes[j] = x;
      continue;
    }
    for (int it = 0; it < 100; ++it) {
      double Lp, dLp, Lm, dLm;
      legendre(p, x, Lp, dLp);
      legendre(p - 1, x, Lm, dLm);
      const double dx = (x * Lp - Lm) / (N * Lp);
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    s.nodes[j] = x;
  }
  // enforce exact symmetry
  for (int j = 0; j < N / 2; ++j) {
    const double a = 0.5 * (s.nodes[N - 1 - j] - s.nodes[j]);
    s.nodes[j] = -a;
    s.nodes[N - 1 - j] = a;
  }
  if (N % 2) s.nodes[N / 2] = 0.0;

  s.P.resize(N);
  for (int j = 0; j < N; ++j) {
    double L, dL;
    legendre(p, s.nodes[j], L, dL);
    s.P[j] = 2.0 / (p * (p + 1.0) * L * L);
  }

  // Lagrange differentiation matrix via barycentric weights.
  std::vector<double> lam(N, 1.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) lam[i] /= (s.nodes[i] - s.nodes[j]);
  s.D.assign(N * N, 0.0);
  for (int i = 0; i < N; ++i) {
    double diag = 0.0;
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const double v = (lam[j] / lam[i]) / (s.nodes[i] - s.nodes[j]);
      s.D[i * N + j] = v;
      diag -= v;
    }
    s.D[i * N + i] = diag;
  }
  s.Q.resize(N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s.Q[i * N + j] = s.P[i] * s.D[i * N + j];
  finish(s);
  return s;
}

OperatorSet collapsed_operator() {
  OperatorSet s;
  s.p = 0;
  s.N = 1;
  s.nodes = {0.0};
  s.P = {2.0};
  s.D = {0.0};
  s.Q = {0.0};
  finish(s);
  s.B = {0.0};
  return s;
}

const OperatorSet& operators(int p) {
  static const std::vector<OperatorSet> registry = [] {
    std::vector<OperatorSet> r;
    r.push_back(collapsed_operator());
    for (int q = 1; q <= kMaxOrder; ++q) r.push_back(build_lgl(q));
    return r;
  }();
  if (p < 0 || p > kMaxOrder) throw ConfigError("polynomial order must satisfy 1 <= p <= 12");
  return registry[p];
}

std::vector<double> telescope(const OperatorSet& ops, std::span<const double> fbar) {
  require(static_cast<int>(fbar.size()) == ops.N + 1, "telescope: fbar must have N+1 entries");
  std::vector<double> out(ops.N);
  for (int i = 0; i < ops.N; ++i) out[i] = (fbar[i + 1] - fbar[i]) * ops.Pinv[i];
  return out;
}

TensorOps::TensorOps(const OperatorSet& a, const OperatorSet& b, const OperatorSet& c) {
  op = {&a, &b, &c};
  n = {a.N, b.N, c.N};
  npts = n[0] * n[1] * n[2];
  weights.resize(npts);
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) weights[index(i, j, k)] = a.P[i] * b.P[j] * c.P[k];
}

void TensorOps::extents(int dir, int ncomp, int& outer, int& inner) const {
  inner = ncomp;
  for (int d = 0; d < dir; ++d) inner *= n[d];
  outer = 1;
  for (int d = dir + 1; d < 3; ++d) outer *= n[d];
}

void TensorOps::apply_derivative(int dir, std::span<const double> in, std::span<double> out,
                                 int ncomp) const {
  require(dir >= 0 && dir < 3, "apply_derivative: direction out of range");
  require(in.size() == static_cast<std::size_t>(npts * ncomp) && out.size() == in.size(),
          "apply_derivative: field shape mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  apply_derivative_acc(dir, in.data(), out.data(), ncomp, 1.0);
}

void TensorOps::apply_derivative_acc(int dir, const double* in, double* out, int ncomp,
                                     double scale) const {
  int outer, inner;
  extents(dir, ncomp, outer, inner);
  const OperatorSet& o = *op[dir];
  kernels::active().dir_matmul(o.D.data(), o.N, o.N, in, out, outer, inner, scale);
}

void TensorOps::telescope_acc(int dir, const double* fbar, double* out, int ncomp, double scale) const {
  int outer, inner;
  extents(dir, ncomp, outer, inner);
  const OperatorSet& o = *op[dir];
  kernels::active().dir_telescope(o.Pinv.data(), o.N, fbar, out, outer, inner, scale);
}

double TensorOps::integrate(std::span<const double> f) const {
  require(f.size() == static_cast<std::size_t>(npts), "integrate: field shape mismatch");
  double s = 0.0;
  for (int i = 0; i < npts; ++i) s += weights[i] * f[i];
  return s;
}

}  // namespace ppes
