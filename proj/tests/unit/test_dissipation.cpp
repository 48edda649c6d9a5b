#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "ppes/dissipation.hpp"

using namespace ppes;

namespace {

GasModel viscous_gas() {
  GasModel gas;
  gas.Re = 100.0;
  gas.Pr = 0.72;
  return gas;
}

Eigen::Matrix<double, 15, 15> tensor_matrix(const std::array<double, 225>& t) {
  Eigen::Matrix<double, 15, 15> M;
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) M(i, j) = t[i * 15 + j];
  return M;
}

}  // namespace

TEST_SUITE("dissipation") {

TEST_CASE("viscous and Brenner tensors are symmetric positive semi-definite") {
  const GasModel gas = viscous_gas();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Primitive q = primitive(oracle::random_state(rng, gas), gas);
    for (int kind = 0; kind < 2; ++kind) {
      const ViscousCoeffs c = kind == 0 ? physical_coeffs(q, gas) : brenner_coeffs(q, u(rng), gas);
      const auto M = tensor_matrix(viscous_tensor(q, c));
      const double scale = M.cwiseAbs().maxCoeff();
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 15, 15>> es(0.5 * (M + M.transpose()));
      CHECK(es.eigenvalues().minCoeff() >= -1e-12 * scale);
    }
  }
  const Primitive q = primitive(from_primitive(1.0, {0, 0, 0}, 1.0, gas), gas);
  CHECK_THROWS_AS(brenner_coeffs(q, -1.0, gas), ContractViolation);
}

TEST_CASE("zero gradient gives zero flux") {
  const GasModel gas = viscous_gas();
  const Primitive q = primitive(from_primitive(1.0, {0.3, 0.1, 0}, 1.0, gas), gas);
  const Grad f = viscous_flux(q, Grad{}, physical_coeffs(q, gas));
  for (const Vec5& v : f)
    for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("uniform shear: tau_12 = mu dV1/dx2") {
  const GasModel gas = viscous_gas();
  const double shear = 0.7, T0 = 1.3, rho0 = 1.1;
  // V1 = shear * y at uniform rho and T; Theta_2 by central differences of w
  auto w_at = [&](double y) { return entropy_vars(from_primitive(rho0, {shear * y, 0, 0}, rho0 * gas.R * T0, gas), gas).w; };
  const double y0 = 0.4, h = 1e-5;
  const Vec5 wp = w_at(y0 + h), wm = w_at(y0 - h);
  Grad theta{};
  for (int c = 0; c < 5; ++c) theta[1][c] = (wp[c] - wm[c]) / (2.0 * h);
  const Primitive q = primitive(from_primitive(rho0, {shear * y0, 0, 0}, rho0 * gas.R * T0, gas), gas);
  const ViscousCoeffs c = physical_coeffs(q, gas);
  const Grad f = viscous_flux(q, theta, c);
  CHECK(f[1][1] == doctest::Approx(c.mu * shear).epsilon(1e-8));
  CHECK(f[0][2] == doctest::Approx(c.mu * shear).epsilon(1e-8));
  CHECK(f[1][4] == doctest::Approx(c.mu * shear * q.V[0]).epsilon(1e-8));
  CHECK(std::abs(f[0][1]) < 1e-9);
  CHECK(std::abs(f[1][0]) < 1e-12);
}

TEST_CASE("heat flux: kappa dT/dx") {
  const GasModel gas = viscous_gas();
  auto w_at = [&](double x) { return entropy_vars(from_primitive(1.0, {0, 0, 0}, gas.R * (1.0 + 0.5 * x), gas), gas).w; };
  const double h = 1e-5;
  Grad theta{};
  const Vec5 wp = w_at(h), wm = w_at(-h);
  for (int c = 0; c < 5; ++c) theta[0][c] = (wp[c] - wm[c]) / (2.0 * h);
  const Primitive q = primitive(from_primitive(1.0, {0, 0, 0}, gas.R, gas), gas);
  const ViscousCoeffs c = physical_coeffs(q, gas);
  const Grad f = viscous_flux(q, theta, c);
  CHECK(f[0][4] == doctest::Approx(c.kappa * 0.5).epsilon(1e-8));
}

TEST_CASE("LDG gradient matches the hand-written two-element p = 2 case") {
  BoxSpec b;
  b.K = {2, 1, 1};
  b.periodic = {true, true, true};
  b.collapsed = {false, true, true};
  const Mesh m = build_box_mesh(b, 2);
  REQUIRE(m.npts() == 3);
  const double h = 0.5;
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(2 * 3 * 5);
  for (double& v : w) v = u(rng);
  for (int e = 0; e < 2; ++e) {
    const int o = 1 - e;
    const double* lo = &w[(o * 3 + 2) * 5];
    const double* hi = &w[(o * 3 + 0) * 5];
    const double* self = &w[e * 15];
    std::array<const double*, kFaces> traces{lo, hi, self, self, self, self};
    std::vector<double> theta(3 * 15);
    ldg_gradient(m, m.elements[e], self, traces, theta.data());
    for (int c = 0; c < 5; ++c) {
      const auto ref = oracle::ldg_p2({self[c], self[5 + c], self[10 + c]}, lo[c], hi[c], h);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(theta[i * 15 + c] - ref[i]) <= 1e-13 * std::max(1.0, std::abs(ref[i])));
        CHECK(theta[i * 15 + 5 + c] == 0.0);
      }
    }
  }
  std::array<const double*, kFaces> missing{};
  std::vector<double> theta(45);
  CHECK_THROWS_AS(ldg_gradient(m, m.elements[0], w.data(), missing, theta.data()), ContractViolation);
}

TEST_CASE("LDG gradient is exact for a continuous linear field") {
  BoxSpec b;
  b.K = {3, 2, 1};
  b.periodic = {false, false, true};
  b.collapsed = {false, false, true};
  const Mesh m = build_box_mesh(b, 3);
  const int np = m.npts();
  auto wf = [](const double* x, int c) { return 0.5 + c - 2.0 * x[0] + 0.25 * c * x[1]; };
  for (const Element& e : m.elements) {
    std::vector<double> w(np * 5);
    for (int pt = 0; pt < np; ++pt)
      for (int c = 0; c < 5; ++c) w[pt * 5 + c] = wf(&e.x[pt * 3], c);
    // traces equal to the own face values: continuous field
    std::array<std::vector<double>, kFaces> tr;
    std::array<const double*, kFaces> traces{};
    for (int f = 0; f < kFaces; ++f) {
      const int d = f / 2;
      const int nq = m.face_points(d);
      tr[f].resize(nq * 5);
      for (int q = 0; q < nq; ++q)
        for (int c = 0; c < 5; ++c) tr[f][q * 5 + c] = w[m.face_node(f, q) * 5 + c];
      traces[f] = tr[f].data();
    }
    std::vector<double> theta(np * 15);
    ldg_gradient(m, e, w.data(), traces, theta.data());
    for (int pt = 0; pt < np; ++pt)
      for (int c = 0; c < 5; ++c) {
        CHECK(theta[pt * 15 + c] == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(theta[pt * 15 + 5 + c] == doctest::Approx(0.25 * c).epsilon(1e-12));
      }
  }
}

TEST_CASE("low-order mass diffusion") {
  const State a{1.0, {0.2, 0, 0}, 2.5}, b{1.4, {0.1, 0.3, 0}, 2.9};
  for (double x : low_order_mass_diffusion(a, a, 0.3, 2.0)) CHECK(x == 0.0);
  for (double x : low_order_mass_diffusion(a, b, 0.0, 2.0)) CHECK(x == 0.0);

  // three points with spacing h and unit metrics: the divergence of the two
  // flux-point fluxes is the Laplacian stencil sigma (rhoR - 2 rhoC + rhoL) / h^2
  const double h = 0.1, sigma = 0.05;
  const State L{1.0, {0, 0, 0}, 2.5}, C{1.3, {0, 0, 0}, 2.5}, R{0.8, {0, 0, 0}, 2.5};
  const double coef = 1.0 / (1.0 * h);
  const Vec5 fl = low_order_mass_diffusion(L, C, sigma, coef), fr = low_order_mass_diffusion(C, R, sigma, coef);
  const double drho = (fr[0] - fl[0]) / h;
  CHECK(drho == doctest::Approx(sigma * (R.rho - 2.0 * C.rho + L.rho) / (h * h)).epsilon(1e-14));
}

TEST_CASE("mass diffusion is entropy dissipative and keeps the donor admissible for any jump") {
  const GasModel gas = viscous_gas();
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20000; ++trial) {
    const State L = oracle::random_state(rng, gas, 3.0, 2.0), R = oracle::random_state(rng, gas, 3.0, 2.0);
    const Vec5 f = low_order_mass_diffusion(L, R, 1.0, 1.0);
    const Vec5 wl = entropy_vars(L, gas).w, wr = entropy_vars(R, gas).w;
    double s = 0.0, scale = 0.0;
    for (int c = 0; c < 5; ++c) {
      s += (wr[c] - wl[c]) * f[c];
      scale += std::abs((wr[c] - wl[c]) * f[c]);
    }
    CHECK(s >= -1e-12 * std::max(1.0, scale));
    // removing any fraction of its mass only rescales the donor
    const State& d = L.rho > R.rho ? L : R;
    const double frac = 0.9 * d.rho / std::abs(f[0]);
    const double sign = L.rho > R.rho ? 1.0 : -1.0;
    const State after{d.rho + sign * frac * f[0], {d.m[0] + sign * frac * f[1], d.m[1] + sign * frac * f[2],
                      d.m[2] + sign * frac * f[3]}, d.Et + sign * frac * f[4]};
    CHECK(internal_energy(after) == doctest::Approx(0.1 * internal_energy(d)).epsilon(1e-10));
  }
}

TEST_CASE("low-order AD flux is entropy dissipative for moderate jumps") {
  const GasModel gas = viscous_gas();
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int trial = 0; trial < 2000; ++trial) {
    const State L = oracle::random_state(rng, gas, 0.05, 1.0);
    const State R = oracle::random_state(rng, gas, 0.05, 1.0);
    const Vec3 a{u(rng), u(rng) - 1.0, 0.0};
    const Vec5 f = low_order_viscous_flux(L, R, a, u(rng), u(rng), u(rng), gas);
    const Vec5 wl = entropy_vars(L, gas).w, wr = entropy_vars(R, gas).w;
    double s = 0.0, scale = 0.0;
    for (int c = 0; c < 5; ++c) {
      s += (wr[c] - wl[c]) * f[c];
      scale += std::abs((wr[c] - wl[c]) * f[c]);
    }
    CHECK(s >= -1e-12 * std::max(1.0, scale));
  }
  const State s = from_primitive(1.0, {0.1, 0, 0}, 1.0, gas);
  for (double x : low_order_viscous_flux(s, s, {1, 0, 0}, 1.0, 0.1, 0.5, gas)) CHECK(x == 0.0);
}

}
