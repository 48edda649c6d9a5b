#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "ppes/fluxes.hpp"

using namespace ppes;

namespace {

double tadmor_residual(const State& a, const State& b, const Vec3& n, const GasModel& gas) {
  const EntropyVars ea = entropy_vars(a, gas), eb = entropy_vars(b, gas);
  const Vec5 f = ec_flux_n(a, b, n, gas);
  double lhs = 0.0;
  for (int c = 0; c < 5; ++c) lhs += (ea.w[c] - eb.w[c]) * f[c];
  const double psiA = dot3(ea.psi, n), psiB = dot3(eb.psi, n);
  return std::abs(lhs - (psiA - psiB)) / std::max({1.0, std::abs(psiA), std::abs(psiB)});
}

Vec3 random_normal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_SUITE("fluxes") {

TEST_CASE("euler flux example") {
  GasModel gas;
  // rho = 1, V = (2, 0, 0), p = 1: F_x = (2, 5, 0, 0, 2 H)
  const State U = from_primitive(1.0, {2.0, 0.0, 0.0}, 1.0, gas);
  const Vec5 f = euler_flux(U, 0, gas);
  const double H = (U.Et + 1.0) / 1.0;
  CHECK(f[0] == doctest::Approx(2.0));
  CHECK(f[1] == doctest::Approx(5.0));
  CHECK(f[2] == 0.0);
  CHECK(f[3] == 0.0);
  CHECK(f[4] == doctest::Approx(2.0 * H));
}

TEST_CASE("log mean near equal arguments") {
  CHECK(log_mean(2.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  const double a = 1.0, b = 1.0 + 1e-6;
  CHECK(log_mean(a, b) == doctest::Approx((b - a) / std::log1p(b - a)).epsilon(1e-13));
  CHECK(log_mean(a, b) == log_mean(b, a));
  CHECK(log_mean(1.0, 3.0) == doctest::Approx(2.0 / std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("EC flux: consistency, symmetry and the Tadmor condition") {
  GasModel gas;
  std::mt19937_64 rng(21);
  double worst = 0.0;
  for (int trial = 0; trial < 20000; ++trial) {
    const State a = oracle::random_state(rng, gas), b = oracle::random_state(rng, gas);
    const Vec3 n = random_normal(rng);
    worst = std::max(worst, tadmor_residual(a, b, n, gas));
    const Vec5 f1 = ec_flux_n(a, b, n, gas), f2 = ec_flux_n(b, a, n, gas);
    for (int c = 0; c < 5; ++c) CHECK(f1[c] == f2[c]);
  }
  CHECK(worst <= 5e-13);

  const State U = oracle::random_state(rng, gas);
  for (int m = 0; m < 3; ++m) {
    const Vec5 f = ec_flux(U, U, gas, m), e = euler_flux(U, m, gas);
    for (int c = 0; c < 5; ++c) CHECK(std::abs(f[c] - e[c]) <= 1e-13 * std::max(1.0, std::abs(e[c])));
  }
}

TEST_CASE("Merriam-Roe flux: consistency and entropy dissipation") {
  GasModel gas;
  std::mt19937_64 rng(23);
  const State U = oracle::random_state(rng, gas);
  const Vec3 n{0.3, -0.2, 0.9};
  const Vec5 f = merriam_roe_flux(U, U, gas, n), e = euler_flux_n(U, n, gas);
  for (int c = 0; c < 5; ++c) CHECK(std::abs(f[c] - e[c]) <= 1e-13 * std::max(1.0, std::abs(e[c])));

  for (int trial = 0; trial < 20000; ++trial) {
    const State a = oracle::random_state(rng, gas, trial % 2 ? 0.2 : 3.0), b = oracle::random_state(rng, gas, 1.0);
    const Vec3 nn = random_normal(rng);
    const Vec5 d = mr_dissipation(a, b, nn, gas);
    const Vec5 wa = entropy_vars(a, gas).w, wb = entropy_vars(b, gas).w;
    double s = 0.0, scale = 0.0;
    for (int c = 0; c < 5; ++c) {
      s += (wb[c] - wa[c]) * d[c];
      scale += std::abs((wb[c] - wa[c]) * d[c]);
    }
    CHECK(s >= -1e-14 * std::max(1.0, scale));
  }
}

TEST_CASE("Roe matrix dissipation matches 0.5 |A| dU for small jumps") {
  GasModel gas;
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const State U = oracle::random_state(rng, gas, 0.5, 1.0);
    const Vec3 n = random_normal(rng);
    // flux Jacobian of F.n by central differences, |A| from its eigen-decomposition
    Eigen::Matrix<double, 5, 5> A;
    const Vec5 u = U.vec();
    for (int j = 0; j < 5; ++j) {
      const double eps = 1e-6 * std::max(1.0, std::abs(u[j]));
      Vec5 a = u, c = u;
      a[j] += eps;
      c[j] -= eps;
      const Vec5 fa = euler_flux_n(State{a[0], {a[1], a[2], a[3]}, a[4]}, n, gas);
      const Vec5 fc = euler_flux_n(State{c[0], {c[1], c[2], c[3]}, c[4]}, n, gas);
      for (int i = 0; i < 5; ++i) A(i, j) = (fa[i] - fc[i]) / (2.0 * eps);
    }
    Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>> es(A);
    const Eigen::Matrix<std::complex<double>, 5, 5> V = es.eigenvectors();
    const Eigen::Matrix<std::complex<double>, 5, 5> absA =
        V * es.eigenvalues().cwiseAbs().cast<std::complex<double>>().asDiagonal() * V.inverse();

    const double h = 1e-6;
    Eigen::Matrix<double, 5, 1> du;
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int i = 0; i < 5; ++i) du(i) = h * ud(rng) * std::max(1.0, std::abs(u[i]));
    Vec5 l = u, r = u;
    for (int i = 0; i < 5; ++i) {
      l[i] -= 0.5 * du(i);
      r[i] += 0.5 * du(i);
    }
    const Vec5 d = roe_matrix_dissipation(State{l[0], {l[1], l[2], l[3]}, l[4]},
                                           State{r[0], {r[1], r[2], r[3]}, r[4]}, n, gas);
    const Eigen::Matrix<double, 5, 1> ref = 0.5 * (absA * du.cast<std::complex<double>>()).real();
    const double scale = ref.cwiseAbs().maxCoeff();
    for (int i = 0; i < 5; ++i) CHECK(std::abs(d[i] - ref(i)) <= 1e-4 * scale + 1e-14);
  }
}

TEST_CASE("strong jumps blend to Rusanov dissipation") {
  GasModel gas;
  const State a = from_primitive(1.0, {0, 0, 0}, 1000.0, gas), b = from_primitive(1.0, {0, 0, 0}, 0.01, gas);
  const Vec3 n{1, 0, 0};
  const Vec5 d = mr_dissipation(a, b, n, gas), r = rusanov_dissipation(a, b, n, gas);
  for (int c = 0; c < 5; ++c) CHECK(d[c] == r[c]);
}

TEST_CASE("supersonic contact is upwinded") {
  GasModel gas;
  const Vec3 n{1, 0, 0};
  for (double u : {-3.0, 3.0}) {
    const State L = from_primitive(1.0, {u, 0, 0}, 1.0 / gas.gamma, gas);
    const State R = from_primitive(1.3, {u, 0, 0}, 1.0 / gas.gamma, gas);
    const Vec5 f = merriam_roe_flux(L, R, gas, n);
    CHECK(f[0] * u > 0.0);
  }
}

TEST_CASE("telescoped volume flux matches the literal double sum") {
  GasModel gas;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int p = 1; p <= 4; ++p) {
    const OperatorSet& o = operators(p);
    std::vector<State> line(o.N);
    std::vector<Vec3> a(o.N);
    for (int i = 0; i < o.N; ++i) {
      line[i] = oracle::random_state(rng, gas, 1.0);
      a[i] = {u(rng), u(rng) - 1.0, u(rng) - 1.0};
    }
    const auto f = telescoped_volume_flux(o, line, a, gas);
    const auto ref = oracle::ec_volume_flux_double_sum(o, line, a, gas);
    REQUIRE(f.size() == ref.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      for (int c = 0; c < 5; ++c) CHECK(std::abs(f[i][c] - ref[i][c]) <= 1e-13 * std::max(1.0, std::abs(ref[i][c])));
  }
}

TEST_CASE("telescoped volume flux: freestream and entropy identity") {
  GasModel gas;
  const OperatorSet& o = operators(4);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  // constant state, varying metric that telescopes from a polynomial: divergence is D a times F
  const State c = from_primitive(1.2, {0.4, -0.3, 0.1}, 0.9, gas);
  std::vector<State> line(o.N, c);
  std::vector<Vec3> a(o.N, Vec3{0.7, 0.2, -0.1});
  auto f = telescoped_volume_flux(o, line, a, gas);
  for (int cc = 0; cc < 5; ++cc) {
    std::vector<double> fb(o.N + 1);
    for (int i = 0; i <= o.N; ++i) fb[i] = f[i][cc];
    for (double v : telescope(o, fb)) CHECK(std::abs(v) < 1e-12);
  }

  // linear density with uniform velocity and pressure: sum_i w_i^T (Delta fbar)_i = F_S(N) - F_S(0)
  const Vec3 n{1.0, 0.0, 0.0};
  std::vector<Vec3> an(o.N, n);
  for (int i = 0; i < o.N; ++i) line[i] = from_primitive(1.0 + 0.3 * o.nodes[i], {0.5, 0.0, 0.0}, 1.0, gas);
  f = telescoped_volume_flux(o, line, an, gas);
  double prod = 0.0;
  for (int i = 0; i < o.N; ++i) {
    const Vec5 w = entropy_vars(line[i], gas).w;
    for (int cc = 0; cc < 5; ++cc) prod += w[cc] * (f[i + 1][cc] - f[i][cc]);
  }
  auto FS = [&](const State& s) {
    const EntropyVars e = entropy_vars(s, gas);
    const Vec5 fl = euler_flux_n(s, n, gas);
    double v = 0.0;
    for (int cc = 0; cc < 5; ++cc) v += e.w[cc] * fl[cc];
    return v - dot3(e.psi, n);
  };
  CHECK(std::abs(prod - (FS(line.back()) - FS(line.front()))) < 1e-12);
}

TEST_CASE("flux point metrics reproduce a linear metric field") {
  const OperatorSet& o = operators(3);
  std::vector<Vec3> a(o.N);
  for (int i = 0; i < o.N; ++i) a[i] = {1.0 + 0.2 * o.nodes[i], 0.0, 0.5};
  const auto fm = flux_point_metrics(o, a);
  REQUIRE(fm.size() == static_cast<std::size_t>(o.N + 1));
  CHECK(fm.front()[0] == doctest::Approx(a.front()[0]));
  CHECK(fm.back()[0] == doctest::Approx(a.back()[0]));
  // P^{-1} Delta of the flux-point metric equals D a
  std::vector<double> fb(o.N + 1);
  for (int i = 0; i <= o.N; ++i) fb[i] = fm[i][0];
  for (double v : telescope(o, fb)) CHECK(v == doctest::Approx(0.2).epsilon(1e-13));
  for (const Vec3& v : fm) CHECK(v[2] == doctest::Approx(0.5).epsilon(1e-14));
}

}
