#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ppes/time_integrator.hpp"

using namespace ppes;

namespace {

Mesh line_mesh(int K, int p) {
  BoxSpec b;
  b.K = {K, 1, 1};
  b.periodic = {true, true, true};
  b.collapsed = {false, true, true};
  return build_box_mesh(b, p);
}

}  // namespace

TEST_SUITE("time_integrator") {

TEST_CASE("stable dt example and scaling") {
  GasModel gas;  // R = 1
  const State s = from_primitive(1.0, {0, 0, 0}, 1.0 / gas.gamma, gas);  // c = 1
  StepController ctl;
  ctl.cfl = 1.0;
  const Mesh m1 = line_mesh(1, 1);
  const Field U1 = project(m1, [s](const Vec3&) { return s; });
  CHECK(stable_dt(m1, U1, gas, nullptr, ctl) == doctest::Approx(0.25).epsilon(1e-15));

  const Mesh m2 = line_mesh(2, 1);
  const Field U2 = project(m2, [s](const Vec3&) { return s; });
  CHECK(stable_dt(m2, U2, gas, nullptr, ctl) == doctest::Approx(0.125).epsilon(1e-15));

  AvFields av;
  av.mu.assign(m1.npts(), 0.3);
  av.muP.assign(m1.npts(), 0.2);
  const double d1 = stable_dt(m1, U1, gas, &av, ctl);
  for (double& v : av.mu) v *= 2.0;
  for (double& v : av.muP) v *= 2.0;
  CHECK(stable_dt(m1, U1, gas, &av, ctl) <= d1);
  CHECK(d1 <= 0.25);

  Field bad = U1;
  bad[4] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(stable_dt(m1, bad, gas, nullptr, ctl));
}

TEST_CASE("SSP-RK3 reproduces the third-order Taylor polynomial") {
  for (double z : {-0.3, -1.0, 0.5, -2.4}) {
    Field u{1.0};
    const double lambda = z / 0.1;
    ssp_rk3(u, 0.0, 0.1, [lambda](const Field& v, double, double dt, Field& out) {
      out.resize(v.size());
      out[0] = v[0] + dt * lambda * v[0];
    });
    CHECK(u[0] == doctest::Approx(1.0 + z + z * z / 2.0 + z * z * z / 6.0).epsilon(1e-14));
  }
}

TEST_CASE("freestream is preserved over 100 limited steps") {
  GasModel gas;
  gas.Re = 500.0;
  gas.Pr = 0.7;
  BoxSpec b;
  b.K = {2, 2, 2};
  b.alpha = 0.15;
  b.seed = 2;
  const Mesh m = build_box_mesh(b, 3);
  const double a = 10.0 * std::numbers::pi / 180.0;
  const State inf = from_primitive(1.0, {std::cos(a), std::sin(a), 0.0}, gas.R, gas);
  Discretization d(m, gas, RhsOptions{Scheme::PPESAD}, BoundaryData{[inf](const Vec3&, double) { return inf; }});
  StepController ctl;
  Integrator integ(d, ctl, ThetaMode::RandomPerStage, 5);
  integ.set_random_av(1.0 / gas.Re);
  Field U = project(m, [inf](const Vec3&) { return inf; });
  const Field U0 = U;
  const double dt = stable_dt(m, U, gas, nullptr, ctl);
  double t = 0.0;
  for (int n = 0; n < 100; ++n) t += integ.step(U, t, dt);
  double err = 0.0;
  for (std::size_t i = 0; i < U.size(); ++i) err = std::max(err, std::abs(U[i] - U0[i]));
  CHECK(err <= 1e-12);
}

TEST_CASE("computed limiter keeps a strong 1-D blast admissible") {
  GasModel gas;
  BoxSpec b;
  b.K = {20, 1, 1};
  b.collapsed = {false, true, true};
  b.periodic = {false, true, true};
  b.side_bc[0] = b.side_bc[1] = Bc::Outflow;
  const Mesh m = build_box_mesh(b, 3);
  RhsOptions o{Scheme::PPESAD};
  Discretization d(m, gas, o);
  StepController ctl;
  Integrator integ(d, ctl, ThetaMode::Computed, 0);
  Field U = project(m, [&](const Vec3& x) {
    return from_primitive(1.0, {0, 0, 0}, x[0] < 0.5 ? 1000.0 : 0.01, gas);
  });
  double t = 0.0;
  int limitedSteps = 0;
  for (int n = 0; n < 40; ++n) {
    const double dt = stable_dt(m, U, gas, &integ.av(), ctl);
    t += integ.step(U, t, dt);
    double r, T;
    field_minima(U, gas, r, T);
    CHECK(r > 0.0);
    CHECK(T > 0.0);
    limitedSteps += integ.last_step().limited > 0;
  }
  CHECK(limitedSteps > 0);
}

}
