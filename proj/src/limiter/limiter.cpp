#include "ppes/limiter.hpp"

#include <algorithm>
#include <cmath>

#include "ppes/thermo.hpp"

namespace ppes {

double relative_pressure_jump(double pL, double pR) { return std::abs(pL - pR) / (pL + pR); }

double aleph(double Sn, double maxRelJump) { return std::max(kAlephFloor, Sn * maxRelJump); }

State mix(const State& U1, const State& Up, double theta) {
  State s;
  s.rho = U1.rho + theta * (Up.rho - U1.rho);
  for (int k = 0; k < 3; ++k) s.m[k] = U1.m[k] + theta * (Up.m[k] - U1.m[k]);
  s.Et = U1.Et + theta * (Up.Et - U1.Et);
  return s;
}

double ie_along(const State& U1, const State& Up, double theta) { return internal_energy(mix(U1, Up, theta)); }

double theta_rho(double rho1, double rhoP, double eps) {
  require(rho1 > eps && eps > 0.0, "theta_rho: requires rho1 > eps > 0");
  if (rhoP >= eps) return 1.0;
  return (rho1 - eps) / (rho1 - rhoP);
}

namespace {

// rho(theta) * (IE(theta) - eps), a quadratic in theta
double ie_residual(const State& U1, const State& Up, double theta, double eps) {
  const State s = mix(U1, Up, theta);
  return s.rho * s.Et - 0.5 * dot3(s.m, s.m) - eps * s.rho;
}

double bisect(const State& U1, const State& Up, double hi, double eps) {
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (ie_residual(U1, Up, mid, eps) >= 0.0) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

double theta_ie(const State& U1, const State& Up, double thetaRho, double eps) {
  require(thetaRho > 0.0 && thetaRho <= 1.0, "theta_ie: thetaRho outside (0, 1]");
  require(U1.rho > 0.0 && internal_energy(U1) > eps, "theta_ie: first-order state below bound");
  if (ie_residual(U1, Up, thetaRho, eps) >= 0.0) return thetaRho;

  const double drho = Up.rho - U1.rho, dE = Up.Et - U1.Et;
  const Vec3 dm{Up.m[0] - U1.m[0], Up.m[1] - U1.m[1], Up.m[2] - U1.m[2]};
  const double a = drho * dE - 0.5 * dot3(dm, dm);
  const double b = U1.rho * dE + U1.Et * drho - dot3(U1.m, dm) - eps * drho;
  const double c = U1.rho * U1.Et - 0.5 * dot3(U1.m, U1.m) - eps * U1.rho;

  double root = -1.0;
  const double scale = std::abs(a) + std::abs(b) + std::abs(c);
  if (std::abs(a) <= 1e-14 * scale) {
    if (b != 0.0) root = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      const double r1 = q / a;
      const double r2 = q != 0.0 ? c / q : -1.0;
      for (double r : {r1, r2})
        if (r > 0.0 && r <= thetaRho && (root < 0.0 || r < root)) root = r;
    }
  }
  if (root > 0.0 && root <= thetaRho) {
    // accept only a root that keeps the bound, stepping down through roundoff
    for (int k = 0; k < 8 && ie_residual(U1, Up, root, eps) < 0.0; ++k) root *= 1.0 - 4e-16;
    if (ie_residual(U1, Up, root, eps) >= 0.0 && std::abs(ie_residual(U1, Up, root, eps)) <= 1e-9 * scale)
      return root;
  }
  return bisect(U1, Up, thetaRho, eps);
}

LimitResult limit_element(const double* U1, const double* Up, int npts, double al) {
  LimitResult r;
  for (int i = 0; i < npts; ++i) {
    const State s1 = State::from(U1 + 5 * i);
    const State sp = State::from(Up + 5 * i);
    if (!admissible(s1)) throw InadmissibleState(s1, -1, i);
    const double epsRho = al * s1.rho;
    const double epsIE = al * internal_energy(s1);
    const double tr = theta_rho(s1.rho, sp.rho, epsRho);
    const double ti = theta_ie(s1, sp, tr, epsIE);
    if (ti < r.theta) {
      r.theta = ti;
      r.worstPoint = i;
    }
  }
  return r;
}

}  // namespace ppes
