#pragma once

#include "ppes/common.hpp"

namespace ppes {

inline constexpr double kAlephFloor = 1e-8;

/// |pL - pR| / (pL + pR), i.e. |dP| / (2 P_avg).
double relative_pressure_jump(double pL, double pR);

/// max(1e-8, Sn * maxRelJump).
double aleph(double Sn, double maxRelJump);

/// Point on the mixing line U1 + theta (Up - U1).
State mix(const State& U1, const State& Up, double theta);

/// Internal energy per unit volume along the mixing line.
double ie_along(const State& U1, const State& Up, double theta);

/// Largest theta in [0, 1] with rho(theta) >= eps (closed set).
double theta_rho(double rho1, double rhoP, double eps);

/// Largest theta in [0, thetaRho] with IE(theta) >= eps on the whole interval.
double theta_ie(const State& U1, const State& Up, double thetaRho, double eps);

struct LimitResult {
  double theta = 1.0;
  long worstPoint = -1;
};

/// Element limiter theta_f = min_i theta^IE_i for npts points stored as
/// 5-vectors. eps bounds are aleph * (rho, IE) of the first-order states.
LimitResult limit_element(const double* U1, const double* Up, int npts, double aleph);

}  // namespace ppes
