#pragma once

#include <cmath>
#include <limits>

#include "ppes/common.hpp"

namespace ppes {

enum class ViscosityLaw { Constant, Sutherland };

/// Calorically perfect gas, nondimensional. Re = infinity gives inviscid flow.
struct GasModel {
  double gamma = 1.4;
  double R = 1.0;
  double Pr = 0.72;
  double Re = std::numeric_limits<double>::infinity();
  ViscosityLaw law = ViscosityLaw::Constant;
  double sutherland_Tref = 1.0;
  double sutherland_S = 110.4 / 288.15;  // S / T_ref

  double cp() const { return gamma * R / (gamma - 1.0); }
  double cv() const { return R / (gamma - 1.0); }
  bool viscous() const { return Re < std::numeric_limits<double>::infinity(); }
  /// mu(T)/Re, the coefficient multiplying the stress tensor.
  double mu(double T) const;
  /// Thermal conductivity paired with mu(T): mu c_p / Pr.
  double kappa(double T) const { return mu(T) * cp() / Pr; }
  void validate() const;
};

struct Primitive {
  double rho, p, T, IE, KE, H, c;
  Vec3 V;
};

/// Internal energy per unit volume, Et - |m|^2 / (2 rho).
inline double internal_energy(const State& U) {
  return U.Et - 0.5 * dot3(U.m, U.m) / U.rho;
}

inline bool admissible(const State& U) {
  return U.rho > 0.0 && internal_energy(U) > 0.0 && std::isfinite(U.Et);
}

Primitive primitive(const State& U, const GasModel& gas, long element = -1, long point = -1);
State from_primitive(double rho, const Vec3& V, double p, const GasModel& gas);

/// Thermodynamic entropy s = R/(gamma-1) ln(P rho^-gamma).
/// Relative pressure/density jumps between kJumpOnset and kJumpFull ramp two-point
/// dissipation from forms linear in w_R - w_L at the averaged state to forms
/// linear in U_R - U_L. The averaged dU/dw overshoots U_R - U_L by (1 + q)^2 / 4q
/// for a pressure ratio q, which breaks first-order positivity.
inline constexpr double kJumpOnset = 0.2;
inline constexpr double kJumpFull = 0.6;
double strong_jump_weight(const State& UL, const State& UR, const GasModel& gas);

double specific_entropy(double rho, double p, const GasModel& gas);
/// Mathematical entropy S = -rho s.
double entropy(const State& U, const GasModel& gas);

struct EntropyVars {
  Vec5 w;
  Vec3 psi;  // psi_m = rho V_m R
};

EntropyVars entropy_vars(const State& U, const GasModel& gas);
/// Inverse map w -> U.
State state_from_entropy_vars(const Vec5& w, const GasModel& gas);

/// Lower bounds b_1..b_5 of the Cholesky factors of S_UU.
Vec5 hessian_bounds(const State& U, const GasModel& gas);

/// dU/dw, symmetric positive definite, row-major 5x5.
std::array<double, 25> dU_dw(const State& U, const GasModel& gas);

}  // namespace ppes
