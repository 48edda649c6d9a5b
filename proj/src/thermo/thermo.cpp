#include "ppes/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace ppes {

double GasModel::mu(double T) const {
  if (!viscous()) return 0.0;
  if (law == ViscosityLaw::Constant) return 1.0 / Re;
  const double t = T / sutherland_Tref;
  return t * std::sqrt(t) * (1.0 + sutherland_S) / (t + sutherland_S) / Re;
}

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(R > 0.0)) throw ConfigError("gas constant must be positive");
  if (!(Pr > 0.0)) throw ConfigError("Prandtl number must be positive");
  if (!(Re > 0.0)) throw ConfigError("Reynolds number must be positive");
}

Primitive primitive(const State& U, const GasModel& gas, long element, long point) {
  if (!(U.rho > 0.0)) throw InadmissibleState(U, element, point);
  Primitive q;
  q.rho = U.rho;
  const double inv = 1.0 / U.rho;
  q.V = {U.m[0] * inv, U.m[1] * inv, U.m[2] * inv};
  q.KE = 0.5 * dot3(U.m, q.V);
  q.IE = U.Et - q.KE;
  if (!(q.IE > 0.0) || !std::isfinite(q.IE)) throw InadmissibleState(U, element, point);
  q.p = (gas.gamma - 1.0) * q.IE;
  q.T = q.p / (U.rho * gas.R);
  q.H = (U.Et + q.p) * inv;
  q.c = std::sqrt(gas.gamma * q.p * inv);
  return q;
}

State from_primitive(double rho, const Vec3& V, double p, const GasModel& gas) {
  State U;
  U.rho = rho;
  U.m = {rho * V[0], rho * V[1], rho * V[2]};
  U.Et = p / (gas.gamma - 1.0) + 0.5 * rho * dot3(V, V);
  return U;
}

double specific_entropy(double rho, double p, const GasModel& gas) {
  return gas.R / (gas.gamma - 1.0) * (std::log(p) - gas.gamma * std::log(rho));
}

double entropy(const State& U, const GasModel& gas) {
  const Primitive q = primitive(U, gas);
  return -q.rho * specific_entropy(q.rho, q.p, gas);
}

EntropyVars entropy_vars(const State& U, const GasModel& gas) {
  const Primitive q = primitive(U, gas);
  const double g = gas.gamma;
  const double sbar = std::log(q.p) - g * std::log(q.rho);
  const double invT = 1.0 / q.T;
  EntropyVars e;
  e.w[0] = gas.R * (g - sbar) / (g - 1.0) - 0.5 * dot3(q.V, q.V) * invT;
  e.w[1] = q.V[0] * invT;
  e.w[2] = q.V[1] * invT;
  e.w[3] = q.V[2] * invT;
  e.w[4] = -invT;
  e.psi = {U.m[0] * gas.R, U.m[1] * gas.R, U.m[2] * gas.R};
  return e;
}

State state_from_entropy_vars(const Vec5& w, const GasModel& gas) {
  const double g = gas.gamma;
  if (!(w[4] < 0.0)) throw ContractViolation("entropy variables require w5 < 0");
  const double T = -1.0 / w[4];
  const Vec3 V{w[1] * T, w[2] * T, w[3] * T};
  const double sbar = g - (g - 1.0) * (w[0] + 0.5 * dot3(V, V) / T) / gas.R;
  const double rho = std::exp((std::log(gas.R * T) - sbar) / (g - 1.0));
  return from_primitive(rho, V, rho * gas.R * T, gas);
}

Vec5 hessian_bounds(const State& U, const GasModel& gas) {
  const Primitive q = primitive(U, gas);
  const double g = gas.gamma, R = gas.R, rho = q.rho, P = q.p;
  const double v2 = dot3(q.V, q.V);
  Vec5 b;
  b[0] = rho / R;
  for (int i = 0; i < 3; ++i) b[i + 1] = (P + rho * q.V[i] * q.V[i]) / R;
  const double ke = 0.5 * rho * v2;
  b[4] = (P * P * g + P * rho * v2 * g + ke * ke) / (R * rho);
  return b;
}

std::array<double, 25> dU_dw(const State& U, const GasModel& gas) {
  const Primitive q = primitive(U, gas);
  const double rho = q.rho, p = q.p, H = q.H, E = U.Et / rho;
  const double s = 1.0 / gas.R;
  std::array<double, 25> A{};
  auto set = [&](int i, int j, double v) {
    A[i * 5 + j] = v * s;
    A[j * 5 + i] = v * s;
  };
  set(0, 0, rho);
  for (int i = 0; i < 3; ++i) {
    set(0, i + 1, rho * q.V[i]);
    for (int j = i; j < 3; ++j) set(i + 1, j + 1, rho * q.V[i] * q.V[j] + (i == j ? p : 0.0));
    set(i + 1, 4, rho * q.V[i] * H);
  }
  set(0, 4, rho * E);
  set(4, 4, rho * H * H - q.c * q.c * p / (gas.gamma - 1.0));
  return A;
}

double strong_jump_weight(const State& UL, const State& UR, const GasModel& gas) {
  const double pL = (gas.gamma - 1.0) * internal_energy(UL), pR = (gas.gamma - 1.0) * internal_energy(UR);
  const double j = std::max(std::abs(pR - pL) / (pL + pR), std::abs(UR.rho - UL.rho) / (UL.rho + UR.rho));
  return std::clamp((j - kJumpOnset) / (kJumpFull - kJumpOnset), 0.0, 1.0);
}

}  // namespace ppes
