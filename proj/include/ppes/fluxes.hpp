#pragma once

#include <span>
#include <vector>

#include "ppes/common.hpp"
#include "ppes/sbp.hpp"
#include "ppes/thermo.hpp"

namespace ppes {

/// Cartesian inviscid flux F_{x_m}, m in {0,1,2}.
Vec5 euler_flux(const State& U, int m, const GasModel& gas);
/// sum_m n_m F_{x_m}.
Vec5 euler_flux_n(const State& U, const Vec3& n, const GasModel& gas);

/// Logarithmic mean (a - b) / (ln a - ln b), series-guarded near a = b.
double log_mean(double a, double b);

/// Primitive data cached per point for repeated two-point flux evaluation.
struct FluxPoint {
  double rho, p, beta, v2;
  Vec3 V;
  static FluxPoint from(const State& U, const GasModel& gas, long element = -1, long point = -1);
};

/// Entropy-conservative two-point flux contracted with n.
Vec5 ec_flux_n(const FluxPoint& a, const FluxPoint& b, const Vec3& n, const GasModel& gas);
Vec5 ec_flux_n(const State& U1, const State& U2, const Vec3& n, const GasModel& gas);
/// Cartesian direction m.
Vec5 ec_flux(const State& U1, const State& U2, const GasModel& gas, int m);

/// Entropy-scaled Roe dissipation 0.5 |A_n| (w_R - w_L) at the arithmetic-average
/// primitive state; n need not be unit length.
Vec5 roe_matrix_dissipation(const State& UL, const State& UR, const Vec3& n, const GasModel& gas);

/// 0.5 lambda_max (U_R - U_L) with lambda_max the larger |V.n| + c|n| of the two states.
Vec5 rusanov_dissipation(const State& UL, const State& UR, const Vec3& n, const GasModel& gas);

/// (1 - phi) roe_matrix_dissipation + phi rusanov_dissipation, phi = strong_jump_weight.
Vec5 mr_dissipation(const State& UL, const State& UR, const Vec3& n, const GasModel& gas);

/// Merriam-Roe flux: ec_flux_n - mr_dissipation.
Vec5 merriam_roe_flux(const State& UL, const State& UR, const GasModel& gas, const Vec3& n);

/// Flux-point metric values obtained by telescoping a line of point metrics:
/// interior sum_{l<=i<j} q_lj (a_l + a_j), boundaries a_1 and a_N.
std::vector<Vec3> flux_point_metrics(const OperatorSet& ops, std::span<const Vec3> metric);

/// High-order entropy-conservative flux at the N+1 flux points of one line.
std::vector<Vec5> telescoped_volume_flux(const OperatorSet& ops, std::span<const State> line,
                                         std::span<const Vec3> metric, const GasModel& gas);

}  // namespace ppes
