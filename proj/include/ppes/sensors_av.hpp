#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ppes/mesh.hpp"
#include "ppes/thermo.hpp"

namespace ppes {

struct AvConfig {
  double C_av = 0.5;     // mu_max = C_av h_k max(jump)
  double delta = 0.0;    // sensor threshold is max(0.2, delta)
  double c_rho = 0.9;
};

/// max(1, (p-1)/(p-1.5)); p = 1 gives 1.
double sensor_exponent(int p);

struct SensorValue {
  double rmax = 0.0;
  double Sn0 = 0.0;
  double Sn = 0.0;
};

/// Sn0 = rmax^exponent, kept only above max(0.2, delta).
SensorValue sensor_from_residual(double rmax, int p, double delta);

/// Normalised entropy residual of one element from its inviscid high-order rhs
/// (dU/dt, npts*5): r_i = |w_i^T rhs_i + (div F_S)_i| h / (max|S| lambda_max).
SensorValue entropy_residual_sensor(const Mesh& mesh, const Element& e, const double* U, const double* rhsInv,
                                    const GasModel& gas, double h, double delta);

/// Local grid scale used by the sensor and the viscosity magnitude.
double element_scale(const Mesh& mesh, const Element& e);

/// Jump indicator rho_bar |dV . n| + |dP| / c_bar between two states; n is
/// normalised internally.
double pair_jump(const State& a, const State& b, const Vec3& n, const GasModel& gas);

/// mu_max = C_av h max over neighbouring point pairs of pair_jump. traces[f]
/// (neighbour states at face f, face-point major) adds interface pairs, whose
/// direction is the face metric.
double element_mu_max(const Mesh& mesh, const Element& e, const double* U,
                      const std::array<const double*, kFaces>& traces, const GasModel& gas, double C_av);

/// Vertex maximum over incident elements.
std::vector<double> vertex_max(const Mesh& mesh, const std::vector<double>& elementValue);

/// Tri-linear interpolation of vertex data to the points of every element (element-major).
std::vector<double> interpolate_vertices(const Mesh& mesh, const std::vector<double>& vertexValue);

/// chi per vertex: 1 when any incident element is limited.
std::vector<std::uint8_t> vertex_chi(const Mesh& mesh, const std::vector<std::uint8_t>& limited);

struct AvFields {
  std::vector<double> Sn;        // per element
  std::vector<double> muMax;     // per element
  std::vector<double> muVertex;  // per logical vertex
  std::vector<double> mu;        // per point, element-major
  std::vector<double> muP;       // per point, element-major
  std::vector<std::uint8_t> limited;
  std::vector<std::uint8_t> chiVertex;

  bool empty() const { return mu.empty(); }
};

/// Fills muVertex, mu, chiVertex and muP from Sn * muMax and the limited flags.
void smooth_and_split(const Mesh& mesh, AvFields& av);

/// Low-order viscosity at the N+1 flux points of one line from the point
/// values of mu and mu_p.
void mu_bar_line(int N, const double* mu, const double* muP, int stride, double* out);

/// sigma_bar = max(chiBoundary * sigmaMin, c_rho muBar / sqrt(rhoL rhoR)).
double sigma_bar(bool chiBoundary, double sigmaMin, double muBar, double rhoL, double rhoR, double c_rho);

/// sigma_hat = max(sigmaMin - sigmaBar, 0).
inline double sigma_hat(double sigmaMin, double sigmaBar) { return sigmaMin > sigmaBar ? sigmaMin - sigmaBar : 0.0; }

/// Density diffusion equivalent to local Lax-Friedrichs dissipation with the
/// largest wave speed of the pair: 0.5 lambda Jbar delta / |a|.
double sigma_min(const State& L, const State& R, const Vec3& a, double Jbar, double delta, const GasModel& gas);

}  // namespace ppes
