#pragma once

#include <array>

#include "ppes/common.hpp"
#include "ppes/mesh.hpp"
#include "ppes/thermo.hpp"

namespace ppes {

/// Gradients of the entropy variables, Theta[j] = dw/dx_j.
using Grad = std::array<Vec5, 3>;

/// Brenner constants; c_T is derived as c_rho c_P / gamma.
struct AdConstants {
  double c_rho = 0.9;
  double c_T(const GasModel& gas) const { return c_rho * gas.cp() / gas.gamma; }
};

/// Scalar coefficients of the symmetric dissipation tensor: stress (mu),
/// heat conduction (kappa) and Brenner mass diffusion (sigma).
struct ViscousCoeffs {
  double mu = 0.0;
  double kappa = 0.0;
  double sigma = 0.0;

  ViscousCoeffs& operator+=(const ViscousCoeffs& o) {
    mu += o.mu;
    kappa += o.kappa;
    sigma += o.sigma;
    return *this;
  }
};

ViscousCoeffs physical_coeffs(const Primitive& q, const GasModel& gas);
/// sigma = c_rho muAD / rho, kappa = c_T muAD. Throws ContractViolation for muAD < 0.
ViscousCoeffs brenner_coeffs(const Primitive& q, double muAD, const GasModel& gas,
                             const AdConstants& ad = {});

/// Cartesian dissipative fluxes f_{x_m} = sum_j c_{m,j} Theta_j.
Grad viscous_flux(const Primitive& q, const Grad& theta, const ViscousCoeffs& c);

/// Contravariant combination sum_m a_m f_{x_m}.
Vec5 contract(const Vec3& a, const Grad& f);

/// Full 15x15 tensor (row m*5+a, column j*5+b), assembled by probing viscous_flux.
std::array<double, 225> viscous_tensor(const Primitive& q, const ViscousCoeffs& c);

/// Entropy-variable gradients at every point of one element.
/// w: npts*5. traces[f]: neighbour (or ghost) w at face f, face-point major;
/// required for every face normal to an active direction. theta: npts*15,
/// theta[pt*15 + 5*j + c].
void ldg_gradient(const Mesh& mesh, const Element& e, const double* w,
                  const std::array<const double*, kFaces>& traces, double* theta);

/// Two-point first-order Brenner flux between neighbouring points with
/// contravariant metric a, mean Jacobian Jbar and reference spacing delta.
/// Stress and heat parts use the w-jump form at the averaged state, blended
/// into scalar diffusion of U across strong jumps (strong_jump_weight).
Vec5 low_order_viscous_flux(const State& L, const State& R, const Vec3& a, double Jbar, double delta,
                            double muAD, const GasModel& gas, const AdConstants& ad = {});

/// sigma (rho_R - rho_L) coef [1, V, E/rho], specific values from the denser side,
/// coef = |a|^2 / (Jbar delta).
Vec5 low_order_mass_diffusion(const State& L, const State& R, double sigma, double coef);

}  // namespace ppes
