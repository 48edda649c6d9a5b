#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppes/dissipation.hpp"
#include "ppes/mesh.hpp"
#include "ppes/sensors_av.hpp"
#include "ppes/thermo.hpp"

namespace ppes {

enum class Scheme { ESSC, PPES, PPESAD };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& s);

struct BoundaryData {
  /// Dirichlet state for far-field faces; may depend on time.
  std::function<State(const Vec3& x, double t)> farfield;
};

struct RhsOptions {
  Scheme scheme = Scheme::ESSC;
  /// Drop all Merriam-Roe dissipation (interfaces and the first-order interior).
  bool entropyConservative = false;
  AvConfig av;
};

/// Solution field: element-major, point-major, 5 components innermost.
using Field = std::vector<double>;

/// Semi-discrete operator. prepare() caches the per-stage data (primitives,
/// traces, face fluxes); the assembly calls then only read it.
class Discretization {
 public:
  Discretization(const Mesh& mesh, const GasModel& gas, RhsOptions opts, BoundaryData bc = {});

  const Mesh& mesh() const { return *mesh_; }
  const GasModel& gas() const { return gas_; }
  const RhsOptions& options() const { return opts_; }
  std::size_t field_size() const { return mesh_->elements.size() * mesh_->npts() * kNv; }

  /// Phase 1: traces, ghost states and inviscid face fluxes at time t.
  void prepare(const Field& U, double t);

  /// -sum P^{-1} Delta fbar + inviscid SATs with the high-order EC volume flux (dU/dt).
  void inviscid_high(Field& out) const;
  /// Same with the first-order Merriam-Roe flux at interior flux points.
  void inviscid_low(Field& out) const;
  /// Physical viscous terms plus the high- and low-order artificial dissipation.
  /// av may be null (no artificial dissipation).
  void parabolic(const AvFields* av, Field& out);
  /// Density rescue diffusion at interior flux points of flagged elements.
  void rescue(const AvFields& av, const std::vector<std::uint8_t>& flagged, Field& out) const;

  /// Sensor and viscosity magnitude from the prepared state and the inviscid
  /// high-order rhs; fills Sn and muMax.
  void sensor(const Field& rhsInv, AvFields& av) const;

  /// ESSC right-hand side: inviscid_high + parabolic(null).
  void rhs_baseline(const Field& U, double t, Field& out);

  /// Net rate of change of the conserved totals through physical boundaries
  /// for the last prepare() and parabolic() calls (theta independent).
  Vec5 boundary_flux_rate() const;

  /// Entropy variables of the prepared state (npts*5 per element).
  const Field& entropy_variables() const { return w_; }

 private:
  struct Link {
    long nbr = -1;
    int nbrFace = -1;
    std::vector<int> perm;  // my face point -> neighbour face point
    long boundary = -1;     // index into mesh.boundaryFaces
  };

  std::size_t face_offset(long e, int f) const { return e * faceBlock_ + faceStart_[f]; }
  const double* point(const Field& U, long e, int pt) const { return U.data() + (e * npts_ + pt) * kNv; }
  State ghost(const Element& e, int f, int q, const State& own, double t) const;
  Vec5 inviscid_face_flux(const State& L, const State& R, const Vec3& n) const;
  void face_ad(const AvFields& av, long e, int f, Vec5* out) const;

  const Mesh* mesh_;
  GasModel gas_;
  RhsOptions opts_;
  BoundaryData bc_;
  int npts_;
  std::size_t faceBlock_ = 0;
  std::array<std::size_t, kFaces> faceStart_{};
  std::vector<Link> links_;  // element * 6 + face

  const Field* U_ = nullptr;
  double t_ = 0.0;
  Field w_;
  Field traceU_;    // neighbour or ghost state at each face point
  Field traceW_;    // its entropy variables
  Field faceFlux_;  // inviscid flux at element boundary flux points
  Field theta_;     // entropy-variable gradients, npts*15 per element
  Field fhat_;      // contravariant dissipative flux per direction, 3*npts*5 per element
  Vec5 boundaryInviscid_{};
  Vec5 boundaryParabolic_{};
};

/// dU/dt = theta rhsP + (1 - theta) rhs1 + rhsAD, theta constant per element.
void blend(const Mesh& mesh, const Field& rhsP, const Field& rhs1, const Field& rhsAD,
           const std::vector<double>& theta, Field& out);

/// sum_k sum_i P_i J_i u_i for each conservative component.
Vec5 integrate_conserved(const Mesh& mesh, const Field& u);

/// sum P J S over the mesh.
double total_entropy(const Mesh& mesh, const Field& U, const GasModel& gas);

/// sum P J (S(U) - S(U0)), evaluated pointwise so it resolves changes far below
/// the ulp of the total. inflow is the net amount of each conserved quantity that
/// entered through the boundary; the part of the change carried by the totals is
/// taken from it rather than from the rounded field sums.
double entropy_change(const Mesh& mesh, const Field& U0, const Field& U, const GasModel& gas,
                      const Vec5& inflow = {});

/// sum P J w^T rhs over the mesh.
double entropy_rate(const Mesh& mesh, const Field& U, const Field& rhs, const GasModel& gas);

/// Fills a field from a pointwise function of position.
Field project(const Mesh& mesh, const std::function<State(const Vec3&)>& f);

}  // namespace ppes
