#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "ppes/rhs.hpp"

namespace ppes {

/// How theta_f is chosen per element and stage.
enum class ThetaMode { Computed, RandomPerStage, RandomFixed };

struct StepController {
  double cfl = 0.5;
  double dtMin = 1e-14;
  double dtMax = std::numeric_limits<double>::infinity();
  double retryFactor = 0.5;
  int maxRetries = 10;
  double convectiveFactor = 2.0;  // exponent of (p+1)
  double diffusiveFactor = 4.0;
};

/// cfl * min over points of h/((|V|+c)(p+1)^2) and h^2/(nu (p+1)^4).
double stable_dt(const Mesh& mesh, const Field& U, const GasModel& gas, const AvFields* av,
                 const StepController& ctl, double c_rho = 0.9);

/// Three-stage SSP-RK3 built from a forward-Euler map euler(u, t, dt, out).
using EulerMap = std::function<void(const Field&, double, double, Field&)>;
void ssp_rk3(Field& u, double t, double dt, const EulerMap& euler);

struct StageStats {
  int limited = 0;
  int rescued = 0;
  int passes = 0;
  double minTheta = 1.0;
  double maxSn = 0.0;
};

struct StepStats {
  double dt = 0.0;
  int retries = 0;
  int limited = 0;  // elements with theta_f < 1 in any stage
  double minTheta = 1.0;
  double maxSn = 0.0;
  double minRho = 0.0;
  double minT = 0.0;
  Vec5 boundaryFlux{};  // time integral of the boundary flux rate over the step
};

class Integrator {
 public:
  Integrator(Discretization& disc, StepController ctl, ThetaMode mode = ThetaMode::Computed,
             std::uint64_t seed = 0);

  /// Random artificial viscosity per stage: mu_p and mu_bar uniform in [0, maxMu].
  void set_random_av(double maxMu) { randomAvMax_ = maxMu; }

  /// One limited forward-Euler substep.
  void euler_substep(const Field& U, double t, double dt, Field& out);

  /// SSP-RK3 step with positivity retries. Returns the accepted time step.
  double step(Field& U, double t, double dt);

  const StepStats& last_step() const { return stats_; }
  const AvFields& av() const { return av_; }
  /// theta_f of the last stage.
  const std::vector<double>& theta() const { return theta_; }
  /// Largest 1 - theta_f seen over the last accepted step.
  double max_limiting() const { return 1.0 - stats_.minTheta; }

 private:
  void max_pressure_jumps(const Field& U1, std::vector<double>& out) const;

  Discretization& disc_;
  StepController ctl_;
  ThetaMode mode_;
  std::mt19937_64 rng_;
  double randomAvMax_ = -1.0;
  AvFields av_;
  std::vector<double> theta_;
  std::vector<double> fixedTheta_;
  StageStats stage_;
  Vec5 stageBoundary_{};
  StepStats stats_;
  Field rhsP_, rhs1_, par_, sig_, U1_, Up_;
};

/// Minimum density and temperature over the field.
void field_minima(const Field& U, const GasModel& gas, double& minRho, double& minT);

}  // namespace ppes
